"""Stationary map, currents and boundary closed forms."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import saddle_root_bisect
from tasep2 import (
    Currents,
    Densities,
    ModelParams,
    OutOfDomain,
    PoleEvaluation,
    SingularMap,
    ZPoint,
    boundary_current,
    currents_from_z,
    currents_residual,
    densities_from_z,
    factorized_currents,
    leroux_coordinates,
    leroux_flux_constants,
    solve_z,
    tracer_speed,
)

# parameter pairs spanning the three regimes: both rates above 1, both
# below with sum above 1, and sum below 1 (plus rate-1 edges)
PARAM_PAIRS = [
    (2.0, 3.0), (1.3, 1.1), (0.8, 0.7), (0.6, 0.9),
    (0.2, 0.3), (0.45, 0.4), (1.0, 0.6), (2.5, 0.3),
]


def density_grid(n: int = 12, margin: float = 0.02):
    vals = np.linspace(margin, 1.0 - margin, n)
    return [
        Densities(rw, rb)
        for rw in vals
        for rb in vals
        if rw + rb <= 1.0 - margin
    ]


def saddle_poly(gamma, rho_self, rho_other, rho_star, z):
    return (rho_self * (z - 1.0) * (z - gamma)
            + rho_other * z * (z - gamma)
            + rho_star * z * (z - 1.0))


class TestSolveZ:
    def test_rate_one_closed_form(self):
        # at alpha = beta = 1 the coordinates are the densities themselves
        z = solve_z(ModelParams(1.0, 1.0), Densities(0.3, 0.2))
        assert z.z_alpha == pytest.approx(0.3, abs=1e-15)
        assert z.z_beta == pytest.approx(0.2, abs=1e-15)

    def test_singular_edge_maps_to_corner(self):
        # vanishing white density with a supercritical black density pins (0, 1)
        for beta, rb in ((2.0, 0.6), (1.5, 0.9), (4.0, 0.25)):
            z = solve_z(ModelParams(0.7, beta), Densities(0.0, rb))
            assert z.z_alpha == 0.0
            assert z.z_beta == 1.0

    def test_against_bisection_oracle(self):
        params = ModelParams(0.4, 0.3)
        dens = Densities(0.3, 0.3)
        z = solve_z(params, dens)
        za_ref = saddle_root_bisect(0.4, 0.3, 0.3, 0.4)
        zb_ref = saddle_root_bisect(0.3, 0.3, 0.3, 0.4)
        assert z.z_alpha == pytest.approx(za_ref, abs=1e-12)
        assert z.z_beta == pytest.approx(zb_ref, abs=1e-12)

    @pytest.mark.parametrize("alpha,beta", PARAM_PAIRS)
    def test_saddle_residual(self, alpha, beta):
        params = ModelParams(alpha, beta)
        for dens in density_grid():
            z = solve_z(params, dens)
            rw, rb, rs = dens.rho_white, dens.rho_black, dens.rho_star
            assert abs(saddle_poly(alpha, rw, rb, rs, z.z_alpha)) <= 1e-12
            assert abs(saddle_poly(beta, rb, rw, rs, z.z_beta)) <= 1e-12

    def test_domain_membership(self):
        for alpha, beta in PARAM_PAIRS:
            params = ModelParams(alpha, beta)
            for dens in density_grid():
                z = solve_z(params, dens)
                z.validate(params, slack=1e-14)

    def test_invalid_densities_rejected(self):
        with pytest.raises(OutOfDomain):
            Densities(-0.1, 0.5)
        with pytest.raises(OutOfDomain):
            Densities(0.7, 0.5)
        with pytest.raises(OutOfDomain):
            ModelParams(0.0, 1.0)

    def test_critical_density_continuity(self):
        # both branches agree at the supercritical threshold rho = 1/beta
        params = ModelParams(0.7, 2.0)
        z_at = solve_z(params, Densities(0.0, 0.5))
        z_below = solve_z(params, Densities(0.0, 0.5 - 1e-12))
        assert z_at.z_beta == pytest.approx(1.0, abs=1e-11)
        assert z_below.z_beta == pytest.approx(z_at.z_beta, abs=1e-11)


class TestDensitiesFromZ:
    def test_rate_one_identity_inverse(self):
        d = densities_from_z(ModelParams(1.0, 1.0), ZPoint(0.3, 0.2))
        assert d.rho_white == pytest.approx(0.3, abs=1e-15)
        assert d.rho_black == pytest.approx(0.2, abs=1e-15)

    def test_z_alpha_zero_edge(self):
        # the inverse map is one-to-one on that edge for beta <= 1
        for beta, zb in ((0.8, 0.3), (1.0, 0.45), (0.5, 0.2)):
            d = densities_from_z(ModelParams(0.6, beta), ZPoint(0.0, zb))
            assert d.rho_white == pytest.approx(0.0, abs=1e-14)
            assert d.rho_black == pytest.approx(zb / beta, abs=1e-13)

    def test_singular_points_raise(self):
        # overlap corner for alpha + beta < 1
        with pytest.raises(SingularMap):
            densities_from_z(ModelParams(0.3, 0.2), ZPoint(0.3, 0.2))
        # full line is singular when alpha + beta = 1
        with pytest.raises(SingularMap):
            densities_from_z(ModelParams(0.4, 0.6), ZPoint(0.25, 0.75))

    def test_out_of_domain_z(self):
        with pytest.raises(OutOfDomain):
            densities_from_z(ModelParams(0.5, 0.5), ZPoint(0.6, 0.1))
        with pytest.raises(OutOfDomain):
            densities_from_z(ModelParams(2.0, 2.0), ZPoint(0.7, 0.7))

    @settings(max_examples=200, deadline=None)
    @given(
        alpha=st.floats(0.1, 3.0),
        beta=st.floats(0.1, 3.0),
        fw=st.floats(0.02, 0.98),
        fb=st.floats(0.02, 0.98),
    )
    def test_round_trip_property(self, alpha, beta, fw, fb):
        # map interior densities forward and back
        rw = fw * 0.94 + 0.02
        rb = (1.0 - rw - 0.02) * (fb * 0.94 + 0.02)
        params = ModelParams(alpha, beta)
        dens = Densities(rw, rb)
        back = densities_from_z(params, solve_z(params, dens))
        assert back.rho_white == pytest.approx(rw, abs=1e-10)
        assert back.rho_black == pytest.approx(rb, abs=1e-10)

    @pytest.mark.parametrize("alpha,beta", PARAM_PAIRS)
    def test_monotone_in_z(self, alpha, beta):
        # at fixed z_alpha the black density grows strictly with z_beta,
        # and symmetrically for the white density
        params = ModelParams(alpha, beta)
        za = 0.3 * min(1.0, alpha)
        zbs = np.linspace(0.05, 0.9, 12) * min(1.0, beta, 1.0 - za)
        rbs = [densities_from_z(params, ZPoint(za, zb)).rho_black for zb in zbs]
        assert all(b2 > b1 for b1, b2 in zip(rbs, rbs[1:]))
        zb = 0.3 * min(1.0, beta)
        zas = np.linspace(0.05, 0.9, 12) * min(1.0, alpha, 1.0 - zb)
        rws = [densities_from_z(params, ZPoint(za_, zb)).rho_white for za_ in zas]
        assert all(w2 > w1 for w1, w2 in zip(rws, rws[1:]))


class TestCurrents:
    def test_factorized_point(self):
        # half/half rates at quarter densities, cross-checked analytically
        params = ModelParams(0.5, 0.5)
        dens = Densities(0.25, 0.25)
        cur = currents_from_z(params, solve_z(params, dens), dens)
        assert cur.j_white == pytest.approx(-0.125, abs=1e-12)
        assert cur.j_black == pytest.approx(0.125, abs=1e-12)

    def test_rate_one_black_current(self):
        # at beta = 1 black particles form a plain single-species process
        for rw in (0.1, 0.35, 0.6):
            params = ModelParams(0.7, 1.0)
            dens = Densities(rw, 0.3)
            cur = currents_from_z(params, solve_z(params, dens), dens)
            assert cur.j_black == pytest.approx(0.21, abs=1e-12)

    def test_equal_z_kills_star_current(self):
        params = ModelParams(0.8, 0.8)
        dens = Densities(0.2, 0.2)
        z = solve_z(params, dens)
        assert z.z_alpha == pytest.approx(z.z_beta, abs=1e-14)
        cur = currents_from_z(params, z, dens)
        assert cur.j_star == pytest.approx(0.0, abs=1e-13)

    def test_zero_sum(self):
        for alpha, beta in PARAM_PAIRS:
            params = ModelParams(alpha, beta)
            for dens in density_grid(6):
                cur = currents_from_z(params, solve_z(params, dens), dens)
                assert cur.j_white + cur.j_black + cur.j_star == pytest.approx(0.0, abs=1e-14)

    @pytest.mark.parametrize("alpha,beta", PARAM_PAIRS)
    def test_linear_system_residual(self, alpha, beta):
        params = ModelParams(alpha, beta)
        for dens in density_grid():
            z = solve_z(params, dens)
            cur = currents_from_z(params, z, dens)
            r1, r2 = currents_residual(params, z, cur)
            assert abs(r1) <= 1e-10
            assert abs(r2) <= 1e-10

    def test_residual_linearity_in_j_white(self):
        params = ModelParams(0.7, 0.9)
        dens = Densities(0.3, 0.25)
        z = solve_z(params, dens)
        cur = currents_from_z(params, z, dens)
        bumped = Currents(cur.j_white + 0.1, cur.j_black, cur.j_star)
        r = currents_residual(params, z, cur)
        rb = currents_residual(params, z, bumped)
        shift1 = 0.1 * (1.0 / z.z_alpha - 1.0 / (z.z_alpha - params.alpha))
        shift2 = 0.1 * (1.0 / (z.z_beta - 1.0) - 1.0 / (z.z_beta - params.beta))
        assert rb[0] - r[0] == pytest.approx(shift1, rel=1e-12)
        assert rb[1] - r[1] == pytest.approx(shift2, rel=1e-12)

    def test_residual_pole_rejected(self):
        params = ModelParams(0.5, 0.5)
        cur = Currents(-0.1, 0.1, 0.0)
        with pytest.raises(PoleEvaluation):
            currents_residual(params, ZPoint(0.5, 0.2), cur)
        with pytest.raises(PoleEvaluation):
            currents_residual(params, ZPoint(0.2, 0.0), cur)

    def test_exchange_symmetry(self):
        # swapping species and rates mirrors the coordinates and negates
        # the currents crosswise
        for alpha, beta in PARAM_PAIRS:
            params = ModelParams(alpha, beta)
            for dens in density_grid(6):
                z = solve_z(params, dens)
                zs = solve_z(params.swapped(), dens.swapped())
                assert zs.z_alpha == pytest.approx(z.z_beta, abs=1e-10)
                assert zs.z_beta == pytest.approx(z.z_alpha, abs=1e-10)
                cur = currents_from_z(params, z, dens)
                curs = currents_from_z(params.swapped(), zs, dens.swapped())
                assert curs.j_white == pytest.approx(-cur.j_black, abs=1e-10)
                assert curs.j_black == pytest.approx(-cur.j_white, abs=1e-10)


class TestBoundaryClosedForms:
    def test_black_current_supercritical(self):
        params = ModelParams(0.5, 2.0)
        assert boundary_current(params, "white0", 0.8) == pytest.approx(0.2)
        assert boundary_current(params, "white0", 0.25) == pytest.approx(2 * 0.25 * 0.75)

    def test_star_edge_linear_branch(self):
        params = ModelParams(0.3, 0.3)
        assert boundary_current(params, "star0", 0.5) == pytest.approx(0.21)
        # outside the middle branch the bare exchange current rules
        assert boundary_current(params, "star0", 0.1) == pytest.approx(0.09)
        assert boundary_current(params, "star0", 0.9) == pytest.approx(0.09)

    def test_empty_system(self):
        assert boundary_current(ModelParams(1.0, 1.0), "black0", 0.0) == 0.0

    def test_subcritical_rate_single_branch(self):
        # for beta <= 1 the quadratic branch covers the whole edge
        params = ModelParams(0.4, 0.9)
        for rb in np.linspace(0.0, 1.0, 11):
            assert boundary_current(params, "white0", rb) == pytest.approx(
                0.9 * rb * (1 - rb)
            )

    def test_boundary_consistency_limit(self):
        # interior black current converges to the edge closed form as the
        # white density shrinks
        params = ModelParams(0.7, 1.6)
        for rb in (0.2, 0.5, 0.8):
            target = boundary_current(params, "white0", rb)
            prev = None
            for rw in (1e-3, 1e-5, 1e-7):
                dens = Densities(rw, rb)
                cur = currents_from_z(params, solve_z(params, dens), dens)
                gap = abs(cur.j_black - target)
                if prev is not None:
                    assert gap < prev
                prev = gap
            assert prev < 1e-6


class TestTracerSpeeds:
    def test_white_tracer_blocked_regime(self):
        assert tracer_speed(ModelParams(0.7, 2.0), "white_in_black0", 0.9) == -1.0

    def test_black_tracer_blocked_regime(self):
        assert tracer_speed(ModelParams(2.0, 0.7), "black_in_white0", 0.9) == 1.0

    def test_star_tracer_on_full_edge(self):
        assert tracer_speed(ModelParams(0.3, 0.4), "star_on_full", 0.5) == pytest.approx(-0.1)

    def test_tracer_is_current_slope(self):
        # the tracer speed is J/rho of its species in the vanishing limit
        for which, params, rho in (
            ("white_in_black0", ModelParams(0.7, 0.9), 0.3),
            ("white_in_black0", ModelParams(1.4, 2.0), 0.3),
            ("black_in_white0", ModelParams(0.5, 1.2), 0.55),
        ):
            eps = 1e-9
            if which == "white_in_black0":
                dens = Densities(eps, rho)
                cur = currents_from_z(params, solve_z(params, dens), dens)
                limit = cur.j_white / eps
            else:
                dens = Densities(rho, eps)
                cur = currents_from_z(params, solve_z(params, dens), dens)
                limit = cur.j_black / eps
            assert tracer_speed(params, which, rho) == pytest.approx(limit, abs=1e-6)

    def test_rate_one_tracer_constant(self):
        # an alpha = 1 white tracer does not distinguish its neighbours
        params = ModelParams(1.0, 0.7)
        for rb in np.linspace(0.0, 1.0, 11):
            assert tracer_speed(params, "white_in_black0", rb) == pytest.approx(-1.0)

    def test_branch_continuity(self):
        params = ModelParams(0.8, 2.5)
        at = tracer_speed(params, "white_in_black0", 1.0 / 2.5)
        below = tracer_speed(params, "white_in_black0", 1.0 / 2.5 - 1e-9)
        assert at == pytest.approx(-1.0, abs=1e-12)
        assert below == pytest.approx(at, abs=1e-8)


class TestFactorizedLine:
    def test_matches_generic_currents(self):
        for alpha, rw, rb in ((0.2, 0.1, 0.2), (0.5, 0.25, 0.25), (0.7, 0.4, 0.15)):
            params = ModelParams(alpha, 1.0 - alpha)
            dens = Densities(rw, rb)
            fact = factorized_currents(params, dens)
            cur = currents_from_z(params, solve_z(params, dens), dens)
            assert fact.j_white == pytest.approx(cur.j_white, abs=1e-10)
            assert fact.j_black == pytest.approx(cur.j_black, abs=1e-10)
            assert fact.j_star == pytest.approx(cur.j_star, abs=1e-10)

    def test_point_values(self):
        cur = factorized_currents(ModelParams(0.5, 0.5), Densities(0.25, 0.25))
        assert (cur.j_white, cur.j_black, cur.j_star) == pytest.approx((-0.125, 0.125, 0.0))
        assert factorized_currents(ModelParams(0.3, 0.7), Densities(0.0, 0.4)).j_white == 0.0

    def test_off_line_rejected(self):
        from tasep2 import NotOnFactorizedLine

        with pytest.raises(NotOnFactorizedLine):
            factorized_currents(ModelParams(0.5, 0.6), Densities(0.2, 0.2))
        with pytest.raises(NotOnFactorizedLine):
            leroux_coordinates(ModelParams(0.5, 0.6), Densities(0.2, 0.2))


class TestLerouxMap:
    def test_affine(self):
        params = ModelParams(0.3, 0.7)
        d1, d2 = Densities(0.1, 0.2), Densities(0.5, 0.3)
        mid = Densities(0.3, 0.25)
        p1 = leroux_coordinates(params, d1)
        p2 = leroux_coordinates(params, d2)
        pm = leroux_coordinates(params, mid)
        assert pm[0] == pytest.approx(0.5 * (p1[0] + p2[0]), abs=1e-14)
        assert pm[1] == pytest.approx(0.5 * (p1[1] + p2[1]), abs=1e-14)

    @pytest.mark.parametrize("alpha", [0.25, 0.5, 0.65])
    def test_flux_identities(self, alpha):
        # calibrate the additive constants at one reference state, then
        # require J_rho = rho v + c1 and J_v = rho + v^2 + c2 on a grid
        params = ModelParams(alpha, 1.0 - alpha)
        a, b = params.alpha, params.beta
        m11, m12 = -a * (a + 2 * b) / 3.0, -b * (2 * a + b) / 3.0

        def transformed(dens):
            rho, v = leroux_coordinates(params, dens)
            cur = factorized_currents(params, dens)
            j_rho = m11 * cur.j_white + m12 * cur.j_black
            j_v = a * cur.j_white - b * cur.j_black
            return j_rho - rho * v, j_v - (rho + v * v)

        c1, c2 = transformed(Densities(0.31, 0.17))
        assert (c1, c2) == pytest.approx(leroux_flux_constants(params), abs=1e-12)
        vals = np.linspace(0.03, 0.93, 10)
        for rw in vals:
            for rb in vals:
                if rw + rb > 0.97:
                    continue
                r1, r2 = transformed(Densities(rw, rb))
                assert r1 == pytest.approx(c1, abs=1e-10)
                assert r2 == pytest.approx(c2, abs=1e-10)


@settings(max_examples=150, deadline=None)
@given(
    alpha=st.floats(0.15, 2.5),
    beta=st.floats(0.15, 2.5),
    fw=st.floats(0.05, 0.95),
    fb=st.floats(0.05, 0.95),
)
def test_bisection_oracle_property(alpha, beta, fw, fb):
    # production quadratic formula against the independent bisection root
    rw = fw * 0.9 + 0.02
    rb = (1.0 - rw - 0.02) * (fb * 0.9 + 0.02)
    dens = Densities(rw, rb)
    z = solve_z(ModelParams(alpha, beta), dens)
    assert z.z_alpha == pytest.approx(
        saddle_root_bisect(alpha, rw, rb, dens.rho_star), abs=5e-12
    )
    assert z.z_beta == pytest.approx(
        saddle_root_bisect(beta, rb, rw, dens.rho_star), abs=5e-12
    )
