"""Characteristic structure and the complete Riemann-problem solver.

In Riemann coordinates the hydrodynamic system is diagonal,

    dt z_alpha + v_alpha(z) dx z_alpha = 0
    dt z_beta  + v_beta(z)  dx z_beta  = 0,

with ``v_beta >= v_alpha`` everywhere and equality exactly on the line
``z_alpha + z_beta = 1``.  Shock curves coincide with the coordinate
lines (the system is of Temple class): an alpha-shock freezes ``z_beta``,
a beta-shock freezes ``z_alpha``, and admissibility reduces to one-sided
inequalities on the jumping coordinate.  Rarefaction fans are the
monotone solutions of ``v = xi`` along a coordinate line, plus a
degenerate fan carried by the line ``z_alpha + z_beta = 1`` where the two
families collapse onto a vacancy-free single-species profile.

The solver assembles the self-similar solution of the two-state initial
value problem from at most three of these waves, in nondecreasing order
of self-similar speed ``xi = x/t``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    HugoniotViolation,
    OrderingViolation,
    OutOfFan,
    PoleEvaluation,
    ZeroJump,
)
from .heights import HeightProfile
from .state import Currents, Densities, ModelParams, ZPoint
from .stationary import currents_from_z, densities_from_z, solve_z

WAVE_KINDS = (
    "alpha_shock",
    "beta_shock",
    "boundary_shock",
    "alpha_fan",
    "beta_fan",
    "degenerate_fan",
    "constant",
)

#: coordinates closer than this are treated as equal when classifying
EQ_TOL = 1e-12
#: fans narrower than this in xi are dropped from the wave list
WIDTH_TOL = 1e-10
#: excess of z_alpha^R + z_beta^L over 1 required to insert the middle fan
DEGENERATE_TOL = 1e-12
#: slack allowed in the nondecreasing-speed check of the assembled waves
ORDER_TOL = 1e-9
#: distance to z_alpha + z_beta = 1 below which the common closed-form
#: speed is used (the rational expressions develop a removable 0/0 there)
LINE_TOL = 1e-11
#: agreement required between the two jump-condition speed ratios
HUGONIOT_TOL = 1e-9

_POLE_TOL = 1e-12
_FAN_BISECTIONS = 200
_FAN_BRACKET_TOL = 1e-13


def char_speeds(params: ModelParams, z: ZPoint) -> tuple[float, float]:
    """Characteristic speeds ``(v_alpha, v_beta)`` at a state.

    These are the eigenvalues of the flux Jacobian; in Riemann
    coordinates each is a ratio of rational expressions in one
    coordinate.  On the degeneracy line ``z_alpha + z_beta = 1`` both
    equal ``2 z_alpha - 1`` and that closed form is returned directly.
    """
    z.validate(params)
    a, b = params.alpha, params.beta
    za, zb = z.z_alpha, z.z_beta
    if abs(1.0 - za - zb) <= LINE_TOL:
        v = 2.0 * za - 1.0
        return v, v
    for value, poles in ((za, (0.0, 1.0, a)), (zb, (0.0, 1.0, b))):
        for p in poles:
            if abs(value - p) < _POLE_TOL:
                raise PoleEvaluation(f"characteristic speed undefined at z={z!r}")
    dens = densities_from_z(params, z)
    cur = currents_from_z(params, z, dens)
    rw, rb, rs = dens.rho_white, dens.rho_black, dens.rho_star
    jw, jb = cur.j_white, cur.j_black
    num_a = jw / za**2 + jb / (za - 1.0) ** 2 - (jw + jb) / (za - a) ** 2
    den_a = rw / za**2 + rb / (za - 1.0) ** 2 + rs / (za - a) ** 2
    num_b = jb / zb**2 + jw / (zb - 1.0) ** 2 - (jw + jb) / (zb - b) ** 2
    den_b = rb / zb**2 + rw / (zb - 1.0) ** 2 + rs / (zb - b) ** 2
    return num_a / den_a, num_b / den_b


def shock_speed(
    params: ModelParams, kind: str, frozen: float, z_minus: float, z_plus: float
) -> float:
    """Speed of a coordinate-line shock from the jump conditions.

    ``frozen`` is the coordinate shared by the two sides (``z_beta`` for an
    alpha-shock, ``z_alpha`` for a beta-shock).  The speed is the ratio of
    the current jump to the density jump; both species give one ratio and
    the jump conditions require them to agree, which is verified here (the
    better-conditioned ratio is returned).
    """
    if kind == "alpha_shock":
        pm = ZPoint(z_minus, frozen)
        pp = ZPoint(z_plus, frozen)
    elif kind == "beta_shock":
        pm = ZPoint(frozen, z_minus)
        pp = ZPoint(frozen, z_plus)
    else:
        raise ValueError(f"unknown shock kind {kind!r}")
    pm.validate(params)
    pp.validate(params)
    if z_minus == z_plus:
        raise ZeroJump("shock endpoints coincide")
    dm = densities_from_z(params, pm)
    dp = densities_from_z(params, pp)
    jm = currents_from_z(params, pm, dm)
    jp = currents_from_z(params, pp, dp)
    d_rw = dp.rho_white - dm.rho_white
    d_rb = dp.rho_black - dm.rho_black
    d_jw = jp.j_white - jm.j_white
    d_jb = jp.j_black - jm.j_black
    have_w = abs(d_rw) > 1e-13
    have_b = abs(d_rb) > 1e-13
    if not have_w and abs(d_jw) > 1e-10:
        raise ZeroJump("white density jump vanishes while its current jump does not")
    if not have_b and abs(d_jb) > 1e-10:
        raise ZeroJump("black density jump vanishes while its current jump does not")
    if not (have_w or have_b):
        raise ZeroJump("both density jumps vanish")
    # cross-check the two ratios only when both quotients are well
    # conditioned; a ratio over a ~1e-13 jump is pure rounding noise
    if min(abs(d_rw), abs(d_rb)) > 1e-6:
        r_w = d_jw / d_rw
        r_b = d_jb / d_rb
        if abs(r_w - r_b) > HUGONIOT_TOL * max(1.0, abs(r_w), abs(r_b)):
            raise HugoniotViolation(
                f"speed ratios disagree: {r_w!r} vs {r_b!r} for {kind} "
                f"frozen={frozen}, {z_minus} -> {z_plus}"
            )
    if have_w and abs(d_rw) >= abs(d_rb):
        return d_jw / d_rw
    return d_jb / d_rb if have_b else d_jw / d_rw


def boundary_shock_speed(
    params: ModelParams, rho_black_minus: float, rho_black_plus: float
) -> float:
    """Shock speed when both sides sit on the vacancy-free edge.

    Uses the piecewise closed-form current of that edge; a single jump
    ratio determines the speed there.
    """
    from .stationary import boundary_current

    d_rho = rho_black_plus - rho_black_minus
    if abs(d_rho) < 1e-13:
        raise ZeroJump("black density jump vanishes on the vacancy-free edge")
    j_m = boundary_current(params, "star0", rho_black_minus)
    j_p = boundary_current(params, "star0", rho_black_plus)
    return (j_p - j_m) / d_rho


def liu_admissible(kind: str, z_minus: float, z_plus: float) -> bool:
    """Entropy admissibility of a coordinate-line shock.

    An alpha-shock is stable iff ``z_alpha`` drops across it, a beta-shock
    iff ``z_beta`` rises; equal endpoints are no shock at all.
    """
    if kind == "alpha_shock":
        return z_minus > z_plus
    if kind == "beta_shock":
        return z_minus < z_plus
    raise ValueError(f"unknown shock kind {kind!r}")


def _fan_speed(params: ModelParams, kind: str, frozen: float, z: float) -> float:
    if kind == "alpha_fan":
        return char_speeds(params, ZPoint(z, frozen))[0]
    return char_speeds(params, ZPoint(frozen, z))[1]


def _bisect_fan(
    params: ModelParams, kind: str, frozen: float, xi: float, z_lo: float, z_hi: float
) -> float:
    """Solve v(z) = xi for z in [z_lo, z_hi] by bisection.

    Monotonicity of the speed along a fan (increasing for the alpha
    family, decreasing for beta) guarantees the bracket; bisection is
    unconditionally safe.
    """
    lo, hi = z_lo, z_hi
    f_lo = _fan_speed(params, kind, frozen, lo) - xi
    for _ in range(_FAN_BISECTIONS):
        if hi - lo <= _FAN_BRACKET_TOL:
            break
        mid = 0.5 * (lo + hi)
        f_mid = _fan_speed(params, kind, frozen, mid) - xi
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def fan_invert(params: ModelParams, kind: str, frozen: float, xi: float) -> float:
    """Moving coordinate of the maximal fan at self-similar speed ``xi``.

    For an ``alpha_fan`` the moving coordinate is ``z_alpha`` at frozen
    ``z_beta`` and the result increases with ``xi``; for a ``beta_fan`` it
    is ``z_beta`` and decreases.  Raises :class:`OutOfFan` when ``xi``
    falls outside the speed range of the admissible coordinate interval.
    """
    if kind not in ("alpha_fan", "beta_fan"):
        raise ValueError(f"unknown fan kind {kind!r}")
    gamma = params.alpha if kind == "alpha_fan" else params.beta
    z_hi = min(1.0, gamma, 1.0 - frozen)
    pad = 1e-12 * max(1.0, z_hi)
    lo, hi = pad, z_hi - pad
    if hi <= lo:
        raise OutOfFan(f"empty fan bracket for frozen={frozen!r}")
    v_lo = _fan_speed(params, kind, frozen, lo)
    v_hi = _fan_speed(params, kind, frozen, hi)
    v_min, v_max = min(v_lo, v_hi), max(v_lo, v_hi)
    if xi < v_min - ORDER_TOL or xi > v_max + ORDER_TOL:
        raise OutOfFan(f"xi={xi!r} outside fan speed range [{v_min}, {v_max}]")
    xi = min(max(xi, v_min), v_max)
    return _bisect_fan(params, kind, frozen, xi, lo, hi)


@dataclass(frozen=True)
class Wave:
    """One wave of a self-similar solution.

    Shocks have ``xi_lo == xi_hi`` (the shock speed); fans occupy a
    nondegenerate interval.  ``left`` and ``right`` are the Riemann
    coordinates immediately before and after the wave.
    """

    kind: str
    xi_lo: float
    xi_hi: float
    left: ZPoint
    right: ZPoint

    @property
    def is_shock(self) -> bool:
        return self.kind in ("alpha_shock", "beta_shock", "boundary_shock")

    @property
    def is_fan(self) -> bool:
        return self.kind in ("alpha_fan", "beta_fan", "degenerate_fan")

    def to_dict(self, params: ModelParams) -> dict:
        def state(z: ZPoint) -> dict:
            d = densities_from_z(params, z)
            return {
                "z_alpha": z.z_alpha,
                "z_beta": z.z_beta,
                "rho_white": d.rho_white,
                "rho_black": d.rho_black,
            }

        return {
            "kind": self.kind,
            "xi_lo": self.xi_lo,
            "xi_hi": self.xi_hi,
            "left": state(self.left),
            "right": state(self.right),
        }


@dataclass(frozen=True)
class RiemannSolution:
    """Ordered wave sequence solving a two-state initial value problem."""

    params: ModelParams
    dens_left: Densities
    dens_right: Densities
    z_left: ZPoint
    z_right: ZPoint
    waves: tuple[Wave, ...]

    @property
    def moving_waves(self) -> tuple[Wave, ...]:
        """Waves that carry an actual discontinuity or fan."""
        return tuple(w for w in self.waves if w.kind != "constant")

    def to_dict(self) -> dict:
        return {
            "alpha": self.params.alpha,
            "beta": self.params.beta,
            "left": {
                "rho_white": self.dens_left.rho_white,
                "rho_black": self.dens_left.rho_black,
                "z_alpha": self.z_left.z_alpha,
                "z_beta": self.z_left.z_beta,
            },
            "right": {
                "rho_white": self.dens_right.rho_white,
                "rho_black": self.dens_right.rho_black,
                "z_alpha": self.z_right.z_alpha,
                "z_beta": self.z_right.z_beta,
            },
            "waves": [w.to_dict(self.params) for w in self.moving_waves],
        }


def riemann_solve(
    params: ModelParams, dens_left: Densities, dens_right: Densities
) -> RiemannSolution:
    """Self-similar solution of the two-state initial value problem.

    The wave sequence is determined by comparing the Riemann coordinates
    of the two states: the dropping family produces a shock, the rising
    one a fan (the alpha family moves first, the beta family second, and
    their speed ranges never overlap).  When both fans are present and the
    corner state ``(z_alpha^R, z_beta^L)`` falls outside the coordinate
    domain, the two fans are bridged by the degenerate fan along
    ``z_alpha + z_beta = 1``, which carries a vacancy-free region.
    """
    z_l = solve_z(params, dens_left)
    z_r = solve_z(params, dens_right)
    za_l, zb_l = z_l.z_alpha, z_l.z_beta
    za_r, zb_r = z_r.z_alpha, z_r.z_beta

    alpha_equal = abs(za_l - za_r) <= EQ_TOL
    beta_equal = abs(zb_l - zb_r) <= EQ_TOL
    if alpha_equal and beta_equal:
        wave = Wave("constant", 0.0, 0.0, z_l, z_l)
        return RiemannSolution(params, dens_left, dens_right, z_l, z_r, (wave,))

    degenerate = (
        not alpha_equal
        and not beta_equal
        and za_l < za_r
        and zb_l > zb_r
        and za_r + zb_l > 1.0 + DEGENERATE_TOL
    )

    waves: list[Wave] = []
    if not alpha_equal:
        if za_l > za_r:
            s = shock_speed(params, "alpha_shock", zb_l, za_l, za_r)
            waves.append(Wave("alpha_shock", s, s, ZPoint(za_l, zb_l), ZPoint(za_r, zb_l)))
        else:
            za_end = (1.0 - zb_l) if degenerate else za_r
            if za_end - za_l > EQ_TOL:
                xi_1 = _fan_speed(params, "alpha_fan", zb_l, za_l)
                xi_2 = _fan_speed(params, "alpha_fan", zb_l, za_end)
                if xi_2 - xi_1 >= WIDTH_TOL:
                    waves.append(
                        Wave("alpha_fan", xi_1, xi_2, ZPoint(za_l, zb_l), ZPoint(za_end, zb_l))
                    )

    if degenerate:
        xi_1 = 1.0 - 2.0 * zb_l
        xi_2 = 2.0 * za_r - 1.0
        if xi_2 - xi_1 >= WIDTH_TOL:
            waves.append(
                Wave(
                    "degenerate_fan",
                    xi_1,
                    xi_2,
                    ZPoint(1.0 - zb_l, zb_l),
                    ZPoint(za_r, 1.0 - za_r),
                )
            )

    if not beta_equal:
        zb_start = (1.0 - za_r) if degenerate else zb_l
        if zb_l < zb_r:
            s = shock_speed(params, "beta_shock", za_r, zb_l, zb_r)
            waves.append(Wave("beta_shock", s, s, ZPoint(za_r, zb_l), ZPoint(za_r, zb_r)))
        elif zb_start - zb_r > EQ_TOL:
            xi_1 = _fan_speed(params, "beta_fan", za_r, zb_start)
            xi_2 = _fan_speed(params, "beta_fan", za_r, zb_r)
            if xi_2 - xi_1 >= WIDTH_TOL:
                waves.append(
                    Wave("beta_fan", xi_1, xi_2, ZPoint(za_r, zb_start), ZPoint(za_r, zb_r))
                )

    for prev, cur in zip(waves, waves[1:]):
        if cur.xi_lo < prev.xi_hi - ORDER_TOL:
            raise OrderingViolation(
                f"wave speeds decrease: {prev.kind}@{prev.xi_hi} then {cur.kind}@{cur.xi_lo}"
            )
    return RiemannSolution(params, dens_left, dens_right, z_l, z_r, tuple(waves))


def _invert_in_wave(params: ModelParams, wave: Wave, xi: float) -> ZPoint:
    """State inside a fan wave at self-similar speed ``xi``."""
    if wave.kind == "degenerate_fan":
        return ZPoint(0.5 * (1.0 + xi), 0.5 * (1.0 - xi))
    if wave.kind == "alpha_fan":
        frozen = wave.left.z_beta
        lo, hi = wave.left.z_alpha, wave.right.z_alpha
        z = _bisect_fan(params, "alpha_fan", frozen, xi, lo, hi)
        return ZPoint(z, frozen)
    frozen = wave.left.z_alpha
    lo, hi = wave.right.z_beta, wave.left.z_beta
    z = _bisect_fan(params, "beta_fan", frozen, xi, lo, hi)
    return ZPoint(frozen, z)


def _densities_of(params: ModelParams, z: ZPoint) -> Densities:
    # the degenerate line needs the closed form; the generic inverse map
    # is singular there only when alpha + beta = 1, but stay uniform
    if abs(1.0 - z.z_alpha - z.z_beta) <= LINE_TOL:
        return Densities(rho_white=z.z_alpha, rho_black=z.z_beta)
    return densities_from_z(params, z)


def profile_at(sol: RiemannSolution, xi: float) -> Densities:
    """Density state of the solution at self-similar coordinate ``xi``.

    Right-continuous at shocks.  Total in ``xi``: below every wave the
    left state holds, above every wave the right state.
    """
    params = sol.params
    state = sol.z_left
    for w in sol.waves:
        if w.kind == "constant":
            continue
        if xi < w.xi_lo:
            return _densities_of(params, state)
        if xi <= w.xi_hi:
            if w.is_shock:
                return _densities_of(params, w.right)
            return _densities_of(params, _invert_in_wave(params, w, xi))
        state = w.right
    return _densities_of(params, state)


#: sample count across a full fan when integrating height profiles
_FAN_SAMPLES = 512


def _region_table(
    params: ModelParams, region: tuple, lo: float, hi: float, inner: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Density samples of one region restricted to [lo, hi].

    Returns (xi nodes, rho_white, rho_black, rho_star) with the clip
    endpoints and any requested interior grid nodes included, plus a
    uniform fill inside fans so the trapezoid rule resolves their
    curvature.
    """
    kind, payload = region
    if kind == "const":
        xi = np.array([lo, *inner, hi])
        d = _densities_of(params, payload)
        rw = np.full_like(xi, d.rho_white)
        rb = np.full_like(xi, d.rho_black)
    else:
        wave: Wave = payload
        span = max(wave.xi_hi - wave.xi_lo, 1e-300)
        n_fill = max(8, int(_FAN_SAMPLES * (hi - lo) / span))
        xi = np.unique(np.concatenate([np.linspace(lo, hi, n_fill + 1), inner]))
        rw = np.empty_like(xi)
        rb = np.empty_like(xi)
        for i, x in enumerate(xi):
            d = _densities_of(params, _invert_in_wave(params, wave, x))
            rw[i] = d.rho_white
            rb[i] = d.rho_black
    return xi, rw, rb, 1.0 - rw - rb


def _build_regions(sol: RiemannSolution) -> list[tuple[float, float, tuple]]:
    """Cover the xi axis with constant pieces and fans (shocks are cuts)."""
    regions = []
    state = sol.z_left
    pos = -np.inf
    for w in sol.waves:
        if w.kind == "constant":
            continue
        if w.xi_lo > pos:
            regions.append((pos, w.xi_lo, ("const", state)))
        if w.is_fan:
            regions.append((w.xi_lo, w.xi_hi, ("fan", w)))
        state = w.right
        pos = w.xi_hi
    regions.append((pos, np.inf, ("const", state)))
    return regions


def height_profile(sol: RiemannSolution, grid: np.ndarray) -> HeightProfile:
    """Predicted height functions ``h_i(u) = integral of rho_i from -1``.

    Cumulative trapezoid integration of the density profile with every
    wave boundary inserted as a breakpoint, so shocks produce exact kinks
    and constant pieces integrate exactly.  The three heights sum to
    ``u + 1`` by construction.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or len(grid) == 0:
        raise ValueError("grid must be a nonempty 1-d array")
    if np.any(np.diff(grid) < 0):
        raise ValueError("grid must be sorted")
    if grid[0] < -1.0 - 1e-12 or grid[-1] > 1.0 + 1e-12:
        raise ValueError("grid must lie inside [-1, 1]")

    h = {name: np.zeros(len(grid)) for name in ("white", "black", "star")}
    acc_w = acc_b = acc_s = 0.0
    done = 0  # grid points with final values
    u_end = grid[-1]
    for reg_lo, reg_hi, region in _build_regions(sol):
        lo = max(reg_lo, -1.0)
        hi = min(reg_hi, u_end)
        if hi <= lo:
            if reg_lo >= u_end:
                break
            continue
        i0 = np.searchsorted(grid, lo, side="right")
        i1 = np.searchsorted(grid, hi, side="right")
        inner = grid[i0:i1]
        xi, rw, rb, rs = _region_table(sol.params, region, lo, hi, inner)
        dw = np.concatenate([[0.0], np.cumsum(0.5 * (rw[1:] + rw[:-1]) * np.diff(xi))])
        db = np.concatenate([[0.0], np.cumsum(0.5 * (rb[1:] + rb[:-1]) * np.diff(xi))])
        ds = np.concatenate([[0.0], np.cumsum(0.5 * (rs[1:] + rs[:-1]) * np.diff(xi))])
        # grid points strictly before this region keep the running values
        for name, acc in (("white", acc_w), ("black", acc_b), ("star", acc_s)):
            h[name][done:i0] = acc
        if len(inner):
            pos = np.searchsorted(xi, inner)
            h["white"][i0:i1] = acc_w + dw[pos]
            h["black"][i0:i1] = acc_b + db[pos]
            h["star"][i0:i1] = acc_s + ds[pos]
        acc_w += dw[-1]
        acc_b += db[-1]
        acc_s += ds[-1]
        done = i1
    for name, acc in (("white", acc_w), ("black", acc_b), ("star", acc_s)):
        h[name][done:] = acc
    return HeightProfile(
        u=grid, h_white=h["white"], h_black=h["black"], h_star=h["star"]
    )
