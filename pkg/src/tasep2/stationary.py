"""Exact stationary-state map between densities and Riemann coordinates.

The stationary current of each species on an infinite homogeneous
background is an algebraic function of the densities.  It is expressed
through two auxiliary coordinates ``z_alpha`` and ``z_beta``: each is the
root of a monic quadratic (the saddle-point condition of the underlying
contour-integral representation) selected inside ``[0, min(1, gamma)]``,

    rho_self / z + rho_other / (z - 1) + rho_star / (z - gamma) = 0,

with ``(rho_self, rho_other, gamma) = (rho_white, rho_black, alpha)`` for
``z_alpha`` and the white/black-swapped triple with ``beta`` for
``z_beta``.  In these coordinates the currents are

    J_white = z_alpha (z_beta - 1) + rho_white (z_alpha - z_beta)
    J_black = z_beta (1 - z_alpha) + rho_black (z_alpha - z_beta)
    J_star  = rho_star (z_alpha - z_beta)

which always sum to zero.  This module also provides the inverse map,
the residuals of the linear system the currents satisfy, the closed
forms on the boundary of the density simplex and on the factorized line
``alpha + beta = 1``, and the affine change of variables that brings the
factorized-line currents to Leroux form.
"""

from __future__ import annotations

import math

from .errors import (
    DegenerateInput,
    NotOnFactorizedLine,
    OutOfDomain,
    PoleEvaluation,
    SingularMap,
)
from .state import DOMAIN_SLACK, Currents, Densities, ModelParams, ZPoint

#: absolute tolerance on the cleared-form quadratic at the accepted root
ROOT_RESIDUAL_TOL = 1e-12
#: tolerance for membership on the factorized line alpha + beta = 1
FACTORIZED_LINE_TOL = 1e-12
#: minimal distance to a pole of the rational current relations
POLE_TOL = 1e-12


def _saddle_root(gamma: float, rho_self: float, rho_other: float, rho_star: float) -> float:
    """Root of the cleared saddle quadratic inside [0, min(1, gamma)].

    The cleared form is monic because the densities sum to one:

        P(z) = z^2 - (rho_self (1 + gamma) + rho_other gamma + rho_star) z
               + gamma rho_self

    ``P(0) >= 0`` and ``P(min(1, gamma)) <= 0``, so the smaller root is the
    one inside the interval; it is computed with the two-branch quadratic
    formula to avoid cancellation for small ``rho_self``.

    Boundary densities make the quadratic factor exactly and are dispatched
    to their closed forms (the quadratic then carries a spurious root).
    """
    if rho_self == 0.0:
        return 0.0
    if rho_other == 0.0:
        return min(gamma * rho_self, 1.0)
    if rho_star == 0.0:
        return min(gamma, rho_self)
    if gamma == 1.0:
        # P factors as (z - 1)(z - rho_self)
        return rho_self
    b = rho_self * (1.0 + gamma) + rho_other * gamma + rho_star
    c = gamma * rho_self
    disc = b * b - 4.0 * c
    if disc < 0.0:
        raise DegenerateInput(
            f"saddle quadratic has no real root for gamma={gamma}, "
            f"densities=({rho_self}, {rho_other}, {rho_star})"
        )
    z = 2.0 * c / (b + math.sqrt(disc))
    z_hi = min(1.0, gamma)
    # sign-change guard: P(0) = c >= 0 holds by construction, P(z_hi) <= 0
    # must hold for the smaller root to be the in-interval one
    p_hi = (z_hi - b) * z_hi + c
    if p_hi > ROOT_RESIDUAL_TOL:
        raise DegenerateInput(
            f"no sign change on [0, {z_hi}] for gamma={gamma}: P({z_hi}) = {p_hi}"
        )
    return min(max(z, 0.0), z_hi)


def _validate_densities(dens: Densities) -> None:
    if not (
        dens.rho_white >= -DOMAIN_SLACK
        and dens.rho_black >= -DOMAIN_SLACK
        and dens.rho_white + dens.rho_black <= 1.0 + DOMAIN_SLACK
    ):
        raise OutOfDomain(f"invalid densities {dens!r}")


def solve_z(params: ModelParams, dens: Densities) -> ZPoint:
    """Riemann coordinates of a density point.

    Raises
    ------
    OutOfDomain
        If the densities lie outside the simplex.
    DegenerateInput
        If the in-interval root is not unique outside the documented
        boundary closed forms.
    """
    _validate_densities(dens)
    rs = dens.rho_star
    # clip the derived vacancy density: it may be a tiny negative number
    # when rho_white + rho_black rounds just above 1
    if 0.0 > rs >= -DOMAIN_SLACK:
        rs = 0.0
    za = _saddle_root(params.alpha, dens.rho_white, dens.rho_black, rs)
    zb = _saddle_root(params.beta, dens.rho_black, dens.rho_white, rs)
    return ZPoint(za, zb)


def densities_from_z(params: ModelParams, z: ZPoint) -> Densities:
    """Density point with the given Riemann coordinates.

    At fixed ``z`` the two saddle conditions are straight lines in the
    density plane; the result is their crossing

        alpha (1 - z_a) rho_white + (1 - alpha) z_a rho_black = z_a (1 - z_a)
        (1 - beta) z_b rho_white + beta (1 - z_b) rho_black   = z_b (1 - z_b)

    Raises
    ------
    SingularMap
        If the lines are parallel, i.e. ``z`` is one of the singular image
        points of the density-simplex boundary.
    """
    z.validate(params)
    a, b = params.alpha, params.beta
    za, zb = z.z_alpha, z.z_beta
    t1 = a * b * (1.0 - za) * (1.0 - zb)
    t2 = (1.0 - a) * (1.0 - b) * za * zb
    det = t1 - t2
    if abs(det) <= 1e-12 * (abs(t1) + abs(t2) + 1e-300):
        raise SingularMap(f"z={z!r} is a singular image point for params={params!r}")
    rw = za * (b * (1.0 - za) * (1.0 - zb) - (1.0 - a) * zb * (1.0 - zb)) / det
    rb = zb * (a * (1.0 - za) * (1.0 - zb) - (1.0 - b) * za * (1.0 - za)) / det
    # clip rounding noise at the simplex boundary
    rw = min(max(rw, 0.0), 1.0)
    rb = min(max(rb, 0.0), 1.0)
    return Densities(rho_white=rw, rho_black=rb)


def currents_from_z(
    params: ModelParams, z: ZPoint, dens: Densities | None = None
) -> Currents:
    """Stationary currents of a state given by consistent ``(z, dens)``.

    ``dens`` defaults to ``densities_from_z(params, z)``; when passed
    explicitly the caller asserts consistency of the pair.
    """
    if dens is None:
        dens = densities_from_z(params, z)
    za, zb = z.z_alpha, z.z_beta
    jw = za * (zb - 1.0) + dens.rho_white * (za - zb)
    jb = zb * (1.0 - za) + dens.rho_black * (za - zb)
    js = dens.rho_star * (za - zb)
    return Currents(j_white=jw, j_black=jb, j_star=js)


def currents_residual(
    params: ModelParams, z: ZPoint, j: Currents
) -> tuple[float, float]:
    """Residuals of the linear system that valid currents satisfy.

    Both expressions vanish for the exact currents of the state ``z``:

        J_white/z_a + J_black/(z_a - 1) - (J_white + J_black)/(z_a - alpha) + 1
        J_black/z_b + J_white/(z_b - 1) - (J_white + J_black)/(z_b - beta) - 1

    (the inhomogeneous terms have opposite signs: the white/black exchange
    symmetry maps the two relations onto each other while negating the
    currents).  Used as a validation probe; raises
    :class:`PoleEvaluation` when ``z`` sits on a pole of the rational
    expressions.
    """
    a, b = params.alpha, params.beta
    za, zb = z.z_alpha, z.z_beta
    for value, poles in ((za, (0.0, 1.0, a)), (zb, (0.0, 1.0, b))):
        for p in poles:
            if abs(value - p) < POLE_TOL:
                raise PoleEvaluation(f"z={z!r} hits a pole of the current relations")
    jw, jb = j.j_white, j.j_black
    r1 = jw / za + jb / (za - 1.0) - (jw + jb) / (za - a) + 1.0
    r2 = jb / zb + jw / (zb - 1.0) - (jw + jb) / (zb - b) - 1.0
    return r1, r2


BOUNDARY_TAGS = ("white0", "black0", "star0")
TRACER_TAGS = ("white_in_black0", "black_in_white0", "star_on_full")


def boundary_current(params: ModelParams, which: str, rho: float) -> float:
    """Current of the surviving species on an edge of the density simplex.

    ``which`` selects the vanishing species:

    * ``white0``: ``rho`` is the black density, returns ``J_black``.
      The black/vacancy gas is a rate-``beta`` single-species process, but
      for ``beta > 1`` a vanishing white admixture caps the current at
      ``1 - rho`` beyond ``rho = 1/beta``.
    * ``black0``: mirrored case, returns ``J_white`` (nonpositive).
    * ``star0``: ``rho`` is the black density on the vacancy-free edge.
      For ``alpha + beta < 1`` the current has a linear middle branch
      ``beta (1 - alpha) + (alpha - beta) rho`` on ``[beta, 1 - alpha]``;
      otherwise it is the bare exchange current ``rho (1 - rho)``.
    """
    if not 0.0 <= rho <= 1.0:
        raise OutOfDomain(f"rho={rho!r} outside [0, 1]")
    a, b = params.alpha, params.beta
    if which == "white0":
        if b > 1.0 and rho >= 1.0 / b:
            return 1.0 - rho
        return b * rho * (1.0 - rho)
    if which == "black0":
        if a > 1.0 and rho >= 1.0 / a:
            return -(1.0 - rho)
        return -a * rho * (1.0 - rho)
    if which == "star0":
        if a + b < 1.0 and b <= rho <= 1.0 - a:
            return b * (1.0 - a) + (a - b) * rho
        return rho * (1.0 - rho)
    raise ValueError(f"unknown boundary tag {which!r}")


def tracer_speed(params: ModelParams, which: str, rho: float) -> float:
    """Mean speed of a vanishing-density tracer on a simplex edge.

    The tracer speed is the limit ``J_i / rho_i`` as the tracer density
    ``rho_i`` goes to zero; ``rho`` is the density of the surviving
    particle species (black for ``white_in_black0`` and ``star_on_full``,
    white for ``black_in_white0``).
    """
    if not 0.0 <= rho <= 1.0:
        raise OutOfDomain(f"rho={rho!r} outside [0, 1]")
    a, b = params.alpha, params.beta
    if which == "white_in_black0":
        # white tracer in a black/vacancy gas of black density rho
        if b > 1.0 and rho >= 1.0 / b:
            return -1.0
        return -a * (1.0 - b * rho) / (1.0 + (a - 1.0) * rho) - b * rho
    if which == "black_in_white0":
        if a > 1.0 and rho >= 1.0 / a:
            return 1.0
        return b * (1.0 - a * rho) / (1.0 + (b - 1.0) * rho) + a * rho
    if which == "star_on_full":
        # vacancy tracer on the vacancy-free edge: z_alpha - z_beta with the
        # piecewise coordinate assignments of that edge
        return min(a, 1.0 - rho) - min(b, rho)
    raise ValueError(f"unknown tracer tag {which!r}")


def factorized_currents(params: ModelParams, dens: Densities) -> Currents:
    """Closed-form currents on the factorized line ``alpha + beta = 1``.

    There the stationary measure is product and the currents are the
    mean-field pair rates

        J_white = -rho_white (rho_black + alpha rho_star)
        J_black = +rho_black (rho_white + beta  rho_star)

    (each of the two ways a species moves contributes density times
    partner density times rate).  Serves as an independent oracle for
    :func:`currents_from_z` on this line.
    """
    a, b = params.alpha, params.beta
    if abs(a + b - 1.0) > FACTORIZED_LINE_TOL:
        raise NotOnFactorizedLine(f"alpha + beta = {a + b!r}, expected 1")
    _validate_densities(dens)
    rw, rb, rs = dens.rho_white, dens.rho_black, dens.rho_star
    jw = -rw * (rb + a * rs)
    jb = rb * (rw + b * rs)
    return Currents(j_white=jw, j_black=jb, j_star=-jw - jb)


def leroux_coordinates(params: ModelParams, dens: Densities) -> tuple[float, float]:
    """Affine conserved quantities bringing the factorized-line system to
    Leroux form.

    With ``(rho, v)`` returned here, the transformed currents satisfy
    ``J_rho = rho v + const`` and ``J_v = rho + v**2 + const``, the fluxes
    of the Leroux system.  Only defined on ``alpha + beta = 1``.
    """
    a, b = params.alpha, params.beta
    if abs(a + b - 1.0) > FACTORIZED_LINE_TOL:
        raise NotOnFactorizedLine(f"alpha + beta = {a + b!r}, expected 1")
    _validate_densities(dens)
    rw, rb = dens.rho_white, dens.rho_black
    rho = -a * (a + 2.0 * b) / 3.0 * rw - b * (2.0 * a + b) / 3.0 * rb \
        + (2.0 * a + b) * (a + 2.0 * b) / 9.0
    v = a * rw - b * rb + (b - a) / 3.0
    return rho, v


def leroux_flux_constants(params: ModelParams) -> tuple[float, float]:
    """Additive constants in the Leroux flux identities.

    For any factorized-line state, ``J_rho - rho v`` equals the first
    constant and ``J_v - (rho + v**2)`` the second, where ``J_rho`` and
    ``J_v`` are the same affine combinations of the species currents as
    ``(rho, v)`` are of the densities.
    """
    a, b = params.alpha, params.beta
    if abs(a + b - 1.0) > FACTORIZED_LINE_TOL:
        raise NotOnFactorizedLine(f"alpha + beta = {a + b!r}, expected 1")
    c1 = (2.0 * a + b) * (a + 2.0 * b) / 9.0
    c2 = (b - a) / 3.0
    return -c1 * c2, -c1 - c2 * c2
