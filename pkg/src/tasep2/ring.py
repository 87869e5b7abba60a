"""Exact stationary currents on a finite periodic lattice.

Everything in this module is computed in exact rational arithmetic
(:class:`fractions.Fraction`); no floating point enters.  The stationary
expectation of any weighted combination of swap rates on a ring with
fixed species counts is the solution of a 3x3 determinant equation whose
entries are residues of the contour integrand

    1 / (z^a (z - 1)^b (z - gamma)^c)

around the origin.  The per-site currents are three specializations of
that expectation.  These values serve as an independent oracle for the
thermodynamic closed forms in :mod:`tasep2.stationary`: they converge to
them as the ring grows at fixed density ratios.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import OutOfDomain, SingularMinor
from .state import Currents

#: default cap on the ring length; the oracle is for validation only and
#: the residue sums grow expensive with the counts
DEFAULT_MAX_N = 120

Rational = Fraction | int


@dataclass(frozen=True)
class RingCounts:
    """Particle counts on the ring; every species must be present."""

    m_black: int
    m_white: int
    m_star: int

    def __post_init__(self) -> None:
        if min(self.m_black, self.m_white, self.m_star) < 1:
            raise OutOfDomain(f"all species counts must be >= 1, got {self!r}")

    @property
    def n(self) -> int:
        return self.m_black + self.m_white + self.m_star


def as_rational(value: Rational | str) -> Fraction:
    """Coerce to an exact rational; floats are rejected to keep exactness."""
    if isinstance(value, float):
        raise TypeError(
            f"ring arithmetic is exact; pass a Fraction, int or 'p/q' string, got {value!r}"
        )
    return Fraction(value)


def f_gamma(gamma: Rational | str, a: int, b: int, c: int) -> Fraction:
    """Residue at the origin of ``z^-a (z - 1)^-b (z - gamma)^-c``.

    Equals the coefficient of ``z^(a-1)`` in ``(z-1)^-b (z-gamma)^-c``;
    expanding both factors as binomial series gives

        (-1)^(b+c) * sum_{k=0}^{a-1} C(b-1+k, k) C(c-1+a-1-k, a-1-k)
                     * gamma^-(c+a-1-k)

    Unit-tested against a truncated power-series product oracle.
    """
    gamma = as_rational(gamma)
    if gamma <= 0:
        raise OutOfDomain(f"gamma must be positive, got {gamma!r}")
    if min(a, b, c) < 1:
        raise OutOfDomain(f"orders must be >= 1, got a={a}, b={b}, c={c}")
    acc = Fraction(0)
    for k in range(a):
        acc += (
            math.comb(b - 1 + k, k)
            * math.comb(c - 1 + a - 1 - k, a - 1 - k)
            * gamma ** (-(a - 1 - k))
        )
    return (-1) ** (b + c) * gamma ** (-c) * acc


def phi(
    alpha: Rational | str,
    beta: Rational | str,
    counts: RingCounts,
    nu: tuple[Rational, Rational, Rational],
) -> Fraction:
    """Stationary growth rate of the weighted swap tally on the ring.

    ``nu = (nu_black_white, nu_black_star, nu_star_white)`` weighs the
    long-time rates of the three ordered-pair exchanges.  The value is the
    unique solution of ``det G = 0`` where the unknown occupies only the
    (1, 1) entry of the 3x3 matrix ``G``; expanding the determinant along
    the first column reduces it to one exact linear equation.

    The row/column convention used here is pinned by an exact brute-force
    stationary solve of the generator on small rings (see the tests).
    """
    alpha = as_rational(alpha)
    beta = as_rational(beta)
    nu_bw, nu_bs, nu_sw = (as_rational(v) for v in nu)
    mb, mw, ms = counts.m_black, counts.m_white, counts.m_star

    g12 = f_gamma(alpha, mw, mb, ms)
    g13 = f_gamma(beta, mb, mw, ms)
    g22 = f_gamma(alpha, mw + 1, mb, ms)
    g23 = -f_gamma(beta, mb, mw + 1, ms)
    g32 = -f_gamma(alpha, mw, mb + 1, ms)
    g33 = f_gamma(beta, mb + 1, mw, ms)
    g21 = nu_bw * mb + nu_sw * ms
    g31 = nu_bw * mw + nu_bs * ms

    minor11 = g22 * g33 - g23 * g32
    if minor11 == 0:
        raise SingularMinor(
            f"(1,1) minor vanishes for alpha={alpha}, beta={beta}, counts={counts!r}"
        )
    minor21 = g12 * g33 - g13 * g32
    minor31 = g12 * g23 - g13 * g22
    return (g21 * minor21 - g31 * minor31) / minor11


def ring_currents(
    alpha: Rational | str,
    beta: Rational | str,
    counts: RingCounts,
    max_n: int = DEFAULT_MAX_N,
) -> Currents:
    """Exact per-site stationary currents on the ring.

    The three currents are the specializations

        J_black = phi(( 1,  1,  0)) / N
        J_white = phi((-1,  0, -1)) / N
        J_star  = phi(( 0, -1,  1)) / N

    returned as exact rationals; they sum to zero exactly because the
    weight triples do and ``phi`` is linear in the weights.
    """
    if counts.n > max_n:
        raise OutOfDomain(f"ring length {counts.n} exceeds the cap {max_n}")
    one = Fraction(1)
    jb = phi(alpha, beta, counts, (one, one, 0)) / counts.n
    jw = phi(alpha, beta, counts, (-one, 0, -one)) / counts.n
    js = phi(alpha, beta, counts, (0, -one, one)) / counts.n
    return Currents(j_white=jw, j_black=jb, j_star=js)
