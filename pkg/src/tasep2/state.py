"""Domain types: hop rates, macroscopic densities, Riemann coordinates, currents.

Conventions used throughout the package:

* ``black`` particles hop right over vacancies at rate ``beta``,
* ``white`` particles hop left over vacancies at rate ``alpha``,
* an adjacent black/white pair exchanges at rate 1,
* vacancies are treated as a third species, ``star``.

The macroscopic state is either a pair of densities ``(rho_white,
rho_black)`` with ``rho_star = 1 - rho_white - rho_black``, or the pair of
Riemann coordinates ``(z_alpha, z_beta)`` that diagonalise the hydrodynamic
equations.  ``z_alpha`` lives in ``[0, min(1, alpha)]``, ``z_beta`` in
``[0, min(1, beta)]`` and the pair satisfies ``z_alpha + z_beta <= 1``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import OutOfDomain

#: slack used for all domain-membership checks on floating-point input
DOMAIN_SLACK = 1e-9


@dataclass(frozen=True)
class ModelParams:
    """Hop rates of the two moving species (the black/white swap rate is 1)."""

    alpha: float
    beta: float

    def __post_init__(self) -> None:
        if not (self.alpha > 0 and self.beta > 0):
            raise OutOfDomain(
                f"rates must be positive, got alpha={self.alpha!r}, beta={self.beta!r}"
            )

    @property
    def v_max(self) -> float:
        """Largest single-event rate, used as a crude signal-speed bound."""
        return max(1.0, self.alpha, self.beta)

    def swapped(self) -> "ModelParams":
        """Parameters of the mirrored model (white <-> black exchange)."""
        return ModelParams(alpha=self.beta, beta=self.alpha)


@dataclass(frozen=True)
class Densities:
    """Macroscopic species densities; the vacancy density is derived."""

    rho_white: float
    rho_black: float

    def __post_init__(self) -> None:
        rw, rb = self.rho_white, self.rho_black
        if rw < -DOMAIN_SLACK or rb < -DOMAIN_SLACK or rw + rb > 1.0 + DOMAIN_SLACK:
            raise OutOfDomain(
                f"densities outside the simplex: rho_white={rw!r}, rho_black={rb!r}"
            )

    @property
    def rho_star(self) -> float:
        return 1.0 - self.rho_white - self.rho_black

    def swapped(self) -> "Densities":
        return Densities(rho_white=self.rho_black, rho_black=self.rho_white)


@dataclass(frozen=True)
class ZPoint:
    """Riemann coordinates of a macroscopic state."""

    z_alpha: float
    z_beta: float

    def validate(self, params: ModelParams, slack: float = DOMAIN_SLACK) -> "ZPoint":
        """Check membership in the coordinate domain, return self."""
        za, zb = self.z_alpha, self.z_beta
        if not (-slack <= za <= min(1.0, params.alpha) + slack):
            raise OutOfDomain(f"z_alpha={za!r} outside [0, min(1, alpha)]")
        if not (-slack <= zb <= min(1.0, params.beta) + slack):
            raise OutOfDomain(f"z_beta={zb!r} outside [0, min(1, beta)]")
        if za + zb > 1.0 + slack:
            raise OutOfDomain(f"z_alpha + z_beta = {za + zb!r} exceeds 1")
        return self


@dataclass(frozen=True)
class Currents:
    """Stationary particle currents; the three components sum to zero."""

    j_white: float
    j_black: float
    j_star: float
