"""Height-profile containers and grid-aligned comparisons.

A height profile collects the time-normalised cumulative species counts

    h_i(u) = (1/t) * #{ sites k in (-t, u*t] occupied by species i }

on the grid ``u = n/t``; in the scaling limit it converges to the integral
of the density profile from -1 to ``u``.  The same container holds both
empirical (simulated) and predicted profiles.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import GridMismatch


@dataclass(frozen=True)
class HeightProfile:
    """Integrated species densities on a grid of the scaling variable."""

    u: np.ndarray
    h_white: np.ndarray
    h_black: np.ndarray
    h_star: np.ndarray
    t: float | None = None
    n_samples: int = 0

    def __post_init__(self) -> None:
        n = len(self.u)
        if not (len(self.h_white) == len(self.h_black) == len(self.h_star) == n):
            raise GridMismatch("height arrays differ in length")

    @property
    def sum_rule_defect(self) -> float:
        """Largest deviation of h_white + h_black + h_star from u + 1."""
        total = self.h_white + self.h_black + self.h_star
        return float(np.max(np.abs(total - (self.u + 1.0))))


def require_same_grid(a: HeightProfile, b: HeightProfile) -> None:
    if len(a.u) != len(b.u) or not np.array_equal(a.u, b.u):
        raise GridMismatch(
            f"grids differ: {len(a.u)} vs {len(b.u)} points"
        )


def mean_profile(profiles: list[HeightProfile]) -> HeightProfile:
    """Pointwise average of profiles sharing one grid."""
    if not profiles:
        raise ValueError("no profiles to average")
    first = profiles[0]
    for p in profiles[1:]:
        require_same_grid(first, p)
    return HeightProfile(
        u=first.u,
        h_white=np.mean([p.h_white for p in profiles], axis=0),
        h_black=np.mean([p.h_black for p in profiles], axis=0),
        h_star=np.mean([p.h_star for p in profiles], axis=0),
        t=first.t,
        n_samples=sum(p.n_samples for p in profiles),
    )


def profile_errors(predicted: HeightProfile, empirical: HeightProfile) -> dict:
    """Per-species L-infinity and L1 distances on the shared grid."""
    require_same_grid(predicted, empirical)
    u = predicted.u
    du = np.diff(u)
    out = {}
    for name in ("white", "black", "star"):
        diff = getattr(empirical, f"h_{name}") - getattr(predicted, f"h_{name}")
        linf = float(np.max(np.abs(diff)))
        mid = 0.5 * (np.abs(diff[1:]) + np.abs(diff[:-1]))
        out[name] = {"linf": linf, "l1": float(np.sum(mid * du))}
    return out
