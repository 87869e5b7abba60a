"""Event-driven continuous-time simulation of the two-species chain.

The dynamics is a continuous-time Markov chain on lattice configurations
whose only transitions are nearest-neighbour exchanges of the ordered
pairs

    black star  -> star black    rate beta
    star  white -> white star    rate alpha
    black white -> white black   rate 1

The simulator is rejection free: it keeps index pools of the active
bonds of each type, advances time by an exponential with the total rate,
picks a type proportionally to (count x rate), a bond uniformly within
the type, applies the swap and patches the at most three affected bonds.
Every event therefore costs O(1) and the realised process is exactly the
continuous-time law.

Randomness comes from a ``numpy.random.Generator`` passed in by the
caller; one PCG64 stream per replica derived from ``(seed, replica)``
keeps runs reproducible independently of how replicas are scheduled.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .errors import OutOfDomain, WindowExceedsLattice
from .heights import HeightProfile
from .state import Densities, ModelParams

#: site contents
STAR, BLACK, WHITE = 0, 1, 2

#: bond types in pool order: 0 black-star (rate beta), 1 star-white
#: (rate alpha), 2 black-white (rate 1); -1 marks an inactive bond


@njit(cache=True, nogil=True, inline="always")
def _bond_kind(a, b):
    if a == 1:
        if b == 0:
            return 0
        if b == 2:
            return 2
    elif a == 0 and b == 2:
        return 1
    return -1


@njit(cache=True, nogil=True)
def _scan_bonds(sites, periodic, pools, slot, btype, counts):
    n = sites.shape[0]
    nb = n if periodic else n - 1
    counts[:] = 0
    for b in range(nb):
        j = b + 1
        if j == n:
            j = 0
        k = _bond_kind(sites[b], sites[j])
        btype[b] = k
        if k >= 0:
            pools[k, counts[k]] = b
            slot[b] = counts[k]
            counts[k] += 1
        else:
            slot[b] = -1


@njit(cache=True, nogil=True)
def _advance(sites, periodic, alpha, beta, t_now, t_target, rng,
             pools, slot, btype, counts, swaps):
    n = sites.shape[0]
    nb = n if periodic else n - 1
    n_events = 0
    while True:
        total = counts[0] * beta + counts[1] * alpha + counts[2]
        if total <= 0.0:
            t_now = t_target  # jammed configuration, nothing can move
            break
        dt = rng.exponential(1.0 / total)
        if t_now + dt > t_target:
            t_now = t_target
            break
        t_now += dt
        u = rng.random() * total
        k = 0
        acc = counts[0] * beta
        if u >= acc:
            acc += counts[1] * alpha
            k = 1 if u < acc else 2
        b = pools[k, rng.integers(0, counts[k])]
        j = b + 1
        if j == n:
            j = 0
        tmp = sites[b]
        sites[b] = sites[j]
        sites[j] = tmp
        swaps[k] += 1
        n_events += 1
        for d in range(-1, 2):
            bb = b + d
            if periodic:
                if bb < 0:
                    bb += nb
                elif bb >= nb:
                    bb -= nb
            elif bb < 0 or bb >= nb:
                continue
            jj = bb + 1
            if jj == n:
                jj = 0
            new_kind = _bond_kind(sites[bb], sites[jj])
            old_kind = btype[bb]
            if new_kind == old_kind:
                continue
            if old_kind >= 0:
                s = slot[bb]
                last = counts[old_kind] - 1
                moved = pools[old_kind, last]
                pools[old_kind, s] = moved
                slot[moved] = s
                counts[old_kind] = last
                slot[bb] = -1
            if new_kind >= 0:
                pools[new_kind, counts[new_kind]] = bb
                slot[bb] = counts[new_kind]
                counts[new_kind] += 1
            btype[bb] = new_kind
    return t_now, n_events


@dataclass
class Lattice:
    """Microscopic configuration and its event bookkeeping.

    ``sites[i]`` holds the species code of the site with integer
    coordinate ``k = i - L`` (so the first site of the right half sits at
    ``k = 0``).  ``swap_counts`` tallies applied exchanges per bond type
    in the order (black-star, star-white, black-white).
    """

    sites: np.ndarray
    time: float = 0.0
    event_count: int = 0
    periodic: bool = False
    swap_counts: np.ndarray = field(default_factory=lambda: np.zeros(3, np.int64))

    def __post_init__(self) -> None:
        self.sites = np.ascontiguousarray(self.sites, dtype=np.uint8)
        if self.sites.ndim != 1 or self.sites.size < 2:
            raise OutOfDomain("lattice needs at least two sites")

    @property
    def n_sites(self) -> int:
        return self.sites.size

    def species_counts(self) -> tuple[int, int, int]:
        """(star, black, white) occupation totals."""
        return (
            int(np.count_nonzero(self.sites == STAR)),
            int(np.count_nonzero(self.sites == BLACK)),
            int(np.count_nonzero(self.sites == WHITE)),
        )

    def copy(self) -> "Lattice":
        return Lattice(
            sites=self.sites.copy(),
            time=self.time,
            event_count=self.event_count,
            periodic=self.periodic,
            swap_counts=self.swap_counts.copy(),
        )

    def bond_rescan(self) -> tuple[np.ndarray, np.ndarray]:
        """Fresh (bond type, per-type counts) scan, for bookkeeping audits."""
        nb = self.n_sites if self.periodic else self.n_sites - 1
        pools = np.empty((3, max(nb, 1)), np.int64)
        slot = np.empty(nb, np.int64)
        btype = np.empty(nb, np.int8)
        counts = np.zeros(3, np.int64)
        _scan_bonds(self.sites, self.periodic, pools, slot, btype, counts)
        return btype, counts


@dataclass(frozen=True)
class SimConfig:
    """Domain-wall experiment description.

    The lattice spans integer coordinates ``-L .. L-1``; sites with
    ``k < 0`` are drawn from ``dens_left``, the rest from ``dens_right``.
    Boundaries are closed, so the window observed up to ``t_max`` must be
    causally disconnected from them; a too-small lattice triggers a
    warning, not an error.
    """

    params: ModelParams
    L: int
    dens_left: Densities
    dens_right: Densities
    t_max: float
    seed: int
    measurement_times: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        if self.L < 1:
            raise OutOfDomain(f"L must be positive, got {self.L}")
        if self.t_max <= 0:
            raise OutOfDomain(f"t_max must be positive, got {self.t_max}")
        times = tuple(sorted(self.measurement_times)) or (self.t_max,)
        object.__setattr__(self, "measurement_times", times)
        if times[-1] > self.t_max:
            raise OutOfDomain("measurement times exceed t_max")
        if self.t_max >= self.L / self.params.v_max:
            warnings.warn(
                f"t_max={self.t_max} reaches the boundary horizon "
                f"L/v_max={self.L / self.params.v_max:.1f}; "
                "the measured window may feel the closed boundaries",
                stacklevel=2,
            )


def replica_rng(seed: int, replica: int = 0) -> np.random.Generator:
    """Independent, reproducible PCG64 stream for one replica."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence((seed, replica))))


def init_bernoulli(config: SimConfig, rng: np.random.Generator | None = None) -> Lattice:
    """Product-measure initial configuration with a density wall at 0.

    Each site is black with its side's black density, white with the
    white density and a vacancy otherwise (thresholds checked in that
    order against one uniform draw per site, left half first).
    """
    if rng is None:
        rng = replica_rng(config.seed)
    n = 2 * config.L
    u = rng.random(n)
    sites = np.empty(n, np.uint8)
    halves = ((slice(0, config.L), config.dens_left), (slice(config.L, n), config.dens_right))
    for sl, dens in halves:
        useg = u[sl]
        sites[sl] = np.where(
            useg < dens.rho_black,
            BLACK,
            np.where(useg < dens.rho_black + dens.rho_white, WHITE, STAR),
        )
    return Lattice(sites=sites)


def run_until(
    lattice: Lattice, params: ModelParams, t_target: float, rng: np.random.Generator
) -> Lattice:
    """Advance the chain to ``t_target`` in place and return the lattice.

    The active-bond pools are rebuilt from the configuration on entry,
    then maintained incrementally; the post-run incremental bond table is
    kept on the lattice for bookkeeping audits.
    """
    if t_target < lattice.time:
        raise OutOfDomain(f"t_target={t_target} is before lattice.time={lattice.time}")
    n = lattice.n_sites
    nb = n if lattice.periodic else n - 1
    pools = np.empty((3, nb), np.int64)
    slot = np.empty(nb, np.int64)
    btype = np.empty(nb, np.int8)
    counts = np.zeros(3, np.int64)
    _scan_bonds(lattice.sites, lattice.periodic, pools, slot, btype, counts)
    t_now, n_events = _advance(
        lattice.sites, lattice.periodic, float(params.alpha), float(params.beta),
        float(lattice.time), float(t_target), rng,
        pools, slot, btype, counts, lattice.swap_counts,
    )
    lattice.time = float(t_now)
    lattice.event_count += int(n_events)
    lattice._btype = btype
    lattice._bond_counts = counts
    return lattice


def measure_heights(lattice: Lattice, t: float | None = None) -> HeightProfile:
    """Empirical height functions in the window ``(-t, t)``.

    ``h_i(n/t)`` is the species count over sites ``-t < k <= n`` divided
    by ``t``, on the integer grid ``n``.  Defaults to the lattice's own
    time.
    """
    t = float(lattice.time if t is None else t)
    if t <= 0.0:
        raise OutOfDomain("heights need t > 0")
    half = lattice.n_sites // 2
    n_max = math.ceil(t) - 1
    if n_max > half - 1:
        raise WindowExceedsLattice(f"window half-width {n_max} exceeds lattice half {half}")
    idx = np.arange(-n_max, n_max + 1) + half
    window = lattice.sites[idx]
    u = (idx - half) / t
    return HeightProfile(
        u=u,
        h_white=np.cumsum(window == WHITE) / t,
        h_black=np.cumsum(window == BLACK) / t,
        h_star=np.cumsum(window == STAR) / t,
        t=t,
        n_samples=1,
    )


@dataclass(frozen=True)
class SwapCounts:
    """Cumulative exchange tallies per ordered pair."""

    n_black_white: int
    n_black_star: int
    n_star_white: int


def measure_swap_counts(lattice: Lattice) -> SwapCounts:
    c = lattice.swap_counts
    return SwapCounts(
        n_black_white=int(c[2]), n_black_star=int(c[0]), n_star_white=int(c[1])
    )


def current_estimates(counts: SwapCounts, n_sites: int, t: float) -> tuple[float, float, float]:
    """Microscopic per-site current estimates from swap tallies.

    Every black-white or black-star exchange moves one black particle one
    step right; white and star currents follow the same accounting, so

        J_black = (n_bw + n_bs) / (N t)
        J_white = -(n_bw + n_sw) / (N t)
        J_star  = (n_sw - n_bs) / (N t)
    """
    if t <= 0.0:
        raise OutOfDomain("current estimates need t > 0")
    norm = n_sites * t
    jb = (counts.n_black_white + counts.n_black_star) / norm
    jw = -(counts.n_black_white + counts.n_star_white) / norm
    js = (counts.n_star_white - counts.n_black_star) / norm
    return jw, jb, js
