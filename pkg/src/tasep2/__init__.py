"""Two-species TASEP: exact hydrodynamics and event-driven simulation."""

from .errors import (
    ConfigError,
    DegenerateInput,
    GridMismatch,
    HugoniotViolation,
    NotOnFactorizedLine,
    OrderingViolation,
    OutOfDomain,
    OutOfFan,
    PoleEvaluation,
    SingularMap,
    SingularMinor,
    Tasep2Error,
    WindowExceedsLattice,
    ZeroJump,
)
from .heights import HeightProfile, mean_profile, profile_errors
from .kmc import (
    BLACK,
    STAR,
    WHITE,
    Lattice,
    SimConfig,
    SwapCounts,
    current_estimates,
    init_bernoulli,
    measure_heights,
    measure_swap_counts,
    replica_rng,
    run_until,
)
from .ring import RingCounts, f_gamma, phi, ring_currents
from .state import Currents, Densities, ModelParams, ZPoint
from .stationary import (
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
from .waves import (
    RiemannSolution,
    Wave,
    boundary_shock_speed,
    char_speeds,
    fan_invert,
    height_profile,
    liu_admissible,
    profile_at,
    riemann_solve,
    shock_speed,
)

__version__ = "0.1.0"

__all__ = [
    "BLACK",
    "STAR",
    "WHITE",
    "ConfigError",
    "Currents",
    "DegenerateInput",
    "Densities",
    "GridMismatch",
    "HeightProfile",
    "HugoniotViolation",
    "Lattice",
    "ModelParams",
    "NotOnFactorizedLine",
    "OrderingViolation",
    "OutOfDomain",
    "OutOfFan",
    "PoleEvaluation",
    "RiemannSolution",
    "RingCounts",
    "SimConfig",
    "SingularMap",
    "SingularMinor",
    "SwapCounts",
    "Tasep2Error",
    "Wave",
    "WindowExceedsLattice",
    "ZPoint",
    "ZeroJump",
    "boundary_current",
    "boundary_shock_speed",
    "char_speeds",
    "current_estimates",
    "currents_from_z",
    "currents_residual",
    "densities_from_z",
    "f_gamma",
    "factorized_currents",
    "fan_invert",
    "height_profile",
    "init_bernoulli",
    "leroux_coordinates",
    "leroux_flux_constants",
    "liu_admissible",
    "mean_profile",
    "measure_heights",
    "measure_swap_counts",
    "phi",
    "profile_at",
    "profile_errors",
    "replica_rng",
    "riemann_solve",
    "ring_currents",
    "run_until",
    "shock_speed",
    "solve_z",
    "tracer_speed",
]
