"""Semantic exception hierarchy for the tasep2 package."""


class Tasep2Error(Exception):
    """Base class for all package-specific errors."""


class OutOfDomain(Tasep2Error):
    """Densities, rates or Riemann coordinates outside the physical domain."""


class DegenerateInput(Tasep2Error):
    """The saddle-root selection is ambiguous for this input."""


class SingularMap(Tasep2Error):
    """The z -> densities map is singular at the requested point."""


class PoleEvaluation(Tasep2Error):
    """A rational expression was evaluated at one of its poles."""


class NotOnFactorizedLine(Tasep2Error):
    """Operation requires alpha + beta = 1."""


class SingularMinor(Tasep2Error):
    """The minor dividing the finite-ring determinant equation vanishes."""


class HugoniotViolation(Tasep2Error):
    """The two jump-condition speed ratios of a shock disagree."""


class ZeroJump(Tasep2Error):
    """A shock-speed denominator jump vanishes while the numerator does not."""


class OutOfFan(Tasep2Error):
    """Self-similar coordinate lies outside the rarefaction fan bracket."""


class OrderingViolation(Tasep2Error):
    """Constructed wave speeds are not nondecreasing (internal error)."""


class WindowExceedsLattice(Tasep2Error):
    """Measurement window is wider than the simulated lattice."""


class GridMismatch(Tasep2Error):
    """Two height profiles live on incompatible grids."""


class ConfigError(Tasep2Error):
    """Invalid experiment configuration."""
