"""Exception types shared across the package."""


class InvalidInput(ValueError):
    """An argument violates a documented precondition (t <= 0, wrong component, ...)."""


class UnsupportedPair(ValueError):
    """Density conversion between two measures that have no supported factor."""


class SingularWeight(ValueError):
    """Density conversion whose weight is singular at the given point."""


class NoConvergence(RuntimeError):
    """Adaptive quadrature exhausted its panel budget above tolerance."""


class NonFiniteF(RuntimeError):
    """An integrand returned NaN or infinity inside the truncated domain."""


class InvalidPlan(ValueError):
    """A simulation plan violates its invariants."""


class ResourceGuard(RuntimeError):
    """A simulation plan asks for more work than the configured guard allows."""


class ClockOverflow(RuntimeError):
    """The angular clock accumulated past its overflow guard."""


class EmptySample(ValueError):
    """A histogram was requested over zero samples."""


class UnsortedEdges(ValueError):
    """Histogram bin edges are not strictly increasing."""


class InsufficientSamples(ValueError):
    """Too few Monte Carlo samples for a statistically meaningful check."""


class UnsupportedPattern(ValueError):
    """A semigroup check pattern that has no implemented reduction."""
