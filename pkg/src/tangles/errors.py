"""Exception types shared across the package."""


class TangleError(Exception):
    """Base class for all package-specific errors."""


class ChainError(TangleError, ValueError):
    """A tangent chain violates unit-norm or orthogonality invariants."""


class ParameterDomainError(TangleError, ValueError):
    """A curve parameter lies outside its admissible interval or on a knot."""


class CutLocusError(TangleError, ValueError):
    """A torus Log map is requested at (or too close to) an antipodal pair."""


class OffManifoldError(TangleError, ValueError):
    """A state violates the closed-tangle constraint set beyond tolerance."""


class IntegrationError(TangleError, ArithmeticError):
    """A geodesic or transport integration produced a non-finite state."""
