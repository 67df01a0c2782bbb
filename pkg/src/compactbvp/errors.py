"""Exception hierarchy shared across the package."""


class CompactBVPError(Exception):
    """Base class for all package errors."""


class GridMismatch(CompactBVPError, ValueError):
    """Two grid functions living on different grids were combined."""


class SampleError(CompactBVPError):
    """A function could not be evaluated at a grid node."""

    def __init__(self, x, cause):
        self.x = float(x)
        self.cause = cause
        super().__init__(f"evaluation failed at x={self.x!r}: {cause!r}")


class ZeroPivot(CompactBVPError, ArithmeticError):
    """Tridiagonal elimination met a zero pivot."""


class SolvabilityViolation(CompactBVPError):
    """The 3x3 boundary closure system is (numerically) singular.

    Raised when ``12 -/+ 4 D h + A h**2`` is too close to zero at an endpoint,
    i.e. the mesh is too coarse for the given coefficients.
    """

    def __init__(self, side, quantity, threshold):
        self.side = side
        self.quantity = float(quantity)
        self.threshold = float(threshold)
        super().__init__(
            f"closure system at the {side} endpoint is singular: "
            f"solvability quantity {self.quantity:.6e} below {self.threshold:.3e}"
        )


class AssemblyError(CompactBVPError):
    """Coefficient or right-hand-side evaluation failed during assembly."""


class SingularSystem(CompactBVPError):
    """The assembled global system could not be solved reliably."""

    def __init__(self, message, rcond=None):
        self.rcond = rcond
        super().__init__(message)


class SelfConsistencyError(CompactBVPError):
    """A solved field disagrees with its re-derivation from (u, p)."""
