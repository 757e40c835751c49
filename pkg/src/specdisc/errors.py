"""Exception types raised by the numerical routines."""


class SpecdiscError(Exception):
    """Base class for all library errors."""


class DomainError(SpecdiscError, ValueError):
    """An argument lies outside the domain where the formula is defined."""


class PoleError(SpecdiscError, ValueError):
    """A gamma-function or Pochhammer pole was hit."""


class DivergenceError(SpecdiscError, ArithmeticError):
    """A series does not converge (or did not converge within the cap)."""


class BesselOverflowError(SpecdiscError, OverflowError):
    """Intermediate Bessel magnitudes exceed the representable range."""


class ConvergenceError(SpecdiscError, ArithmeticError):
    """Adaptive quadrature or a root scan failed to reach its tolerance."""


class DegenerateNullspaceError(SpecdiscError, ArithmeticError):
    """The nullspace of a determinant matrix is not one-dimensional."""
