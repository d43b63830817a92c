"""Exception types shared across the package."""


class YoungTasepError(Exception):
    """Base class for all package errors."""


class DomainError(YoungTasepError, ValueError):
    """Parameters outside the mathematical domain of an operation."""


class ContainmentError(DomainError):
    """Inner partition does not fit inside the outer one."""


class WindowError(DomainError):
    """Maya window too narrow for the partition."""


class SizeError(YoungTasepError):
    """State space or graph exceeds the configured cap."""


class NumericalError(YoungTasepError, ArithmeticError):
    """Iteration or quadrature failed to reach its tolerance."""


class GaugeError(DomainError):
    """Kasteleyn gauge violates a face condition or admissible interval."""


class BoundaryError(YoungTasepError):
    """Boundary conditions admit no perfect matching (singular W)."""


class ShapeError(DomainError):
    """Shape function violates Lipschitz / monotonicity requirements."""
