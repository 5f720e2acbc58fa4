"""Exception types shared across the package."""


class CylStokesError(Exception):
    """Base class for all package errors."""


class ConfigurationError(CylStokesError, ValueError):
    """Invalid geometry or solver parameters."""


class DomainError(CylStokesError, ValueError):
    """A point lies outside the region where a quantity is defined."""


class DegeneracyError(CylStokesError, ArithmeticError):
    """A linear system or background is numerically degenerate."""


class ConvergenceError(CylStokesError, RuntimeError):
    """An iterative refinement failed to stagnate."""
