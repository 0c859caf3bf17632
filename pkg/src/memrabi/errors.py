"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Raised for malformed config files: syntax, unknown keys, bad values.

    Messages carry the offending line number where one exists.
    """


class SingularEliminationError(ArithmeticError):
    """Raised when the cavity response factor z = x*y - J**2 is (numerically)
    singular, so the adiabatic elimination of the cavity modes is ill defined.
    """


class InvalidModelError(ValueError):
    """Raised when a model is requested outside its domain of validity,
    e.g. the effective-Hamiltonian model on a configuration whose modified
    detunings are not antisymmetric.
    """


class InsufficientDataError(RuntimeError):
    """Raised when a trajectory does not contain enough oscillation peaks
    for period extraction."""


class NumericalError(RuntimeError):
    """Raised when a numerical kernel (eigensolver, propagator) fails."""
