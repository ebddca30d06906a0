"""Exception types shared across the package."""


class EeOptError(Exception):
    """Base class for package-specific failures."""


class ConfigError(EeOptError):
    """Invalid run configuration (bad key, missing value, unit out of range)."""


class SolverError(EeOptError):
    """A root search failed (no sign change, bracket blew past its guard)."""


class NumericalError(EeOptError):
    """Quadrature or arithmetic produced a non-finite intermediate value."""
