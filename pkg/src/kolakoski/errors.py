class KolakoskiError(Exception):
    """Base class for errors raised by this package."""


class ParameterError(KolakoskiError, ValueError):
    """Invalid (p, q) or (m, n) parameters."""


class ValidationError(KolakoskiError, ValueError):
    """A word, substitution or file does not satisfy its invariants."""


class ConfigurationError(KolakoskiError, ValueError):
    """A rendering or run configuration is not usable."""


class InternalConsistencyError(KolakoskiError, RuntimeError):
    """Two independent computations that must agree did not."""
