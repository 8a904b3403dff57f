class ConfigError(ValueError):
    """Invalid simulation, link, power or policy parameters."""


class ConfigWarning(UserWarning):
    """Parameters that are legal but outside their sensible range."""


class SolverError(RuntimeError):
    """Sleep-time iteration did not converge."""
