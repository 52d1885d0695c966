"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Invalid or inconsistent case configuration."""


class NumericalBlowupError(RuntimeError):
    """Watchdog tripped: NaN or nonpositive density during time stepping."""
