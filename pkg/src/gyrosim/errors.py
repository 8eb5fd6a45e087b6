"""Exception types raised by gyrosim."""


class DomainError(ValueError):
    """An input lies outside the domain of a physical formula."""


class UndampedError(DomainError):
    """Quality factor requested for a system with zero damping."""


class ResonanceError(DomainError):
    """Undamped system driven exactly at its natural frequency."""


class ConfigurationError(ValueError):
    """Invalid configuration file, sweep specification or integrator setup."""
