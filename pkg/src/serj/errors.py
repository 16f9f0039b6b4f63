"""Exception hierarchy. Every error carries the CLI exit code it maps to."""


class SerjError(Exception):
    exit_code = 1
    kind = "error"


class DomainError(SerjError, ValueError):
    """An argument outside the domain of a formula (negative distance, empty path...)."""

    exit_code = 2
    kind = "domain"


class ConfigError(SerjError, ValueError):
    """Invalid configuration; ``field`` names the offending entry when known."""

    exit_code = 2
    kind = "config"

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field


class InfeasibleSecrecyError(ConfigError):
    """No finite number of key bits makes the eavesdropper metric drop below its threshold."""

    exit_code = 3
    kind = "secrecy_infeasible"


class InfeasibleRateError(ConfigError):
    exit_code = 2
    kind = "rate_infeasible"


class InfeasibleReliabilityError(SerjError):
    """Residual jamming alone pushes every link into outage."""

    exit_code = 4
    kind = "reliability_infeasible"


class ValidationFailure(SerjError):
    exit_code = 5
    kind = "validation_failed"


class NoPathError(SerjError):
    exit_code = 6
    kind = "no_path"
