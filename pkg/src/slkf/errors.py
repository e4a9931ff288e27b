"""Exception hierarchy shared by all slkf modules."""


class SLKFError(Exception):
    pass


class DomainError(SLKFError, ValueError):
    """An argument lies outside the domain of the operation."""


class LengthMismatch(DomainError):
    pass


class SumViolation(DomainError):
    pass


class NegativeMass(DomainError):
    pass


class BaseRateMismatch(DomainError):
    pass


class DimensionMismatch(DomainError):
    pass


class DegenerateUnfusion(SLKFError, ArithmeticError):
    pass


class NonPositiveDefinite(SLKFError, ArithmeticError):
    pass


class UnknownScenario(DomainError):
    pass


class UnknownColumn(DomainError):
    pass


class ConfigError(SLKFError):
    """Base for problems with a scenario configuration document."""


class ParseError(ConfigError):
    pass


class SchemaError(ConfigError):
    def __init__(self, field: str, message: str | None = None):
        self.field = field
        super().__init__(message or f"missing required field {field!r}")


class RangeError(ConfigError, DomainError):
    pass


class IoError(SLKFError, OSError):
    """Reading or writing an input/output file failed."""
