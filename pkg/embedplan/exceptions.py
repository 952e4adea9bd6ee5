from typing import Optional


class EmbedPlanException(Exception):
    """Generic embedplan exception."""

    exit_code = 4


class InputError(EmbedPlanException):
    """Invalid input provided by the user."""

    exit_code = 2


class ConfigFileNotFound(InputError):
    """Config file not found."""


class InvalidConfiguration(InputError):
    """Configuration not valid."""


class SpecParsingError(InputError):
    """Spec document is not valid JSON."""


class SpecValidationError(InputError):
    """Spec document violates an invariant."""

    def __init__(self, message: str, field_path: str = "") -> None:
        super().__init__(f"{field_path}: {message}" if field_path else message)
        self.field_path = field_path


class QueryParsingError(InputError):
    """Query line cannot be parsed."""

    def __init__(self, message: str, line_number: Optional[int] = None) -> None:
        super().__init__(
            f"line {line_number}: {message}" if line_number is not None else message
        )
        self.line_number = line_number


class IndexOutOfRange(InputError):
    """Row index outside of table."""


class ShapeMismatch(InputError):
    """Weights and vector shapes do not chain."""


class OracleLimitExceeded(InputError):
    """Brute-force search requested for too many tables."""


class Infeasible(EmbedPlanException):
    """Tables cannot be combined or placed."""

    exit_code = 3


class ProductTooLarge(Infeasible):
    """Cartesian product exceeds the configured cap."""


class InfeasiblePlacement(Infeasible):
    """Tables do not fit the memory hierarchy."""


class InvalidPlan(EmbedPlanException):
    """Placement plan violates its invariants."""


class StoreTooLarge(Infeasible):
    """Materialized store exceeds the memory cap."""
