"""Exception types shared across the toolkit."""


class StingerError(Exception):
    """Base class for all toolkit errors."""


class SchemaError(StingerError):
    """Input table does not match the declared feature schema."""


class ParseError(StingerError):
    """A cell could not be parsed as the declared feature kind."""


class LabelError(StingerError):
    """A label value is outside {0, 1}."""


class DataError(StingerError):
    """Data violates an operation precondition (too few rows, degenerate range, ...)."""


class StrategyError(StingerError):
    """A resampling strategy cannot be applied to the given data."""


class ParameterError(StingerError):
    """An operation parameter is out of its valid range."""


class ContractError(StingerError):
    """A model was asked to score rows that do not match its fit-time encoding."""


class TrainingDivergenceError(StingerError):
    """Training produced a non-finite loss."""

    def __init__(self, message, epoch=None):
        super().__init__(message)
        self.epoch = epoch


class ConvergenceWarning(UserWarning):
    """An iterative solver stopped before reaching its tolerance."""
