"""Exception types shared across the pipeline, mapped to CLI exit codes."""


class PipelineError(Exception):
    """Base class for every failure raised by this package."""


class ConfigError(PipelineError):
    """Bad parameter value, unknown option, or unusable configuration (exit 2)."""


class SchemaError(ConfigError):
    """A required column is missing from the input CSV (exit 2)."""


class EmptyCorpusError(ConfigError):
    """No usable rows survived loading or filtering (exit 2)."""


class DataError(PipelineError):
    """Malformed content inside an input file (exit 3)."""


class RowError(DataError):
    """A specific CSV row could not be parsed."""

    def __init__(self, row: int, message: str):
        super().__init__(f"row {row}: {message}")
        self.row = row


class DimensionError(PipelineError):
    """Shape mismatch between data and model (exit 4)."""
