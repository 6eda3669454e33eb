"""Exception types shared across the package."""


class AgdashError(Exception):
    """Base class for all package errors."""


class FormatError(AgdashError):
    """Input is not readable as an alert file at all."""


class RecordError(AgdashError):
    """A single record failed to parse under strict policy."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class ValidationError(AgdashError):
    """A value is outside its documented domain."""


class ConfigError(AgdashError):
    """An urgency configuration document is invalid."""


class EmptyNodeSetError(AgdashError):
    """Prevalence requested over an empty node set."""


class NotFound(AgdashError):
    """Requested run or node does not exist."""


class NotReady(AgdashError):
    """Run exists but has not reached Complete status."""


class StorageError(AgdashError):
    """Persistence failed; the run was rolled back."""
