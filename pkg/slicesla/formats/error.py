from typing import Optional

from slicesla.base.error import SliceSlaError


class FormatError(SliceSlaError):
    """Base error for the file formats, `line` is 1-based when known."""

    def __init__(self, message: str, line: Optional[int] = None) -> None:
        self.message = message
        self.line = line
        super().__init__(str(self))

    def __str__(self):
        if self.line is not None:
            return "line {}: {}".format(self.line, self.message)
        return self.message


class ContractParseError(FormatError):
    """Error raised when a contract document cannot be read."""

    def __init__(self, field: str, message: str, line: Optional[int] = None) -> None:
        self.field = field
        super().__init__("{}: {}".format(field, message), line)


class TraceParseError(FormatError):
    """Error raised for a malformed trace line."""


class TraceOrderError(TraceParseError):
    """Error raised when a trace line goes back in time."""


class ScenarioParseError(FormatError):
    """Error raised when a scenario document cannot be read."""


class ReportParseError(FormatError):
    """Error raised when a saved report cannot be read."""
