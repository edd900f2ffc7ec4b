from typing import Optional

from slicesla.base.error import SliceSlaError


class ContractError(SliceSlaError):
    """Base error for the contract module."""


class StaticContractError(ContractError):
    """Error raised when amending a static contract."""

    def __init__(self, message: str = "amendments forbidden on static SLA") -> None:
        super().__init__(message)


class OutOfLifetimeError(ContractError):
    """Error raised for a time outside the contract lifetime."""


class AmendmentError(ContractError):
    """Error raised when an amendment cannot be applied to the terms."""


class SchemaError(ContractError):
    """Error raised when a contract document does not follow the schema."""

    def __init__(self, field: str, message: str, line: Optional[int] = None) -> None:
        self.field = field
        self.message = message
        self.line = line
        super().__init__(str(self))

    def __str__(self):
        if self.line is not None:
            return "line {}: {}: {}".format(self.line, self.field, self.message)
        return "{}: {}".format(self.field, self.message)
