from slicesla.base.error import SliceSlaError


class PenaltyError(SliceSlaError):
    """Base error for the penalty module."""


class ScheduleError(PenaltyError):
    """Error raised for an invalid schedule or curve request."""
