"""Common errors."""


class SliceSlaError(Exception):
    """Base error for all the engine errors."""
