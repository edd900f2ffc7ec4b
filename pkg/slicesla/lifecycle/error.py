from slicesla.base.error import SliceSlaError


class LifecycleError(SliceSlaError):
    """Base error for the lifecycle module."""


class InvalidTransitionError(LifecycleError):
    """Error raised when an event is not accepted in the current state, the state is left unchanged."""

    def __init__(self, state, event) -> None:
        self.state = state
        self.event = event
        super().__init__("{} not accepted in state {}".format(type(event).__name__, state))


class WrongStateError(LifecycleError):
    """Error raised when finalizing a contract that has not ended."""


class UnknownIncidentError(LifecycleError):
    """Error raised when resolving an incident that is not open."""


class UnknownMetricError(LifecycleError):
    """Error raised when an incident references a metric the contract does not define."""


class TimestampRegressionError(LifecycleError):
    """Error raised when a trace goes back in time."""
