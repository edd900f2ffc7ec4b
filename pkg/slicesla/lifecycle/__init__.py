"""SLA lifecycle: creation, operation and termination as an event-driven state machine.

`step` is pure: it maps (state, effective terms, incident history, event) to the
next state and the directives the caller must act on (evaluate a penalty, open
a renegotiation, bill, ...). `run_trace` replays a whole trace on top of it.
"""
import logging
from dataclasses import dataclass
from dataclasses import field
from datetime import datetime
from enum import Enum
from typing import ClassVar
from typing import Iterable
from typing import List
from typing import Optional
from typing import Sequence
from typing import Tuple
from typing import Union

from slicesla.base.store import RecordStore
from slicesla.contract import apply_amendment
from slicesla.contract import contract_to_document
from slicesla.contract import effective_terms_at
from slicesla.contract.model import Amendment
from slicesla.contract.model import Retention
from slicesla.contract.model import SlaContract
from slicesla.contract.model import Terms
from slicesla.contract.model import TrackingLimits
from slicesla.incident import IncidentClass  # noqa: unused-import
from slicesla.incident import IncidentRecord
from slicesla.lifecycle.error import InvalidTransitionError
from slicesla.lifecycle.error import LifecycleError
from slicesla.lifecycle.error import TimestampRegressionError
from slicesla.lifecycle.error import UnknownIncidentError
from slicesla.lifecycle.error import UnknownMetricError
from slicesla.lifecycle.error import WrongStateError
from slicesla.penalty.schedule import as_fraction

logger = logging.getLogger(__name__)


class Phase(str, Enum):
    CREATED = "created"
    ACTIVE = "active"
    RENEGOTIATING = "renegotiating"
    EXPIRED = "expired"
    EARLY_TERMINATED = "early-terminated"
    ARCHIVED = "archived"
    PURGED = "purged"


class TerminationReason(str, Enum):
    TRACKING_LIMIT = "tracking-limit"
    TERMINATED_AVAILABILITY = "terminated-availability"
    TENANT_REQUEST = "tenant-request"


@dataclass(frozen=True)
class SlaState:
    phase: Phase
    reason: Optional[TerminationReason] = None

    @property
    def ended(self) -> bool:
        """Expired or early-terminated, only retention finalization is left."""
        return self.phase in (Phase.EXPIRED, Phase.EARLY_TERMINATED)

    @property
    def terminal(self) -> bool:
        return self.phase in (Phase.ARCHIVED, Phase.PURGED)

    @property
    def operating(self) -> bool:
        return self.phase in (Phase.ACTIVE, Phase.RENEGOTIATING)

    def __str__(self):
        if self.reason is None:
            return self.phase.value
        return "{}({})".format(self.phase.value, self.reason.value)


CREATED = SlaState(Phase.CREATED)
ACTIVE = SlaState(Phase.ACTIVE)
RENEGOTIATING = SlaState(Phase.RENEGOTIATING)
EXPIRED = SlaState(Phase.EXPIRED)
ARCHIVED = SlaState(Phase.ARCHIVED)
PURGED = SlaState(Phase.PURGED)


def early_terminated(reason: TerminationReason) -> SlaState:
    return SlaState(Phase.EARLY_TERMINATED, TerminationReason(reason))


# Events


@dataclass(frozen=True)
class ServiceStart:
    KIND: ClassVar[str] = "service_start"
    at: datetime


@dataclass(frozen=True)
class IncidentOpened:
    KIND: ClassVar[str] = "incident_opened"
    at: datetime
    incident: IncidentRecord


@dataclass(frozen=True)
class IncidentResolved:
    KIND: ClassVar[str] = "incident_resolved"
    at: datetime
    incident_id: str
    note: str = ""


@dataclass(frozen=True)
class RenegotiationProposed:
    KIND: ClassVar[str] = "renegotiation_proposed"
    at: datetime


@dataclass(frozen=True)
class RenegotiationAccepted:
    KIND: ClassVar[str] = "renegotiation_accepted"
    at: datetime
    amendment: Amendment


@dataclass(frozen=True)
class RenegotiationRejected:
    KIND: ClassVar[str] = "renegotiation_rejected"
    at: datetime


@dataclass(frozen=True)
class PeriodClosed:
    """Billing-period boundary carrying the availability measured over the period."""

    KIND: ClassVar[str] = "period_closed"
    at: datetime
    availability: float


@dataclass(frozen=True)
class LifetimeExpired:
    KIND: ClassVar[str] = "lifetime_expired"
    at: datetime


@dataclass(frozen=True)
class TerminationRequested:
    KIND: ClassVar[str] = "termination_requested"
    at: datetime


@dataclass(frozen=True)
class FinalizeRetention:
    KIND: ClassVar[str] = "finalize_retention"
    at: datetime


LifecycleEvent = Union[
    ServiceStart,
    IncidentOpened,
    IncidentResolved,
    RenegotiationProposed,
    RenegotiationAccepted,
    RenegotiationRejected,
    PeriodClosed,
    LifetimeExpired,
    TerminationRequested,
    FinalizeRetention,
]

EVENT_TYPES = (
    ServiceStart,
    IncidentOpened,
    IncidentResolved,
    RenegotiationProposed,
    RenegotiationAccepted,
    RenegotiationRejected,
    PeriodClosed,
    LifetimeExpired,
    TerminationRequested,
    FinalizeRetention,
)


# Directives


@dataclass(frozen=True)
class EvaluatePenalty:
    incident_id: str


@dataclass(frozen=True)
class OpenRenegotiation:
    incident_id: str


@dataclass(frozen=True)
class TriggerEarlyTermination:
    reason: TerminationReason


@dataclass(frozen=True)
class FinalizeBilling:
    pass


@dataclass(frozen=True)
class ApplyAmendment:
    amendment: Amendment


ActionDirective = Union[EvaluatePenalty, OpenRenegotiation, TriggerEarlyTermination, FinalizeBilling, ApplyAmendment]


def tracker_exceeded(history: Iterable[IncidentRecord], limits: TrackingLimits, now: datetime) -> bool:
    """True if more major/critical incidents than allowed started in [now - window, now]."""
    since = now - limits.window_length
    count = sum(1 for r in history if r.incident_class.severe and since <= r.start <= now)
    return count > limits.max_major_plus_critical


def breached_metrics(terms: Terms, incident: IncidentRecord) -> List[str]:
    """Names of the affected metrics whose observed value is strictly worse than the violation threshold."""
    breached = []
    for name, observed in incident.affected_metrics:
        spec = terms.qos(name)
        if spec is not None and spec.breached(observed):
            breached.append(name)
    return breached


def _find_open(history: Sequence[IncidentRecord], incident_id: str) -> IncidentRecord:
    for record in reversed(history):
        if record.id == incident_id and record.is_open:
            return record
    raise UnknownIncidentError("no open incident {!r}".format(incident_id))


def _terminate(reason: TerminationReason) -> Tuple[SlaState, List[ActionDirective]]:
    return early_terminated(reason), [TriggerEarlyTermination(reason), FinalizeBilling()]


def _retained(retention: Retention) -> SlaState:
    return ARCHIVED if Retention(retention) is Retention.ARCHIVE else PURGED


def step(
    state: SlaState, terms: Terms, history: Sequence[IncidentRecord], event: LifecycleEvent
) -> Tuple[SlaState, List[ActionDirective]]:
    """Apply one event, the state is left unchanged when an error is raised."""
    phase = state.phase

    if isinstance(event, ServiceStart):
        if phase is Phase.CREATED:
            return ACTIVE, []

    elif isinstance(event, TerminationRequested):
        if phase in (Phase.CREATED, Phase.ACTIVE, Phase.RENEGOTIATING):
            return _terminate(TerminationReason.TENANT_REQUEST)

    elif isinstance(event, IncidentOpened):
        if state.operating:
            incident = event.incident
            for name, _ in incident.affected_metrics:
                if terms.qos(name) is None:
                    raise UnknownMetricError("incident {!r}: unknown metric {!r}".format(incident.id, name))
            if any(r.id == incident.id and r.is_open for r in history):
                raise LifecycleError("incident {!r} is already open".format(incident.id))
            if incident.incident_class.severe and tracker_exceeded(
                list(history) + [incident], terms.tracking, event.at
            ):
                return _terminate(TerminationReason.TRACKING_LIMIT)
            return state, []

    elif isinstance(event, IncidentResolved):
        if state.operating:
            incident = _find_open(history, event.incident_id)
            if event.at <= incident.start:
                raise InvalidTransitionError(state, event)
            if incident.incident_class.severe:
                return state, [EvaluatePenalty(incident.id), OpenRenegotiation(incident.id)]
            if breached_metrics(terms, incident):
                return state, [EvaluatePenalty(incident.id)]
            return state, []

    elif isinstance(event, RenegotiationProposed):
        if phase is Phase.ACTIVE and any(r.incident_class.severe for r in history):
            return RENEGOTIATING, []

    elif isinstance(event, RenegotiationAccepted):
        if phase is Phase.RENEGOTIATING:
            return ACTIVE, [ApplyAmendment(event.amendment)]

    elif isinstance(event, RenegotiationRejected):
        if phase is Phase.RENEGOTIATING:
            return ACTIVE, []

    elif isinstance(event, PeriodClosed):
        if state.operating:
            if as_fraction(event.availability) <= terms.availability.terminated:
                return _terminate(TerminationReason.TERMINATED_AVAILABILITY)
            return state, []

    elif isinstance(event, LifetimeExpired):
        if state.operating:
            return EXPIRED, [FinalizeBilling()]

    elif isinstance(event, FinalizeRetention):
        if state.ended:
            return _retained(terms.retention), []

    raise InvalidTransitionError(state, event)


def finalize(
    state: SlaState, retention: Retention, store: Optional[RecordStore] = None, key: Optional[str] = None
) -> SlaState:
    """Archive or purge an ended contract, and its records when a store is given."""
    if not state.ended:
        raise WrongStateError("cannot finalize a contract in state {}".format(state))

    final = _retained(retention)
    if store is not None and key is not None:
        if final.phase is Phase.ARCHIVED:
            store.archive(key)
        else:
            store.purge(key)
    logger.info("contract_finalized", extra={"key": key, "state": str(final)})
    return final


@dataclass
class LifecycleOutcome:
    state: SlaState
    contract: SlaContract
    history: List[IncidentRecord] = field(default_factory=list)
    directives: List[Tuple[datetime, ActionDirective]] = field(default_factory=list)
    transitions: List[Tuple[datetime, SlaState]] = field(default_factory=list)
    dropped: int = 0
    # when the contract expired or was terminated, incidents still open stop counting there
    ended_at: Optional[datetime] = None

    @property
    def terminated(self) -> bool:
        return self.state.phase is Phase.EARLY_TERMINATED or any(
            isinstance(d, TriggerEarlyTermination) for _, d in self.directives
        )

    @property
    def termination_reason(self) -> Optional[TerminationReason]:
        for _, directive in self.directives:
            if isinstance(directive, TriggerEarlyTermination):
                return directive.reason
        return None

    def penalized_incidents(self) -> List[str]:
        return [d.incident_id for _, d in self.directives if isinstance(d, EvaluatePenalty)]


def _snapshot(contract: SlaContract, history: Sequence[IncidentRecord]) -> dict:
    return {
        "contract": contract_to_document(contract),
        "incidents": [r.to_document() for r in history],
    }


def _record_late_resolution(history: List[IncidentRecord], event: IncidentResolved) -> None:
    for i, record in enumerate(history):
        if record.id == event.incident_id and record.is_open and event.at > record.start:
            history[i] = record.resolved(event.at, event.note)
            return


def run_trace(
    contract: SlaContract,
    events: Iterable[LifecycleEvent],
    store: Optional[RecordStore] = None,
    stop_on_terminal: bool = True,
) -> LifecycleOutcome:
    """Replay a time-ordered trace against the contract.

    The incident history is kept from the events, accepted renegotiations are
    applied to the contract. Events after the contract has ended (other than the
    retention finalization) are dropped, or rejected when `stop_on_terminal` is False.
    A dropped resolution still closes its incident in the history.
    """
    outcome = LifecycleOutcome(state=CREATED, contract=contract)
    last_at: Optional[datetime] = None
    if store is not None:
        store.put(contract.id, _snapshot(contract, outcome.history))

    for event in events:
        if last_at is not None and event.at < last_at:
            raise TimestampRegressionError("{} at {} is earlier than {}".format(event.KIND, event.at, last_at))
        last_at = event.at

        state = outcome.state
        if stop_on_terminal and (state.terminal or (state.ended and not isinstance(event, FinalizeRetention))):
            if isinstance(event, IncidentResolved):
                _record_late_resolution(outcome.history, event)
            outcome.dropped += 1
            logger.debug("event_dropped", extra={"contract": contract.id, "event": event.KIND, "state": str(state)})
            continue

        at = min(max(event.at, outcome.contract.start_time), outcome.contract.end_time)
        terms = effective_terms_at(outcome.contract, at)
        if isinstance(event, FinalizeRetention) and state.ended:
            new_state, directives = finalize(state, terms.retention, store, contract.id), []
        else:
            new_state, directives = step(state, terms, outcome.history, event)

        if isinstance(event, IncidentOpened):
            outcome.history.append(event.incident)
        elif isinstance(event, IncidentResolved):
            for i, record in enumerate(outcome.history):
                if record.id == event.incident_id and record.is_open:
                    outcome.history[i] = record.resolved(event.at, event.note)

        for directive in directives:
            if isinstance(directive, ApplyAmendment):
                outcome.contract = apply_amendment(outcome.contract, directive.amendment, renegotiated=True)
            outcome.directives.append((event.at, directive))

        if new_state != state:
            outcome.transitions.append((event.at, new_state))
            logger.debug(
                "lifecycle_transition",
                extra={"contract": contract.id, "event": event.KIND, "from": str(state), "to": str(new_state)},
            )
            if new_state.ended and outcome.ended_at is None:
                outcome.ended_at = event.at
            if new_state.phase is Phase.EARLY_TERMINATED:
                logger.info("early_termination", extra={"contract": contract.id, "reason": new_state.reason.value})
        outcome.state = new_state

        if store is not None and not new_state.terminal:
            store.put(contract.id, _snapshot(outcome.contract, outcome.history))

    return outcome
