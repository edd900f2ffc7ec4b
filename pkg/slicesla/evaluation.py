"""End-to-end evaluation of a contract against an event trace.

lifecycle -> availability -> penalties -> economics, for one observation window
(the contract lifetime by default). The availability measured over the window
is fed back into the lifecycle as a billing-period boundary (`PeriodClosed`) at
the window end, counting major and critical outages only. A window reaching the
contract end expires the contract when the trace does not.
"""
import logging
from dataclasses import dataclass
from dataclasses import field
from datetime import datetime
from datetime import timedelta
from decimal import Decimal
from typing import Dict
from typing import List
from typing import Optional
from typing import Sequence
from typing import Tuple

from slicesla.availability import AvailabilityResult
from slicesla.availability import ObservationWindow
from slicesla.availability import compute_availability
from slicesla.availability import normalize_outages
from slicesla.base.money import to_decimal
from slicesla.base.store import RecordStore
from slicesla.contract import amendment_times
from slicesla.contract import effective_terms_at
from slicesla.contract.model import SlaContract
from slicesla.contract.model import Terms
from slicesla.economics import EconomicsResult
from slicesla.economics import combine
from slicesla.economics import evaluate_economics
from slicesla.economics import net_position
from slicesla.economics import penalty_amount
from slicesla.incident import IncidentClass
from slicesla.incident import IncidentRecord
from slicesla.lifecycle import LifecycleEvent
from slicesla.lifecycle import LifecycleOutcome
from slicesla.lifecycle import LifetimeExpired
from slicesla.lifecycle import PeriodClosed
from slicesla.lifecycle import ServiceStart
from slicesla.lifecycle import breached_metrics
from slicesla.lifecycle import run_trace
from slicesla.penalty.formulas import PenaltyBreakdown
from slicesla.penalty.formulas import PenaltyInputs
from slicesla.penalty.formulas import SubcontractTerm
from slicesla.penalty.formulas import penalty_total
from slicesla.penalty.schedule import evaluate_schedule
from slicesla.penalty.terms import PenaltyBase

logger = logging.getLogger(__name__)

_US = timedelta(microseconds=1)


@dataclass
class EvaluationReport:
    contract_id: str
    contract_version: int
    window: ObservationWindow
    availability: AvailabilityResult
    incident_counts: Dict[IncidentClass, int]
    penalties: PenaltyBreakdown
    schedule_percent: Decimal
    schedule_terminate: bool
    economics: EconomicsResult
    penalty_base: PenaltyBase
    penalty_amount: Decimal
    net_position: Decimal
    currency: str
    final_state: str
    termination_reason: Optional[str] = None
    penalized_incidents: Tuple[str, ...] = ()
    dropped_events: int = 0
    outcome: Optional[LifecycleOutcome] = field(default=None, compare=False, repr=False)

    @property
    def early_terminated(self) -> bool:
        return self.termination_reason is not None


def to_units(duration: timedelta, unit: timedelta) -> Decimal:
    """Express a duration in penalty time units, exactly."""
    return to_decimal(duration // _US) / to_decimal(unit // _US)


def default_window(contract: SlaContract, now: Optional[datetime] = None) -> ObservationWindow:
    """The contract lifetime, cut at `now` when given."""
    end = contract.end_time if now is None else min(now, contract.end_time)
    return ObservationWindow(contract.start_time, end)


def _insert_before(events: Sequence[LifecycleEvent], event: LifecycleEvent) -> List[LifecycleEvent]:
    """Insert `event` ahead of the events at or after its time."""
    for i, e in enumerate(events):
        if e.at >= event.at:
            return list(events[:i]) + [event] + list(events[i:])
    return list(events) + [event]


def _subcontract_inputs(
    terms: Terms,
    history: Sequence[IncidentRecord],
    window: ObservationWindow,
    origin: datetime,
    ended_at: Optional[datetime] = None,
) -> Tuple[Tuple[Tuple[Decimal, Decimal], ...], Tuple[SubcontractTerm, ...]]:
    p = terms.penalty
    durations = []
    samples = []
    for sub in p.subcontracts:
        breaching = [i for i in history if set(breached_metrics(terms, i)) & set(sub.metrics)]
        outages = normalize_outages(breaching, window, open_until=ended_at)
        if not outages:
            continue
        durations.append((sub.unit_price, to_units(outages.downtime, p.time_unit)))
        profile = p.profile(sub.importance)
        for start, end in outages.intervals:
            samples.append(
                SubcontractTerm(
                    id=sub.id,
                    unit_price=sub.unit_price,
                    importance=profile,
                    outage_start=to_units(start - origin, p.time_unit),
                    outage_length=to_units(end - start, p.time_unit),
                    sampling_step=sub.sampling_step,
                )
            )
    return tuple(durations), tuple(samples)


def evaluate_trace(
    contract: SlaContract,
    events: Sequence[LifecycleEvent],
    window: Optional[ObservationWindow] = None,
    now: Optional[datetime] = None,
    store: Optional[RecordStore] = None,
) -> EvaluationReport:
    """Run the whole pipeline, events after `now` (or after the window end) are ignored."""
    window = window or default_window(contract, now)
    cutoff = window.end if now is None else min(now, window.end)
    events = [e for e in events if e.at <= cutoff]
    if not any(isinstance(e, ServiceStart) for e in events):
        events = [ServiceStart(at=contract.start_time)] + events
    if cutoff >= contract.end_time and not any(isinstance(e, LifetimeExpired) for e in events):
        events = _insert_before(events, LifetimeExpired(at=contract.end_time))

    # Incident history and renegotiated terms, before the period is closed
    first = run_trace(contract, events)
    terms = effective_terms_at(first.contract, window.end)
    a_terms = terms.availability
    outages = normalize_outages(first.history, window, a_terms.outage_classes, first.ended_at)
    availability = compute_availability(window, outages, a_terms.band_high_min, a_terms.band_average_min)

    # minor outages alone never terminate the contract
    severe_classes = {c for c in a_terms.outage_classes if c.severe}
    severe = normalize_outages(first.history, window, severe_classes, first.ended_at)
    closing = PeriodClosed(at=window.end, availability=compute_availability(window, severe).availability)
    outcome = run_trace(contract, _insert_before(events, closing), store=store)
    terms = effective_terms_at(outcome.contract, window.end)
    p = terms.penalty
    origin = contract.start_time

    in_window = {i.id: i for i in outcome.history if window.start <= i.start <= window.end}
    penalized = tuple(i for i in outcome.penalized_incidents() if i in in_window)
    sub_durations, sub_terms = _subcontract_inputs(terms, outcome.history, window, origin, outcome.ended_at)
    bound = to_units(window.end - origin, p.time_unit)
    inputs = PenaltyInputs(
        per_breach=p.per_breach,
        breaches=len(penalized),
        per_unit_time=p.per_unit_time,
        duration=to_units(outages.downtime, p.time_unit),
        subcontract_durations=sub_durations,
        outages=tuple(
            (to_units(start - origin, p.time_unit), to_units(end - start, p.time_unit))
            for start, end in outages.intervals
        ),
        sampling_step=p.sampling_step,
        importance=p.profile(p.importance),
        bound=bound,
        subcontract_terms=sub_terms,
        subcontract_bounds={t.id: bound for t in sub_terms},
    )
    scheduled = evaluate_schedule(terms.schedule(), availability.availability)
    penalties = penalty_total(inputs, p.components, scheduled.penalty_percent)

    economics = evaluate_window_economics(outcome.contract, window)
    counts = {c: 0 for c in IncidentClass}
    for incident in in_window.values():
        counts[incident.incident_class] += 1

    reason = outcome.termination_reason
    report = EvaluationReport(
        contract_id=contract.id,
        contract_version=outcome.contract.version,
        window=window,
        availability=availability,
        incident_counts=counts,
        penalties=penalties,
        schedule_percent=scheduled.penalty_percent,
        schedule_terminate=scheduled.terminate,
        economics=economics,
        penalty_base=p.base,
        penalty_amount=penalty_amount(economics, penalties, p.base),
        net_position=net_position(economics, penalties, p.base),
        currency=terms.economics.currency,
        final_state=str(outcome.state),
        termination_reason=reason.value if reason else None,
        penalized_incidents=penalized,
        dropped_events=outcome.dropped,
        outcome=outcome,
    )
    logger.info(
        "contract_evaluated",
        extra={
            "contract": contract.id,
            "availability": availability.availability,
            "schedule_percent": str(scheduled.penalty_percent),
            "penalty_total": str(penalties.total),
            "state": report.final_state,
        },
    )
    return report


def evaluate_window_economics(contract: SlaContract, window: ObservationWindow) -> EconomicsResult:
    """Economics of each amendment interval, weighted by the share of the window it covers."""
    cuts = [t for t in amendment_times(contract) if window.start < t < window.end]
    bounds = [window.start] + cuts + [window.end]
    total = window.length // _US
    results = []
    for lo, hi in zip(bounds, bounds[1:]):
        weight = to_decimal((hi - lo) // _US) / to_decimal(total) if cuts else Decimal(1)
        results.append(evaluate_economics(effective_terms_at(contract, lo).economics, weight))
    return combine(results)
