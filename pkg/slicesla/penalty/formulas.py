"""Count, duration, subcontract and importance-weighted penalties, and their total.

All amounts are `Decimal`. Times and durations are expressed in the contract's
penalty time unit (minutes by default).
"""
from bisect import bisect_right
from dataclasses import dataclass
from dataclasses import field
from decimal import Decimal
from decimal import ROUND_CEILING
from enum import Enum
from typing import Dict
from typing import FrozenSet
from typing import Iterable
from typing import List
from typing import Mapping
from typing import Optional
from typing import Tuple
from typing import Union

from slicesla.base.money import Number
from slicesla.base.money import ZERO
from slicesla.base.money import to_decimal
from slicesla.penalty.error import PenaltyError

ONE = Decimal(1)


class Component(str, Enum):
    COUNT = "count"
    DURATION = "duration"
    SUBCONTRACTS = "subcontracts"
    IMPORTANCE = "importance"
    SUBCONTRACT_IMPORTANCE = "subcontract-importance"


ALL_COMPONENTS: FrozenSet[Component] = frozenset(Component)


@dataclass(frozen=True)
class ImportanceProfile:
    """Piecewise-constant importance: each `(time, value)` breakpoint holds until the next one.

    Times before the first breakpoint (or at/after `end`) get `default`. With a `period`, the
    profile repeats (e.g. a daily profile with a 1440 minutes period).
    """

    breakpoints: Tuple[Tuple[Decimal, Decimal], ...] = ()
    period: Optional[Decimal] = None
    end: Optional[Decimal] = None
    default: Decimal = ONE

    @classmethod
    def constant(cls, value: Number = 1) -> "ImportanceProfile":
        return cls(default=to_decimal(value))

    def value_at(self, t: Number) -> Decimal:
        t = to_decimal(t)
        if self.period:
            t = t % self.period
            if t < 0:
                t += self.period
        if self.end is not None and t >= self.end:
            return self.default

        times = [bp[0] for bp in self.breakpoints]
        i = bisect_right(times, t)
        if i == 0:
            return self.default
        return self.breakpoints[i - 1][1]

    def violations(self) -> List[str]:
        errors = []
        values = [v for _, v in self.breakpoints] + [self.default]
        for v in values:
            if not ZERO < v <= ONE:
                errors.append("importance value {} outside (0, 1]".format(v))
        times = [t for t, _ in self.breakpoints]
        if times != sorted(set(times)):
            errors.append("importance breakpoints must have strictly increasing times")
        if self.period is not None and self.period <= 0:
            errors.append("importance period must be positive")
        return errors


@dataclass(frozen=True)
class SubcontractTerm:
    """One exceeded subcontract outage: unit price, importance and sampling step of sub-service `id`."""

    id: str
    unit_price: Decimal
    importance: ImportanceProfile
    outage_start: Decimal
    outage_length: Decimal
    sampling_step: Decimal


def penalty_count(V: Number, n: int) -> Decimal:
    """Per-breach penalty V times the number of breaches n."""
    if n < 0:
        raise PenaltyError("breach count must be nonnegative")
    return to_decimal(V) * n


def penalty_duration(w: Number, t: Number) -> Decimal:
    """Penalty unit price w per time unit of unavailability t."""
    return to_decimal(w) * to_decimal(t)


def penalty_subcontracts(terms: Iterable[Tuple[Number, Number]]) -> Decimal:
    """Sum of w_i * t_i over the exceeded subcontracts."""
    total = ZERO
    for w_i, t_i in terms:
        total += to_decimal(w_i) * to_decimal(t_i)
    return total


def penalty_importance(
    w: Number,
    start: Number,
    duration: Number,
    step: Number,
    importance: Optional[ImportanceProfile],
    bound: Number,
) -> Decimal:
    """Importance-weighted penalty of one outage `[start, start + duration]`.

    Samples the importance at left endpoints `start + (j - 1) * step` for j = 1..ceil(duration/step),
    the last step being partial, and skips samples past `bound`.
    """
    w = to_decimal(w)
    start = to_decimal(start)
    duration = to_decimal(duration)
    step = to_decimal(step)
    bound = to_decimal(bound)
    if step <= 0:
        raise PenaltyError("sampling step must be positive")
    if duration <= 0:
        return ZERO

    importance = importance or ImportanceProfile()
    end = start + duration
    samples = int((duration / step).to_integral_value(rounding=ROUND_CEILING))
    total = ZERO
    for j in range(samples):
        t_j = start + j * step
        if t_j > bound:
            break
        total += w * importance.value_at(t_j) * min(step, end - t_j)
    return total


def penalty_importance_multi(
    subcontracts: Iterable[SubcontractTerm], bounds: Union[Number, Mapping[str, Number]]
) -> Decimal:
    """Sum of the importance-weighted penalties of every subcontract outage.

    `bounds` is either one period bound for all subcontracts or a mapping of subcontract id to bound.
    """
    total = ZERO
    for term in subcontracts:
        bound = bounds[term.id] if isinstance(bounds, Mapping) else bounds
        total += penalty_importance(
            term.unit_price, term.outage_start, term.outage_length, term.sampling_step, term.importance, bound
        )
    return total


@dataclass(frozen=True)
class PenaltyInputs:
    """Inputs of the five penalty components for one evaluation period."""

    per_breach: Decimal = ZERO  # V
    breaches: int = 0  # n
    per_unit_time: Decimal = ZERO  # w
    duration: Decimal = ZERO  # t
    subcontract_durations: Tuple[Tuple[Decimal, Decimal], ...] = ()  # (w_i, t_i)
    outages: Tuple[Tuple[Decimal, Decimal], ...] = ()  # (start, length) for the importance term
    sampling_step: Decimal = ONE  # delta t
    importance: ImportanceProfile = field(default_factory=ImportanceProfile)
    bound: Decimal = ZERO  # T
    subcontract_terms: Tuple[SubcontractTerm, ...] = ()
    subcontract_bounds: Mapping[str, Decimal] = field(default_factory=dict)  # T_i


@dataclass(frozen=True)
class PenaltyBreakdown:
    count: Decimal
    duration: Decimal
    subcontracts: Decimal
    importance: Decimal
    subcontract_importance: Decimal
    total: Decimal
    disabled: FrozenSet[Component] = frozenset()
    inputs: Optional[PenaltyInputs] = None
    schedule_percent: Decimal = ZERO

    def component(self, component: Component) -> Decimal:
        return self.as_dict()[component]

    def as_dict(self) -> Dict[Component, Decimal]:
        return {
            Component.COUNT: self.count,
            Component.DURATION: self.duration,
            Component.SUBCONTRACTS: self.subcontracts,
            Component.IMPORTANCE: self.importance,
            Component.SUBCONTRACT_IMPORTANCE: self.subcontract_importance,
        }


def penalty_total(
    inputs: PenaltyInputs, mask: Optional[Iterable[Component]] = None, schedule_percent: Number = 0
) -> PenaltyBreakdown:
    """Compute the enabled components and their sum, disabled ones are reported as 0."""
    enabled = ALL_COMPONENTS if mask is None else frozenset(Component(c) for c in mask)

    values = {c: ZERO for c in Component}
    if Component.COUNT in enabled:
        values[Component.COUNT] = penalty_count(inputs.per_breach, inputs.breaches)
    if Component.DURATION in enabled:
        values[Component.DURATION] = penalty_duration(inputs.per_unit_time, inputs.duration)
    if Component.SUBCONTRACTS in enabled:
        values[Component.SUBCONTRACTS] = penalty_subcontracts(inputs.subcontract_durations)
    if Component.IMPORTANCE in enabled:
        values[Component.IMPORTANCE] = sum(
            (
                penalty_importance(
                    inputs.per_unit_time, start, length, inputs.sampling_step, inputs.importance, inputs.bound
                )
                for start, length in inputs.outages
            ),
            ZERO,
        )
    if Component.SUBCONTRACT_IMPORTANCE in enabled:
        values[Component.SUBCONTRACT_IMPORTANCE] = penalty_importance_multi(
            inputs.subcontract_terms, inputs.subcontract_bounds
        )

    return PenaltyBreakdown(
        count=values[Component.COUNT],
        duration=values[Component.DURATION],
        subcontracts=values[Component.SUBCONTRACTS],
        importance=values[Component.IMPORTANCE],
        subcontract_importance=values[Component.SUBCONTRACT_IMPORTANCE],
        total=sum(values.values(), ZERO),
        disabled=ALL_COMPONENTS - enabled,
        inputs=inputs,
        schedule_percent=to_decimal(schedule_percent),
    )
