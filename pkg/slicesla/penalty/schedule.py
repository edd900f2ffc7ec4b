"""Availability to penalty step schedules.

A schedule is an ordered list of `(availability threshold, penalty percent)`
breakpoints with strictly decreasing thresholds, housed between the accepted
and the terminated availability. Evaluating it returns the percent of the
lowest threshold that is still at or above the measured availability.
"""
from dataclasses import dataclass
from decimal import Decimal
from typing import List
from typing import Sequence
from typing import Tuple

from slicesla.base.money import Number
from slicesla.base.money import ZERO
from slicesla.base.money import to_decimal
from slicesla.penalty.error import ScheduleError

# Availabilities are compared to thresholds after rounding, so 1 - 31104/2592000 hits 0.988 exactly
AVAILABILITY_QUANTUM = Decimal("1e-12")

Breakpoint = Tuple[Decimal, Decimal]


def as_fraction(availability: Number) -> Decimal:
    return to_decimal(availability).quantize(AVAILABILITY_QUANTUM)


@dataclass(frozen=True)
class BreakpointSchedule:
    points: Tuple[Breakpoint, ...]
    accepted: Decimal
    terminated: Decimal
    agreed: Decimal = Decimal(1)

    def violations(self) -> List[str]:
        """Return the broken schedule invariants (empty when valid)."""
        errors = []
        if not self.terminated < self.accepted <= self.agreed <= 1:
            errors.append("terminated < accepted <= agreed <= 1 required")
        for (v_hi, p_hi), (v_lo, p_lo) in zip(self.points, self.points[1:]):
            if not v_lo < v_hi:
                errors.append("thresholds must be strictly decreasing ({} then {})".format(v_hi, v_lo))
            if not p_lo > p_hi:
                errors.append("penalties must be strictly increasing ({} then {})".format(p_hi, p_lo))
        for v, p in self.points:
            if not self.terminated <= v < self.accepted:
                errors.append("threshold {} outside [terminated, accepted)".format(v))
            if p < 0:
                errors.append("negative penalty {}".format(p))
        return errors

    def __repr__(self):
        return "slicesla.penalty.BreakpointSchedule(accepted={}, terminated={}, points={})".format(
            self.accepted, self.terminated, len(self.points)
        )


@dataclass(frozen=True)
class LinearScheduleParams:
    accepted: Decimal
    terminated: Decimal
    step: Decimal
    increment: Decimal


@dataclass(frozen=True)
class ScheduleSegment:
    """Add `increment` percent per `step` of shortfall until the availability reaches `floor`."""

    floor: Decimal
    step: Decimal
    increment: Decimal


@dataclass(frozen=True)
class ScheduleEvaluation:
    penalty_percent: Decimal
    terminate: bool


def compile_linear_schedule(params: LinearScheduleParams) -> BreakpointSchedule:
    """Breakpoints at `accepted - m*step` charged `m*increment`, for m = 1..floor(span/step)."""
    accepted = to_decimal(params.accepted)
    terminated = to_decimal(params.terminated)
    step = to_decimal(params.step)
    increment = to_decimal(params.increment)
    if step <= 0 or increment <= 0:
        raise ScheduleError("step and increment must be positive")
    if not terminated < accepted:
        raise ScheduleError("terminated < accepted required")

    count = int((accepted - terminated) // step)
    points = tuple((accepted - m * step, m * increment) for m in range(1, count + 1))
    return BreakpointSchedule(points=points, accepted=accepted, terminated=terminated)


def compile_segmented_schedule(
    accepted: Number,
    terminated: Number,
    first_drop: Number,
    first_penalty: Number,
    segments: Sequence[ScheduleSegment],
) -> BreakpointSchedule:
    """Irregular schedule: a first breakpoint at `accepted - first_drop`, then segments walking down."""
    accepted = to_decimal(accepted)
    terminated = to_decimal(terminated)
    threshold = accepted - to_decimal(first_drop)
    penalty = to_decimal(first_penalty)
    points = [(threshold, penalty)]
    for segment in segments:
        if segment.step <= 0:
            raise ScheduleError("segment step must be positive")
        while threshold - segment.step >= segment.floor:
            threshold -= segment.step
            penalty += segment.increment
            points.append((threshold, penalty))

    return BreakpointSchedule(points=tuple(points), accepted=accepted, terminated=terminated)


def nonlinear_reference_schedule() -> BreakpointSchedule:
    """The reference irregular curve: 5% at 0.2% shortfall below 99.8%, +2% per 0.1% down to 99.1%,
    a single +10% step to 99.0%, then +5% per 0.1% down to the 98.4% terminated level."""
    d = Decimal
    return compile_segmented_schedule(
        accepted=d("0.998"),
        terminated=d("0.984"),
        first_drop=d("0.002"),
        first_penalty=d(5),
        segments=[
            ScheduleSegment(floor=d("0.991"), step=d("0.001"), increment=d(2)),
            ScheduleSegment(floor=d("0.990"), step=d("0.001"), increment=d(10)),
            ScheduleSegment(floor=d("0.984"), step=d("0.001"), increment=d(5)),
        ],
    )


def linear_reference_schedule() -> BreakpointSchedule:
    """The reference linear curve: 5% per 0.2% shortfall between 99.8% and 98.4%."""
    return compile_linear_schedule(
        LinearScheduleParams(
            accepted=Decimal("0.998"), terminated=Decimal("0.984"), step=Decimal("0.002"), increment=Decimal(5)
        )
    )


def evaluate_schedule(
    schedule: BreakpointSchedule, availability: Number, interpolate: bool = False
) -> ScheduleEvaluation:
    """Return the penalty percent for the availability and whether the terminated level is reached."""
    a = as_fraction(availability)
    terminate = a <= schedule.terminated
    if interpolate:
        return ScheduleEvaluation(_interpolate(schedule, a), terminate)

    penalty = ZERO
    for threshold, percent in schedule.points:
        if threshold >= a:
            penalty = percent
        else:
            break
    return ScheduleEvaluation(penalty, terminate)


def _interpolate(schedule: BreakpointSchedule, a: Decimal) -> Decimal:
    anchors = [(schedule.accepted, ZERO)] + list(schedule.points)
    if a >= schedule.accepted:
        return ZERO
    if not schedule.points or a <= anchors[-1][0]:
        return anchors[-1][1]

    for (v_hi, p_hi), (v_lo, p_lo) in zip(anchors, anchors[1:]):
        if v_lo <= a < v_hi:
            return p_hi + (p_lo - p_hi) * (v_hi - a) / (v_hi - v_lo)

    raise ScheduleError("schedule thresholds are not ordered")  # pragma: no cover


def sample_curve(
    schedule: BreakpointSchedule, resolution: Number, interpolate: bool = False
) -> List[Tuple[Decimal, Decimal]]:
    """Sample `(availability, penalty percent)` pairs from agreed down to terminated availability."""
    res = to_decimal(resolution)
    if res <= 0:
        raise ScheduleError("resolution must be positive, got {}".format(resolution))

    samples = []
    k = 0
    while True:
        a = schedule.agreed - k * res
        if a <= schedule.terminated:
            break
        samples.append(a)
        k += 1
    samples.append(schedule.terminated)

    return [(a, evaluate_schedule(schedule, a, interpolate=interpolate).penalty_percent) for a in samples]
