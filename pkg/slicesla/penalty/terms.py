"""Penalty terms as agreed in a contract."""
from dataclasses import dataclass
from dataclasses import field
from datetime import timedelta
from decimal import Decimal
from enum import Enum
from typing import Dict
from typing import FrozenSet
from typing import List
from typing import Optional
from typing import Tuple

from slicesla.base.money import ZERO
from slicesla.penalty.error import ScheduleError
from slicesla.penalty.formulas import ALL_COMPONENTS
from slicesla.penalty.formulas import Component
from slicesla.penalty.formulas import ImportanceProfile
from slicesla.penalty.schedule import BreakpointSchedule
from slicesla.penalty.schedule import LinearScheduleParams
from slicesla.penalty.schedule import ScheduleSegment
from slicesla.penalty.schedule import compile_linear_schedule
from slicesla.penalty.schedule import compile_segmented_schedule
from slicesla.penalty.schedule import nonlinear_reference_schedule


class PenaltyBase(str, Enum):
    PERCENT_OF_REVENUE = "percent-of-revenue"
    ABSOLUTE = "absolute-currency"


class ScheduleKind(str, Enum):
    LINEAR = "linear"
    SEGMENTED = "segmented"
    BREAKPOINTS = "breakpoints"
    NONLINEAR_REFERENCE = "nonlinear-reference"


@dataclass(frozen=True)
class ScheduleSpec:
    """How the contract's availability schedule is built, thresholds come from the availability terms."""

    kind: ScheduleKind = ScheduleKind.LINEAR
    step: Decimal = Decimal("0.002")
    increment: Decimal = Decimal(5)
    first_drop: Decimal = Decimal("0.002")
    first_penalty: Decimal = Decimal(5)
    segments: Tuple[ScheduleSegment, ...] = ()
    points: Tuple[Tuple[Decimal, Decimal], ...] = ()

    def compile(self, accepted: Decimal, terminated: Decimal, agreed: Decimal = Decimal(1)) -> BreakpointSchedule:
        if self.kind is ScheduleKind.LINEAR:
            schedule = compile_linear_schedule(
                LinearScheduleParams(accepted=accepted, terminated=terminated, step=self.step, increment=self.increment)
            )
        elif self.kind is ScheduleKind.SEGMENTED:
            schedule = compile_segmented_schedule(
                accepted, terminated, self.first_drop, self.first_penalty, self.segments
            )
        elif self.kind is ScheduleKind.BREAKPOINTS:
            schedule = BreakpointSchedule(points=self.points, accepted=accepted, terminated=terminated)
        elif self.kind is ScheduleKind.NONLINEAR_REFERENCE:
            schedule = nonlinear_reference_schedule()
            if (schedule.accepted, schedule.terminated) != (accepted, terminated):
                raise ScheduleError("the nonlinear reference schedule needs accepted 0.998 and terminated 0.984")
        else:  # pragma: no cover
            raise ScheduleError("unknown schedule kind {}".format(self.kind))

        return BreakpointSchedule(
            points=schedule.points, accepted=schedule.accepted, terminated=schedule.terminated, agreed=agreed
        )


@dataclass(frozen=True)
class SubcontractSpec:
    """A sub-service covering some QoS metrics with its own unit price and importance."""

    id: str
    unit_price: Decimal
    metrics: Tuple[str, ...]
    importance: Optional[str] = None
    sampling_step: Decimal = Decimal(1)


@dataclass(frozen=True)
class PenaltyTerms:
    schedule: ScheduleSpec = field(default_factory=ScheduleSpec)
    base: PenaltyBase = PenaltyBase.PERCENT_OF_REVENUE
    per_breach: Decimal = ZERO
    per_unit_time: Decimal = ZERO
    time_unit: timedelta = timedelta(minutes=1)
    sampling_step: Decimal = Decimal(1)
    importance: Optional[str] = None
    importance_profiles: Dict[str, ImportanceProfile] = field(default_factory=dict)
    subcontracts: Tuple[SubcontractSpec, ...] = ()
    components: FrozenSet[Component] = ALL_COMPONENTS

    def profile(self, name: Optional[str]) -> ImportanceProfile:
        """Return the named importance profile, a constant 1.0 profile when no name is given."""
        if name is None:
            return ImportanceProfile()
        return self.importance_profiles[name]

    def unresolved_references(self) -> List[str]:
        missing = []
        refs = [("importance", self.importance)] + [
            ("subcontracts/{}/importance".format(s.id), s.importance) for s in self.subcontracts
        ]
        for path, name in refs:
            if name is not None and name not in self.importance_profiles:
                missing.append("{}: unknown importance profile {!r}".format(path, name))
        return missing
