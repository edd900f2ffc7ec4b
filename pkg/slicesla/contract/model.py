"""Contract types."""
from dataclasses import dataclass
from dataclasses import field
from dataclasses import replace
from datetime import datetime
from datetime import timedelta
from decimal import Decimal
from enum import Enum
from typing import Any
from typing import FrozenSet
from typing import Optional
from typing import Tuple

from slicesla.economics import EconomicsTerms
from slicesla.incident import IncidentClass
from slicesla.penalty.schedule import BreakpointSchedule
from slicesla.penalty.terms import PenaltyTerms


class Mode(str, Enum):
    STATIC = "static"
    DYNAMIC = "dynamic"


class Direction(str, Enum):
    HIGHER_IS_BETTER = "higher-is-better"
    LOWER_IS_BETTER = "lower-is-better"


class Retention(str, Enum):
    PURGE = "purge"
    ARCHIVE = "archive"


@dataclass(frozen=True)
class QosMetricSpec:
    name: str
    unit: str
    target: float
    violation_threshold: float
    direction: Direction = Direction.HIGHER_IS_BETTER

    def breached(self, observed: float) -> bool:
        """Strictly worse than the violation threshold, a tie is not a breach."""
        if self.direction is Direction.HIGHER_IS_BETTER:
            return observed < self.violation_threshold
        return observed > self.violation_threshold


@dataclass(frozen=True)
class AvailabilityTerms:
    agreed: Decimal = Decimal(1)
    accepted: Decimal = Decimal("0.998")
    terminated: Decimal = Decimal("0.984")
    band_high_min: Decimal = Decimal(1)
    band_average_min: Decimal = Decimal("0.995")
    outage_classes: FrozenSet[IncidentClass] = frozenset(IncidentClass)


@dataclass(frozen=True)
class TrackingLimits:
    window_length: timedelta = timedelta(days=30)
    max_major_plus_critical: int = 3


@dataclass(frozen=True)
class Terms:
    """The amendable part of a contract, also the snapshot returned by `effective_terms_at`."""

    qos_specs: Tuple[QosMetricSpec, ...] = ()
    availability: AvailabilityTerms = field(default_factory=AvailabilityTerms)
    penalty: PenaltyTerms = field(default_factory=PenaltyTerms)
    economics: EconomicsTerms = field(default_factory=EconomicsTerms)
    tracking: TrackingLimits = field(default_factory=TrackingLimits)
    retention: Retention = Retention.ARCHIVE

    def qos(self, name: str) -> Optional[QosMetricSpec]:
        for spec in self.qos_specs:
            if spec.name == name:
                return spec
        return None

    def schedule(self) -> BreakpointSchedule:
        a = self.availability
        return self.penalty.schedule.compile(a.accepted, a.terminated, a.agreed)


@dataclass(frozen=True)
class Amendment:
    """Term changes (JSON-Pointer path into the terms document, new value) effective from `effective_time`."""

    effective_time: datetime
    changes: Tuple[Tuple[str, Any], ...] = ()
    renegotiated: bool = False


@dataclass(frozen=True)
class SlaContract:
    id: str
    tenant: str
    provider: str
    start_time: datetime
    end_time: datetime
    mode: Mode = Mode.STATIC
    terms: Terms = field(default_factory=Terms)
    amendments: Tuple[Amendment, ...] = ()

    @property
    def version(self) -> int:
        return len(self.amendments) + 1

    def at_version(self, version: int) -> "SlaContract":
        """Return the contract as it was at the given version (1 is the signed contract)."""
        if not 1 <= version <= self.version:
            raise ValueError("version {} outside 1..{}".format(version, self.version))
        return replace(self, amendments=self.amendments[: version - 1])

    def in_lifetime(self, t: datetime) -> bool:
        return self.start_time <= t <= self.end_time

    def __repr__(self):
        return "slicesla.contract.SlaContract(id={!r}, mode={!r}, version={})".format(
            self.id, self.mode.value, self.version
        )
