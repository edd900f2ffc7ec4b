"""Service availability over an observation window.

T_a = (T_h - T_u) / T_h where T_h is the window length and T_u the length of
the union of the service-affecting outages inside the window.
"""
from dataclasses import dataclass
from datetime import datetime
from datetime import timedelta
from decimal import Decimal
from enum import Enum
from typing import Collection
from typing import Iterable
from typing import List
from typing import Optional
from typing import Tuple

from slicesla.base.error import SliceSlaError
from slicesla.incident import IncidentClass
from slicesla.incident import IncidentRecord
from slicesla.penalty.schedule import as_fraction

Interval = Tuple[datetime, datetime]


class AvailabilityError(SliceSlaError):
    """Error raised for an empty or reversed observation window."""


class Band(str, Enum):
    HIGH = "high"
    AVERAGE = "average"
    LOW = "low"


@dataclass(frozen=True)
class ObservationWindow:
    start: datetime
    end: datetime

    def __post_init__(self):
        if not self.end > self.start:
            raise AvailabilityError("window end {} must be after start {}".format(self.end, self.start))

    @property
    def length(self) -> timedelta:
        """T_h"""
        return self.end - self.start

    def clip(
        self, start: datetime, end: Optional[datetime], open_until: Optional[datetime] = None
    ) -> Optional[Interval]:
        """Intersection of [start, end) with the window, None if empty.

        Open intervals run to `open_until` (the time the contract ended) or to the window end.
        """
        lo = max(start, self.start)
        if end is None:
            end = self.end if open_until is None else open_until
        hi = min(end, self.end)
        if lo >= hi:
            return None
        return lo, hi

    def contains(self, t: datetime) -> bool:
        return self.start <= t < self.end


@dataclass(frozen=True)
class OutageSet:
    intervals: Tuple[Interval, ...] = ()

    @property
    def downtime(self) -> timedelta:
        """T_u"""
        return sum((end - start for start, end in self.intervals), timedelta(0))

    def __len__(self):
        return len(self.intervals)


@dataclass(frozen=True)
class AvailabilityResult:
    availability: float
    band: Band
    uptime: timedelta
    downtime: timedelta

    @property
    def percent(self) -> float:
        return self.availability * 100


def merge_intervals(intervals: Iterable[Interval]) -> Tuple[Interval, ...]:
    """Union of half-open intervals, sorted and pairwise disjoint."""
    merged: List[Interval] = []
    for start, end in sorted(intervals):
        if merged and start <= merged[-1][1]:
            if end > merged[-1][1]:
                merged[-1] = (merged[-1][0], end)
        else:
            merged.append((start, end))
    return tuple(merged)


def normalize_outages(
    incidents: Iterable[IncidentRecord],
    window: ObservationWindow,
    counted_classes: Collection[IncidentClass] = frozenset(IncidentClass),
    open_until: Optional[datetime] = None,
) -> OutageSet:
    """Clip the service-affecting incidents of the counted classes to the window and merge them.

    Incidents still open run to `open_until` when given, to the window end otherwise.
    """
    clipped = []
    for incident in incidents:
        if not incident.service_affecting or incident.incident_class not in counted_classes:
            continue
        interval = window.clip(incident.start, incident.end, open_until)
        if interval is not None:
            clipped.append(interval)
    return OutageSet(merge_intervals(clipped))


def classify(
    availability: float, band_high_min: Decimal = Decimal(1), band_average_min: Decimal = Decimal("0.995")
) -> Band:
    a = as_fraction(availability)
    if a >= band_high_min:
        return Band.HIGH
    if a >= band_average_min:
        return Band.AVERAGE
    return Band.LOW


def compute_availability(
    window: ObservationWindow,
    outages: OutageSet,
    band_high_min: Decimal = Decimal(1),
    band_average_min: Decimal = Decimal("0.995"),
) -> AvailabilityResult:
    total = window.length
    downtime = outages.downtime
    if downtime > total:
        raise AvailabilityError("downtime {} exceeds the window length {}".format(downtime, total))

    # int / int is correctly rounded
    t_h = total // timedelta(microseconds=1)
    t_u = downtime // timedelta(microseconds=1)
    availability = (t_h - t_u) / t_h
    return AvailabilityResult(
        availability=availability,
        band=classify(availability, band_high_min, band_average_min),
        uptime=total - downtime,
        downtime=downtime,
    )
