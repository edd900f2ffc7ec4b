"""Utils for unit tests: fixture files and small trace builders."""
from datetime import datetime
from datetime import timedelta
from pathlib import Path
from typing import List
from typing import Optional
from typing import Tuple

from slicesla.base.timeutil import parse_ts
from slicesla.incident import IncidentClass
from slicesla.incident import IncidentRecord
from slicesla.lifecycle import IncidentOpened
from slicesla.lifecycle import IncidentResolved
from slicesla.lifecycle import LifecycleEvent
from slicesla.lifecycle import ServiceStart

FIXTURES = Path(__file__).resolve().parent / "fixtures"

START = parse_ts("2026-01-01T00:00:00Z")


def fixture(name: str) -> str:
    """Absolute path of a file under tests/fixtures."""
    return str(FIXTURES / name)


def at(hours: float = 0, start: datetime = START) -> datetime:
    """The instant `hours` after `start`."""
    return start + timedelta(hours=hours)


class TraceBuilder(object):
    """Collects lifecycle events in order, incident ids are numbered as they are opened."""

    def __init__(self, start: datetime = START) -> None:
        self.start = start
        self.events: List[LifecycleEvent] = [ServiceStart(at=start)]
        self._n = 0

    def incident(
        self,
        opened_h: float,
        closed_h: Optional[float],
        incident_class: IncidentClass = IncidentClass.MINOR,
        metrics: Tuple[Tuple[str, float], ...] = (),
    ) -> str:
        """Open (and resolve, unless `closed_h` is None) an incident, return its id."""
        self._n += 1
        incident_id = "inc-{}".format(self._n)
        record = IncidentRecord(incident_id, incident_class, at(opened_h, self.start), affected_metrics=metrics)
        self.events.append(IncidentOpened(at=record.start, incident=record))
        if closed_h is not None:
            self.events.append(IncidentResolved(at=at(closed_h, self.start), incident_id=incident_id))
        return incident_id

    def add(self, event: LifecycleEvent) -> "TraceBuilder":
        self.events.append(event)
        return self

    def build(self) -> List[LifecycleEvent]:
        """Events sorted by time, ties keep their insertion order."""
        return sorted(self.events, key=lambda e: e.at)
