"""Incident taxonomy shared by the lifecycle engine, availability and the simulator."""
from dataclasses import dataclass
from dataclasses import replace
from datetime import datetime
from enum import Enum
from typing import Any
from typing import Dict
from typing import Optional
from typing import Tuple

from slicesla.base.timeutil import format_ts
from slicesla.base.timeutil import parse_ts


class IncidentClass(str, Enum):
    MINOR = "minor"
    MAJOR = "major"
    CRITICAL = "critical"

    @property
    def severe(self) -> bool:
        """Major and critical incidents are tracked long-term and open renegotiation."""
        return self is not IncidentClass.MINOR


@dataclass(frozen=True)
class IncidentRecord:
    """A timestamped incident, `end` is None while the incident is open."""

    id: str
    incident_class: IncidentClass
    start: datetime
    end: Optional[datetime] = None
    affected_metrics: Tuple[Tuple[str, float], ...] = ()
    resolution_note: str = ""

    @property
    def is_open(self) -> bool:
        return self.end is None

    @property
    def service_affecting(self) -> bool:
        return bool(self.affected_metrics)

    def resolved(self, end: datetime, note: str = "") -> "IncidentRecord":
        return replace(self, end=end, resolution_note=note or self.resolution_note)

    def to_document(self) -> Dict[str, Any]:
        return {
            "id": self.id,
            "class": self.incident_class.value,
            "start": format_ts(self.start),
            "end": format_ts(self.end) if self.end else None,
            "affected_metrics": [[name, value] for name, value in self.affected_metrics],
            "resolution_note": self.resolution_note,
        }

    @classmethod
    def from_document(cls, doc: Dict[str, Any]) -> "IncidentRecord":
        return cls(
            id=doc["id"],
            incident_class=IncidentClass(doc["class"]),
            start=parse_ts(doc["start"]),
            end=parse_ts(doc["end"]) if doc.get("end") else None,
            affected_metrics=tuple((name, float(value)) for name, value in doc.get("affected_metrics", [])),
            resolution_note=doc.get("resolution_note", ""),
        )
