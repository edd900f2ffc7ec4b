"""Comma-separated event traces.

One event per line under a fixed header; fields that do not apply stay empty:

    timestamp,event_kind,incident_id,incident_class,metric_name,observed_value
    2026-01-01T00:00:00Z,service_start,,,,
    2026-01-02T10:00:00Z,incident_opened,inc-1,major,latency,14.5
    2026-01-02T10:00:00Z,incident_opened,inc-1,major,bandwidth,80
    2026-01-02T14:00:00Z,incident_resolved,inc-1,,,
    2026-01-05T00:00:00Z,renegotiation_accepted,,,/qos/latency/threshold,15
    2026-01-31T00:00:00Z,lifetime_expired,,,,

Consecutive `incident_opened` lines with the same id and timestamp are one
incident affecting several metrics, consecutive `renegotiation_accepted` lines
with the same timestamp are one amendment (JSON-Pointer path in `metric_name`,
JSON value in `observed_value`). `period_closed` carries the measured
availability in `observed_value`.
"""
import csv
import io
import json
from datetime import datetime
from pathlib import Path
from typing import Iterable
from typing import List
from typing import Optional
from typing import Union

import yaml

from slicesla.base.timeutil import format_ts
from slicesla.base.timeutil import parse_ts
from slicesla.contract.model import Amendment
from slicesla.formats.error import TraceOrderError
from slicesla.formats.error import TraceParseError
from slicesla.incident import IncidentClass
from slicesla.incident import IncidentRecord
from slicesla.lifecycle import EVENT_TYPES
from slicesla.lifecycle import FinalizeRetention
from slicesla.lifecycle import IncidentOpened
from slicesla.lifecycle import IncidentResolved
from slicesla.lifecycle import LifecycleEvent
from slicesla.lifecycle import LifetimeExpired
from slicesla.lifecycle import PeriodClosed
from slicesla.lifecycle import RenegotiationAccepted
from slicesla.lifecycle import RenegotiationProposed
from slicesla.lifecycle import RenegotiationRejected
from slicesla.lifecycle import ServiceStart
from slicesla.lifecycle import TerminationRequested

HEADER = ("timestamp", "event_kind", "incident_id", "incident_class", "metric_name", "observed_value")

_KINDS = {cls.KIND: cls for cls in EVENT_TYPES}
_BARE = (
    ServiceStart,
    RenegotiationProposed,
    RenegotiationRejected,
    LifetimeExpired,
    TerminationRequested,
    FinalizeRetention,
)


def parse_trace(text: str) -> List[LifecycleEvent]:
    """Parse a trace into time-ordered events, errors carry the offending line."""
    reader = csv.reader(io.StringIO(text))
    events: List[LifecycleEvent] = []
    header_seen = False
    last_at: Optional[datetime] = None

    for row in reader:
        line = reader.line_num
        if not row or all(not cell.strip() for cell in row):
            continue
        cells = [cell.strip() for cell in row]
        if not header_seen:
            if tuple(cells) != HEADER:
                raise TraceParseError("expected header {}".format(",".join(HEADER)), line)
            header_seen = True
            continue
        if len(cells) != len(HEADER):
            raise TraceParseError("expected {} fields, got {}".format(len(HEADER), len(cells)), line)

        raw_ts, kind, incident_id, incident_class, metric, observed = cells
        try:
            at = parse_ts(raw_ts)
        except ValueError:
            raise TraceParseError("invalid timestamp {!r}".format(raw_ts), line)
        if last_at is not None and at < last_at:
            raise TraceOrderError("timestamp {} is earlier than {}".format(raw_ts, format_ts(last_at)), line)
        last_at = at

        cls = _KINDS.get(kind)
        if cls is None:
            raise TraceParseError("unknown event kind {!r}".format(kind), line)
        previous = events[-1] if events else None

        if cls is IncidentOpened:
            if not incident_id:
                raise TraceParseError("incident_opened needs an incident id", line)
            try:
                klass = IncidentClass(incident_class)
            except ValueError:
                raise TraceParseError("unknown incident class {!r}".format(incident_class), line)
            affected = ((metric, _observed(observed, line)),) if metric else ()
            if (
                isinstance(previous, IncidentOpened)
                and previous.at == at
                and previous.incident.id == incident_id
                and previous.incident.incident_class is klass
            ):
                merged = previous.incident.affected_metrics + affected
                record = IncidentRecord(incident_id, klass, at, affected_metrics=merged)
                events[-1] = IncidentOpened(at=at, incident=record)
            else:
                record = IncidentRecord(incident_id, klass, at, affected_metrics=affected)
                events.append(IncidentOpened(at=at, incident=record))

        elif cls is IncidentResolved:
            if not incident_id:
                raise TraceParseError("incident_resolved needs an incident id", line)
            events.append(IncidentResolved(at=at, incident_id=incident_id))

        elif cls is RenegotiationAccepted:
            if not metric:
                raise TraceParseError("renegotiation_accepted needs a term path in metric_name", line)
            try:
                value = yaml.safe_load(observed) if observed else None
            except yaml.YAMLError:
                raise TraceParseError("invalid value {!r}".format(observed), line)
            change = ((metric, value),)
            if isinstance(previous, RenegotiationAccepted) and previous.at == at:
                amendment = previous.amendment
                events[-1] = RenegotiationAccepted(
                    at=at, amendment=Amendment(effective_time=at, changes=amendment.changes + change)
                )
            else:
                events.append(RenegotiationAccepted(at=at, amendment=Amendment(effective_time=at, changes=change)))

        elif cls is PeriodClosed:
            availability = _observed(observed, line)
            if not 0 <= availability <= 1:
                raise TraceParseError("availability {} outside [0, 1]".format(observed), line)
            events.append(PeriodClosed(at=at, availability=availability))

        else:
            events.append(cls(at=at))

    if not header_seen:
        raise TraceParseError("missing header", 1)
    return events


def _observed(value: str, line: int) -> float:
    try:
        return float(value)
    except ValueError:
        raise TraceParseError("invalid observed value {!r}".format(value), line)


def load_trace(path: Union[str, Path]) -> List[LifecycleEvent]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as error:
        raise TraceParseError("{}: {}".format(path, error.strerror or error))
    return parse_trace(text)


def _rows(event: LifecycleEvent) -> List[List[str]]:
    ts = format_ts(event.at)
    if isinstance(event, IncidentOpened):
        incident = event.incident
        if not incident.affected_metrics:
            return [[ts, event.KIND, incident.id, incident.incident_class.value, "", ""]]
        return [
            [ts, event.KIND, incident.id, incident.incident_class.value, name, repr(float(value))]
            for name, value in incident.affected_metrics
        ]
    if isinstance(event, IncidentResolved):
        return [[ts, event.KIND, event.incident_id, "", "", ""]]
    if isinstance(event, RenegotiationAccepted):
        return [[ts, event.KIND, "", "", path, json.dumps(value)] for path, value in event.amendment.changes]
    if isinstance(event, PeriodClosed):
        return [[ts, event.KIND, "", "", "", repr(float(event.availability))]]
    if isinstance(event, _BARE):
        return [[ts, event.KIND, "", "", "", ""]]
    raise TypeError("not a lifecycle event: {!r}".format(event))


def emit_trace(events: Iterable[LifecycleEvent]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(HEADER)
    for event in events:
        writer.writerows(_rows(event))
    return buf.getvalue()


def write_trace(events: Iterable[LifecycleEvent], path: Union[str, Path]) -> None:
    Path(path).write_text(emit_trace(events), encoding="utf-8")
