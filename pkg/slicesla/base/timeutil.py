"""UTC timestamp and duration helpers."""
import re
from datetime import datetime
from datetime import timedelta
from datetime import timezone
from typing import Union

TIMESTAMP_FMT = "%Y-%m-%dT%H:%M:%SZ"

_DURATION_RE = re.compile(r"^\s*(?P<value>\d+(?:\.\d+)?)\s*(?P<unit>us|ms|s|m|h|d|w)?\s*$")
_DURATION_UNITS = {
    "us": timedelta(microseconds=1),
    "ms": timedelta(milliseconds=1),
    "s": timedelta(seconds=1),
    "m": timedelta(minutes=1),
    "h": timedelta(hours=1),
    "d": timedelta(days=1),
    "w": timedelta(weeks=1),
}


def parse_ts(value: Union[str, datetime]) -> datetime:
    """Parse an ISO-8601 UTC timestamp (`2026-01-01T00:00:00Z`) into an aware datetime."""
    if isinstance(value, datetime):
        if value.tzinfo is None:
            return value.replace(tzinfo=timezone.utc)
        return value.astimezone(timezone.utc)

    try:
        dt = datetime.strptime(value, TIMESTAMP_FMT)
    except ValueError:
        # Also accept offsets and fractional seconds (`+00:00`, `.5Z`)
        raw = value[:-1] + "+00:00" if value.endswith("Z") else value
        dt = datetime.fromisoformat(raw)
        if dt.tzinfo is None:
            raise ValueError("timestamp {!r} has no timezone".format(value))
        return dt.astimezone(timezone.utc)

    return dt.replace(tzinfo=timezone.utc)


def format_ts(dt: datetime) -> str:
    """Format an aware datetime as `YYYY-MM-DDTHH:MM:SSZ` (sub-second part is dropped)."""
    return dt.astimezone(timezone.utc).strftime(TIMESTAMP_FMT)


def parse_duration(value: Union[str, int, float, timedelta]) -> timedelta:
    """Parse a duration given in seconds or as a suffixed string (`90s`, `15m`, `720h`, `30d`)."""
    if isinstance(value, timedelta):
        return value
    if isinstance(value, bool):
        raise ValueError("invalid duration: {!r}".format(value))
    if isinstance(value, (int, float)):
        return timedelta(seconds=value)

    m = _DURATION_RE.match(value)
    if not m:
        raise ValueError("invalid duration: {!r}".format(value))

    unit = _DURATION_UNITS[m.group("unit") or "s"]
    return unit * float(m.group("value"))


def format_duration(td: timedelta) -> str:
    """Format a duration with the largest unit that divides it."""
    seconds = td.total_seconds()
    for suffix, size in (("d", 86400), ("h", 3600), ("m", 60)):
        if seconds and seconds % size == 0:
            return "{}{}".format(int(seconds // size), suffix)
    if seconds == int(seconds):
        return "{}s".format(int(seconds))
    return "{}s".format(seconds)


def hours(td: timedelta) -> float:
    return td.total_seconds() / 3600
