import random
from datetime import timedelta
from decimal import Decimal

import pytest

from slicesla.availability import AvailabilityError
from slicesla.availability import Band
from slicesla.availability import ObservationWindow
from slicesla.availability import OutageSet
from slicesla.availability import classify
from slicesla.availability import compute_availability
from slicesla.availability import merge_intervals
from slicesla.availability import normalize_outages
from slicesla.incident import IncidentClass
from slicesla.incident import IncidentRecord
from tests.utils import START
from tests.utils import at

MONTH = ObservationWindow(START, at(720))
DEGRADED = (("latency", 20.0),)


def _incident(opened_h, closed_h, incident_class=IncidentClass.MINOR, metrics=DEGRADED, incident_id="inc"):
    return IncidentRecord(
        incident_id,
        incident_class,
        at(opened_h),
        end=None if closed_h is None else at(closed_h),
        affected_metrics=metrics,
    )


def _availability(*incidents):
    return compute_availability(MONTH, normalize_outages(incidents, MONTH))


def test_reference_availabilities():
    result = _availability()
    assert result.availability == 1.0
    assert result.band is Band.HIGH
    assert result.downtime == timedelta(0)
    assert result.uptime == timedelta(hours=720)

    result = _availability(_incident(10, 13.6))
    assert result.availability == pytest.approx(0.995, abs=1e-12)
    assert result.band is Band.AVERAGE

    result = _availability(_incident(10, 24.4))
    assert result.availability == pytest.approx(0.98, abs=1e-12)
    assert result.band is Band.LOW
    assert result.percent == pytest.approx(98.0)


def test_classify():
    assert classify(1.0) is Band.HIGH
    assert classify(0.9999) is Band.AVERAGE
    assert classify(0.995) is Band.AVERAGE
    assert classify(0.9949) is Band.LOW
    assert classify(0.999, band_high_min=Decimal("0.999")) is Band.HIGH
    assert classify(0.99, band_average_min=Decimal("0.99")) is Band.AVERAGE


def test_overlapping_outages_are_merged():
    outages = normalize_outages([_incident(1, 2, incident_id="a"), _incident(1.5, 3, incident_id="b")], MONTH)
    assert outages.intervals == ((at(1), at(3)),)
    assert outages.downtime == timedelta(hours=2)

    result = _availability(_incident(0, 2, incident_id="a"), _incident(1, 3, incident_id="b"))
    assert result.downtime == timedelta(hours=3)

    # touching intervals merge too
    outages = normalize_outages([_incident(0, 2, incident_id="a"), _incident(2, 4, incident_id="b")], MONTH)
    assert outages.intervals == ((at(0), at(4)),)

    # an outage inside another one adds nothing
    result = _availability(_incident(0, 10, incident_id="a"), _incident(2, 3, incident_id="b"))
    assert result.downtime == timedelta(hours=10)


def test_outages_are_clipped_to_the_window():
    window = ObservationWindow(at(24), at(48))
    outages = normalize_outages([_incident(20, 26), _incident(47, 50, incident_id="b")], window)
    assert outages.intervals == ((at(24), at(26)), (at(47), at(48)))
    assert outages.downtime == timedelta(hours=3)

    # outside the window
    assert len(normalize_outages([_incident(0, 1)], window)) == 0

    # open incidents run to the window end
    outages = normalize_outages([_incident(40, None)], window)
    assert outages.intervals == ((at(40), at(48)),)

    # or up to the end of the contract
    assert normalize_outages([_incident(40, None)], window, open_until=at(42)).intervals == ((at(40), at(42)),)
    assert normalize_outages([_incident(40, None)], window, open_until=at(60)).intervals == ((at(40), at(48)),)
    assert len(normalize_outages([_incident(40, None)], window, open_until=at(40))) == 0
    assert normalize_outages([_incident(40, 41)], window, open_until=at(40)).downtime == timedelta(hours=1)


def test_only_service_affecting_incidents_count():
    outages = normalize_outages([_incident(0, 5, metrics=())], MONTH)
    assert len(outages) == 0

    incidents = [
        _incident(0, 1, IncidentClass.MINOR, incident_id="a"),
        _incident(2, 4, IncidentClass.MAJOR, incident_id="b"),
    ]
    outages = normalize_outages(incidents, MONTH, counted_classes={IncidentClass.MAJOR, IncidentClass.CRITICAL})
    assert outages.downtime == timedelta(hours=2)


def test_window_errors():
    with pytest.raises(AvailabilityError):
        ObservationWindow(at(1), at(1))
    with pytest.raises(AvailabilityError):
        ObservationWindow(at(2), at(1))
    with pytest.raises(AvailabilityError):
        compute_availability(ObservationWindow(at(0), at(1)), OutageSet(((at(0), at(2)),)))

    window = ObservationWindow(at(0), at(1))
    assert window.length == timedelta(hours=1)
    assert window.contains(at(0))
    assert not window.contains(at(1))


def test_merge_intervals_properties():
    rng = random.Random(11)
    for _ in range(300):
        intervals = []
        for _ in range(rng.randint(0, 8)):
            start = rng.randint(0, 100)
            intervals.append((start, start + rng.randint(1, 20)))
        merged = merge_intervals([(at(s), at(e)) for s, e in intervals])

        for (_, end), (start, _) in zip(merged, merged[1:]):
            assert end < start
        covered = {h for s, e in intervals for h in range(s, e)}
        assert sum((e - s for s, e in merged), timedelta(0)) == timedelta(hours=len(covered))


def test_normalize_outages_properties():
    rng = random.Random(13)
    for _ in range(200):
        incidents = [
            _incident(s, s + rng.randint(1, 30), incident_id="inc-{}".format(i))
            for i, s in enumerate(rng.randint(0, 700) for _ in range(rng.randint(0, 6)))
        ]
        outages = normalize_outages(incidents, MONTH)
        shuffled = list(incidents)
        rng.shuffle(shuffled)
        assert normalize_outages(shuffled, MONTH) == outages

        # merging the result again changes nothing
        assert merge_intervals(outages.intervals) == outages.intervals

        # one more outage never raises the availability
        extra = _incident(rng.randint(0, 700), 710, incident_id="extra")
        before = compute_availability(MONTH, outages).availability
        after = compute_availability(MONTH, normalize_outages(incidents + [extra], MONTH)).availability
        assert after <= before


def test_availability_minute_grid():
    rng = random.Random(12)
    for _ in range(50):
        incidents = []
        for i in range(rng.randint(0, 6)):
            start = rng.randint(0, 720 * 60 - 1)
            length = rng.randint(1, 600)
            incidents.append(
                IncidentRecord(
                    "inc-{}".format(i),
                    IncidentClass.MAJOR,
                    START + timedelta(minutes=start),
                    end=START + timedelta(minutes=start + length),
                    affected_metrics=DEGRADED,
                )
            )
        result = compute_availability(MONTH, normalize_outages(incidents, MONTH))

        down = set()
        for incident in incidents:
            first = int((incident.start - START).total_seconds() // 60)
            last = min(int((incident.end - START).total_seconds() // 60), 720 * 60)
            down.update(range(first, last))
        grid = 1 - len(down) / (720 * 60)
        assert abs(result.availability - grid) <= 1 / (720 * 60)
        assert 0 <= result.availability <= 1
