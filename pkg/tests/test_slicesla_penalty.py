import random
from decimal import Decimal

import pytest

from slicesla.penalty import ALL_COMPONENTS
from slicesla.penalty import BreakpointSchedule
from slicesla.penalty import Component
from slicesla.penalty import ImportanceProfile
from slicesla.penalty import LinearScheduleParams
from slicesla.penalty import PenaltyError
from slicesla.penalty import PenaltyInputs
from slicesla.penalty import ScheduleError
from slicesla.penalty import ScheduleKind
from slicesla.penalty import ScheduleSpec
from slicesla.penalty import SubcontractTerm
from slicesla.penalty import compile_linear_schedule
from slicesla.penalty import evaluate_schedule
from slicesla.penalty import linear_reference_schedule
from slicesla.penalty import nonlinear_reference_schedule
from slicesla.penalty import penalty_count
from slicesla.penalty import penalty_duration
from slicesla.penalty import penalty_importance
from slicesla.penalty import penalty_importance_multi
from slicesla.penalty import penalty_subcontracts
from slicesla.penalty import penalty_total
from slicesla.penalty import sample_curve
from slicesla.penalty.schedule import as_fraction

D = Decimal
INSTANCES = 1000


def _percent(schedule, availability_percent):
    return evaluate_schedule(schedule, D(availability_percent) / 100).penalty_percent


def test_linear_reference_curve():
    schedule = linear_reference_schedule()
    assert schedule.violations() == []
    assert _percent(schedule, "99.6") == 5
    assert _percent(schedule, "99.4") == 10
    assert _percent(schedule, "99.2") == 15
    assert _percent(schedule, "99.0") == 20
    assert _percent(schedule, "98.8") == 25
    assert _percent(schedule, "98.6") == 30
    assert _percent(schedule, "98.4") == 35

    # between breakpoints the lower level applies until the next threshold is crossed
    assert _percent(schedule, "99.9") == 0
    assert _percent(schedule, "99.8") == 0
    assert _percent(schedule, "99.7") == 0
    assert _percent(schedule, "99.5") == 5
    assert _percent(schedule, "100") == 0


def test_nonlinear_reference_curve():
    schedule = nonlinear_reference_schedule()
    assert schedule.violations() == []
    expected = [
        ("99.6", 5),
        ("99.5", 7),
        ("99.4", 9),
        ("99.3", 11),
        ("99.2", 13),
        ("99.1", 15),
        ("99.0", 25),
        ("98.9", 30),
        ("98.8", 35),
        ("98.7", 40),
        ("98.6", 45),
        ("98.5", 50),
        ("98.4", 55),
    ]
    assert [(a * 100, p) for a, p in schedule.points] == [(D(a), D(p)) for a, p in expected]
    for a, p in expected:
        assert _percent(schedule, a) == p


def test_linear_schedule_closed_form():
    rng = random.Random(7)
    for _ in range(200):
        accepted = D(rng.randint(990, 1000)) / 1000
        step = D(rng.randint(1, 5)) / 1000
        terminated = accepted - step * rng.randint(1, 8) - D(rng.randint(0, 9)) / 10000
        increment = D(rng.randint(1, 10))
        schedule = compile_linear_schedule(LinearScheduleParams(accepted, terminated, step, increment))
        assert schedule.violations() == []
        for m in range(1, len(schedule.points) + 1):
            assert evaluate_schedule(schedule, accepted - m * step).penalty_percent == m * increment
        assert schedule.points[-1][0] >= terminated


def test_schedule_is_monotone():
    for schedule in (linear_reference_schedule(), nonlinear_reference_schedule()):
        for interpolate in (False, True):
            previous = D(0)
            a = D(1)
            while a >= D("0.98"):
                p = evaluate_schedule(schedule, a, interpolate=interpolate).penalty_percent
                assert p >= previous
                previous = p
                a -= D("0.0001")


def test_schedule_terminate_flag():
    schedule = linear_reference_schedule()
    assert not evaluate_schedule(schedule, D("0.985")).terminate
    assert evaluate_schedule(schedule, D("0.984")).terminate
    assert evaluate_schedule(schedule, D("0.95")).terminate
    # below the last breakpoint the maximum level holds
    assert evaluate_schedule(schedule, D("0.95")).penalty_percent == 35


def test_schedule_float_availability():
    # 1 - 31104/2592000 is not exactly 0.988 in binary floating point
    a = (2592000 - 31104) / 2592000
    assert as_fraction(a) == D("0.988")
    assert evaluate_schedule(nonlinear_reference_schedule(), a).penalty_percent == 35


def test_schedule_interpolation():
    schedule = linear_reference_schedule()
    assert evaluate_schedule(schedule, D("0.997"), interpolate=True).penalty_percent == D("2.5")
    assert evaluate_schedule(schedule, D("0.995"), interpolate=True).penalty_percent == D("7.5")
    assert evaluate_schedule(schedule, D("0.998"), interpolate=True).penalty_percent == 0
    assert evaluate_schedule(schedule, D("0.97"), interpolate=True).penalty_percent == 35


def test_sample_curve():
    samples = sample_curve(linear_reference_schedule(), D("0.001"))
    assert samples[0] == (D(1), D(0))
    assert samples[-1] == (D("0.984"), D(35))
    assert len(samples) == 17
    assert (D("0.996"), D(5)) in samples
    assert (D("0.994"), D(10)) in samples

    with pytest.raises(ScheduleError):
        sample_curve(linear_reference_schedule(), 0)


def test_schedule_errors():
    with pytest.raises(ScheduleError):
        compile_linear_schedule(LinearScheduleParams(D("0.998"), D("0.984"), D(0), D(5)))
    with pytest.raises(ScheduleError):
        compile_linear_schedule(LinearScheduleParams(D("0.984"), D("0.998"), D("0.002"), D(5)))

    broken = BreakpointSchedule(
        points=((D("0.990"), D(5)), (D("0.995"), D(3))), accepted=D("0.998"), terminated=D("0.984")
    )
    assert len(broken.violations()) == 2

    with pytest.raises(ScheduleError):
        ScheduleSpec(kind=ScheduleKind.NONLINEAR_REFERENCE).compile(D("0.999"), D("0.984"))
    assert ScheduleSpec(kind=ScheduleKind.NONLINEAR_REFERENCE).compile(D("0.998"), D("0.984")).points == (
        nonlinear_reference_schedule().points
    )


def test_penalty_count():
    assert penalty_count(100, 0) == 0
    assert penalty_count(100, 3) == 300
    with pytest.raises(PenaltyError):
        penalty_count(100, -1)

    rng = random.Random(1)
    for _ in range(INSTANCES):
        V = D(rng.randint(0, 100000)) / 100
        n = rng.randint(0, 50)
        total = D(0)
        for _ in range(n):
            total += V
        assert penalty_count(V, n) == total


def test_penalty_duration():
    assert penalty_duration(2, 0) == 0
    assert penalty_duration(2, 30) == 60

    rng = random.Random(2)
    for _ in range(INSTANCES):
        w = rng.randint(0, 10000) / 100
        tenths = rng.randint(0, 2000)
        expected = 0.0
        for _ in range(tenths):
            expected += w * 0.1
        assert float(penalty_duration(w, D(tenths) / 10)) == pytest.approx(expected, rel=1e-9, abs=1e-9)


def test_penalty_subcontracts():
    assert penalty_subcontracts([]) == 0
    assert penalty_subcontracts([(2, 10), (3, 5)]) == 35
    assert penalty_subcontracts([(2, 30)]) == penalty_duration(2, 30)

    rng = random.Random(3)
    for _ in range(INSTANCES):
        terms = [(rng.randint(0, 1000) / 10, rng.randint(0, 1000) / 10) for _ in range(rng.randint(0, 6))]
        expected = 0.0
        for w_i, t_i in terms:
            expected += w_i * t_i
        assert float(penalty_subcontracts(terms)) == pytest.approx(expected, rel=1e-9, abs=1e-9)


def _random_profile(rng):
    times = sorted(rng.sample(range(0, 200), rng.randint(0, 5)))
    return ImportanceProfile(
        breakpoints=tuple((D(t), D(rng.choice((25, 50, 75, 100))) / 100) for t in times),
        default=D(rng.choice((25, 50, 100))) / 100,
    )


def _importance_oracle(profile, tenths):
    value = float(profile.default)
    for time, v in profile.breakpoints:
        if int(time * 10) <= tenths:
            value = float(v)
    return value


def _importance_sum_oracle(w, start, duration, step, profile, bound):
    """Per-sample loop over times counted in exact tenths of a unit."""
    t, end, step, bound = int(start * 10), int((start + duration) * 10), int(step * 10), int(bound * 10)
    total = 0.0
    while t < end:
        if t > bound:
            break
        total += float(w) * _importance_oracle(profile, t) * min(step, end - t) / 10
        t += step
    return total


def test_penalty_importance_examples():
    assert penalty_importance(2, 0, 30, 1, ImportanceProfile(), 100) == 60
    assert penalty_importance(2, 0, 30, 1, ImportanceProfile(), 100) == penalty_duration(2, 30)
    assert penalty_importance(2, 0, 30, 1, ImportanceProfile.constant(0.5), 100) == 30
    assert penalty_importance(2, 0, 0, 1, None, 100) == 0

    # piecewise-constant importance aligned with the step: halving the step changes nothing
    profile = ImportanceProfile(breakpoints=((D(0), D(1)), (D(10), D("0.5")), (D(20), D(1))))
    assert penalty_importance(2, 0, 30, 1, profile, 100) == 50
    assert penalty_importance(2, 0, 30, D("0.5"), profile, 100) == 50

    # partial last step
    assert penalty_importance(2, 0, D("2.5"), 1, None, 100) == 5

    # samples past the period bound are skipped
    assert penalty_importance(2, 0, 30, 1, None, D("9.5")) == 20

    with pytest.raises(PenaltyError):
        penalty_importance(2, 0, 30, 0, None, 100)


def test_importance_profile():
    daily = ImportanceProfile(breakpoints=((D(0), D("0.5")), (D(8), D(1)), (D(20), D("0.5"))), period=D(24))
    assert daily.value_at(3) == D("0.5")
    assert daily.value_at(8) == 1
    assert daily.value_at(32) == 1
    assert daily.value_at(-1) == D("0.5")
    assert daily.violations() == []

    bounded = ImportanceProfile(breakpoints=((D(5), D("0.2")),), end=D(10), default=D("0.8"))
    assert bounded.value_at(0) == D("0.8")
    assert bounded.value_at(5) == D("0.2")
    assert bounded.value_at(10) == D("0.8")

    assert ImportanceProfile(breakpoints=((D(0), D(2)),)).violations()
    assert ImportanceProfile(breakpoints=((D(5), D(1)), (D(1), D(1)))).violations()


def test_penalty_importance_oracle():
    rng = random.Random(4)
    for _ in range(INSTANCES):
        w = D(rng.randint(0, 10000)) / 100
        start = D(rng.randint(0, 1000)) / 10
        duration = D(rng.randint(1, 500)) / 10
        step = D(rng.randint(1, 50)) / 10
        bound = D(rng.randint(0, 2000)) / 10
        profile = _random_profile(rng)

        result = penalty_importance(w, start, duration, step, profile, bound)
        expected = _importance_sum_oracle(w, start, duration, step, profile, bound)
        assert result >= 0
        assert float(result) == pytest.approx(expected, rel=1e-9, abs=1e-9)

        # with I = 1 and the bound past the outage it is the duration penalty, exactly
        assert penalty_importance(w, start, duration, step, None, start + duration) == penalty_duration(w, duration)


def _term(rng, sub_id):
    return SubcontractTerm(
        id=sub_id,
        unit_price=D(rng.randint(0, 1000)) / 10,
        importance=_random_profile(rng),
        outage_start=D(rng.randint(0, 1000)) / 10,
        outage_length=D(rng.randint(1, 300)) / 10,
        sampling_step=D(rng.randint(1, 30)) / 10,
    )


def test_penalty_importance_multi_oracle():
    assert penalty_importance_multi([], 100) == 0

    rng = random.Random(5)
    for _ in range(INSTANCES):
        terms = [_term(rng, "sub-{}".format(i)) for i in range(rng.randint(1, 4))]
        bounds = {t.id: D(rng.randint(0, 2000)) / 10 for t in terms}

        expected = 0.0
        for t in terms:
            expected += _importance_sum_oracle(
                t.unit_price, t.outage_start, t.outage_length, t.sampling_step, t.importance, bounds[t.id]
            )
        assert float(penalty_importance_multi(terms, bounds)) == pytest.approx(expected, rel=1e-9, abs=1e-9)

        # a single subcontract is the single-service importance penalty, exactly
        t = terms[0]
        single = penalty_importance(
            t.unit_price, t.outage_start, t.outage_length, t.sampling_step, t.importance, bounds[t.id]
        )
        assert penalty_importance_multi([t], bounds) == single
        assert penalty_importance_multi([t] * 3, bounds[t.id]) == 3 * single


def test_penalty_homogeneity():
    rng = random.Random(6)
    for _ in range(100):
        w = D(rng.randint(1, 1000)) / 10
        profile = _random_profile(rng)
        assert penalty_count(2 * w, 7) == 2 * penalty_count(w, 7)
        assert penalty_duration(2 * w, 13) == 2 * penalty_duration(w, 13)
        assert penalty_importance(2 * w, 3, 40, D("0.7"), profile, 100) == 2 * penalty_importance(
            w, 3, 40, D("0.7"), profile, 100
        )


def _paper_inputs():
    return PenaltyInputs(
        per_breach=D(100),
        breaches=3,
        per_unit_time=D(2),
        duration=D(30),
        subcontract_durations=((D(2), D(10)), (D(3), D(5))),
        outages=((D(0), D(30)),),
        sampling_step=D(1),
        bound=D(100),
        subcontract_terms=(SubcontractTerm("s1", D(2), ImportanceProfile(), D(0), D(30), D(1)),),
        subcontract_bounds={"s1": D(100)},
    )


def test_penalty_total():
    breakdown = penalty_total(_paper_inputs())
    assert breakdown.count == 300
    assert breakdown.duration == 60
    assert breakdown.subcontracts == 35
    assert breakdown.importance == 60
    assert breakdown.subcontract_importance == 60
    assert breakdown.total == 515
    assert breakdown.disabled == frozenset()

    assert penalty_total(PenaltyInputs()).total == 0

    masked = penalty_total(_paper_inputs(), mask={Component.COUNT})
    assert masked.total == 300
    assert masked.disabled == ALL_COMPONENTS - {Component.COUNT}
    assert masked.component(Component.DURATION) == 0

    # the masks accept the component names too
    masked = penalty_total(_paper_inputs(), mask=["duration", "subcontracts"], schedule_percent=5)
    assert masked.total == 95
    assert masked.schedule_percent == 5
