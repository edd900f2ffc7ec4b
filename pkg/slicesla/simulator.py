"""Seeded incident traces and Monte Carlo penalty exposure.

Incidents of each class arrive as a Poisson process (exponential inter-arrival
times) with exponential outage durations. Classes are drawn in the order minor,
major, critical from a single `numpy.random.Generator`, so a seed fully
determines a trace. Run `i` of a study uses a seed derived from (seed, i).
"""
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from dataclasses import field
from dataclasses import replace
from datetime import datetime
from datetime import timedelta
from datetime import timezone
from decimal import Decimal
from typing import Dict
from typing import List
from typing import Optional
from typing import Tuple

import numpy as np

from slicesla.base.error import SliceSlaError
from slicesla.base.money import ZERO
from slicesla.contract.model import SlaContract
from slicesla.evaluation import evaluate_trace
from slicesla.incident import IncidentClass
from slicesla.incident import IncidentRecord
from slicesla.lifecycle import IncidentOpened
from slicesla.lifecycle import IncidentResolved
from slicesla.lifecycle import LifecycleEvent
from slicesla.lifecycle import LifetimeExpired
from slicesla.lifecycle import ServiceStart
from slicesla.penalty.formulas import Component

logger = logging.getLogger(__name__)

DEFAULT_START = datetime(2026, 1, 1, tzinfo=timezone.utc)

_RANK = {ServiceStart: 0, IncidentResolved: 1, IncidentOpened: 2, LifetimeExpired: 3}


class ScenarioError(SliceSlaError):
    """Error raised for an invalid scenario."""


@dataclass(frozen=True)
class DegradationRule:
    """With `probability`, an incident reports `metric` at the `observed` value."""

    metric: str
    observed: float
    probability: float = 1.0


@dataclass(frozen=True)
class ClassProfile:
    rate: float = 0.0  # incidents per hour
    mean_duration: timedelta = timedelta(hours=1)
    degradations: Tuple[DegradationRule, ...] = ()


@dataclass(frozen=True)
class ScenarioConfig:
    horizon: timedelta
    classes: Dict[IncidentClass, ClassProfile] = field(default_factory=dict)
    seed: int = 0
    start: Optional[datetime] = None
    name: str = ""

    def profile(self, incident_class: IncidentClass) -> ClassProfile:
        return self.classes.get(incident_class, ClassProfile())

    def violations(self) -> List[str]:
        errors = []
        if self.horizon <= timedelta(0):
            errors.append("horizon must be positive")
        for c, p in self.classes.items():
            if p.rate < 0:
                errors.append("{}: rate must be nonnegative".format(c.value))
            if p.mean_duration <= timedelta(0):
                errors.append("{}: mean duration must be positive".format(c.value))
            for rule in p.degradations:
                if not 0 <= rule.probability <= 1:
                    errors.append("{}: probability of {} outside [0, 1]".format(c.value, rule.metric))
        if not 0 <= self.seed < 2 ** 64:
            errors.append("seed must be a 64-bit unsigned integer")
        return errors


def derive_seed(seed: int, index: int) -> int:
    """Seed of run `index`, mixed from the study seed."""
    return int(np.random.SeedSequence(seed, spawn_key=(index,)).generate_state(1, dtype=np.uint64)[0])


def generate_trace(config: ScenarioConfig) -> List[LifecycleEvent]:
    """Time-ordered trace from service start to the end of the horizon."""
    errors = config.violations()
    if errors:
        raise ScenarioError("; ".join(errors))

    rng = np.random.default_rng(config.seed)
    start = config.start or DEFAULT_START
    horizon_h = config.horizon.total_seconds() / 3600
    horizon_s = int(config.horizon.total_seconds())
    end = start + config.horizon

    keyed: List[Tuple[datetime, int, int, LifecycleEvent]] = [
        (start, _RANK[ServiceStart], 0, ServiceStart(at=start))
    ]
    seq = 1
    for incident_class in IncidentClass:
        profile = config.profile(incident_class)
        if profile.rate <= 0:
            continue
        mean_h = profile.mean_duration.total_seconds() / 3600
        t = 0.0
        n = 0
        while True:
            t += rng.exponential(1.0 / profile.rate)
            if t >= horizon_h:
                break
            duration = rng.exponential(mean_h)
            affected = tuple(
                (rule.metric, rule.observed) for rule in profile.degradations if rng.random() < rule.probability
            )
            n += 1

            opened_s = min(int(math.floor(t * 3600)), horizon_s - 1)
            closed_s = min(max(int(math.floor((t + duration) * 3600)), opened_s + 1), horizon_s)
            opened = start + timedelta(seconds=opened_s)
            closed = start + timedelta(seconds=closed_s)
            record = IncidentRecord(
                id="{}-{:04d}".format(incident_class.value, n),
                incident_class=incident_class,
                start=opened,
                affected_metrics=affected,
            )
            keyed.append((opened, _RANK[IncidentOpened], seq, IncidentOpened(at=opened, incident=record)))
            resolved = IncidentResolved(at=closed, incident_id=record.id)
            keyed.append((closed, _RANK[IncidentResolved], seq + 1, resolved))
            seq += 2

    keyed.append((end, _RANK[LifetimeExpired], seq, LifetimeExpired(at=end)))
    keyed.sort(key=lambda k: k[:3])
    return [k[3] for k in keyed]


@dataclass(frozen=True)
class RunResult:
    index: int
    seed: int
    availability: float
    penalty_total: Decimal
    components: Dict[Component, Decimal]
    schedule_percent: Decimal
    penalty_amount: Decimal
    net_position: Decimal
    terminated: bool
    incidents: int


@dataclass
class ExposureSummary:
    runs: int
    mean_penalty: Decimal
    p95_penalty: float
    termination_frequency: float
    mean_components: Dict[Component, Decimal] = field(default_factory=dict)
    mean_schedule_percent: Decimal = ZERO
    mean_penalty_amount: Decimal = ZERO
    mean_net_position: Decimal = ZERO
    currency: str = "EUR"
    seed: int = 0
    results: List[RunResult] = field(default_factory=list, repr=False)


def run_once(contract: SlaContract, config: ScenarioConfig, index: int) -> RunResult:
    seed = derive_seed(config.seed, index)
    trace = generate_trace(replace(config, seed=seed, start=config.start or contract.start_time))
    report = evaluate_trace(contract, trace)
    return RunResult(
        index=index,
        seed=seed,
        availability=report.availability.availability,
        penalty_total=report.penalties.total,
        components=report.penalties.as_dict(),
        schedule_percent=report.schedule_percent,
        penalty_amount=report.penalty_amount,
        net_position=report.net_position,
        terminated=report.early_terminated,
        incidents=sum(report.incident_counts.values()),
    )


def _run_star(args: Tuple[SlaContract, ScenarioConfig, int]) -> RunResult:
    return run_once(*args)


def summarize(results: List[RunResult], currency: str = "EUR", seed: int = 0) -> ExposureSummary:
    """Aggregate independent runs, the result does not depend on their order."""
    if not results:
        raise ScenarioError("no runs to summarize")
    results = sorted(results, key=lambda r: r.index)
    runs = len(results)

    def mean(values) -> Decimal:
        return sum(values, ZERO) / runs

    totals = np.array([float(r.penalty_total) for r in results])
    return ExposureSummary(
        runs=runs,
        mean_penalty=mean(r.penalty_total for r in results),
        p95_penalty=float(np.percentile(totals, 95)),
        termination_frequency=sum(1 for r in results if r.terminated) / runs,
        mean_components={c: mean(r.components[c] for r in results) for c in Component},
        mean_schedule_percent=mean(r.schedule_percent for r in results),
        mean_penalty_amount=mean(r.penalty_amount for r in results),
        mean_net_position=mean(r.net_position for r in results),
        currency=currency,
        seed=seed,
        results=results,
    )


def monte_carlo(contract: SlaContract, config: ScenarioConfig, runs: int, workers: int = 1) -> ExposureSummary:
    """Evaluate `runs` seeded traces against the contract and aggregate the penalty exposure."""
    if runs < 1:
        raise ScenarioError("runs must be positive, got {}".format(runs))
    errors = config.violations()
    if errors:
        raise ScenarioError("; ".join(errors))

    jobs = [(contract, config, i) for i in range(runs)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            results = list(executor.map(_run_star, jobs, chunksize=max(1, runs // (workers * 4))))
    else:
        results = [_run_star(job) for job in jobs]

    summary = summarize(results, contract.terms.economics.currency, config.seed)
    logger.info(
        "monte_carlo_done",
        extra={
            "contract": contract.id,
            "runs": runs,
            "mean_penalty": str(summary.mean_penalty),
            "termination_frequency": summary.termination_frequency,
        },
    )
    return summary


def expected_incidents(config: ScenarioConfig, incident_class: IncidentClass) -> float:
    """Expected number of incidents of the class over the horizon."""
    return config.profile(incident_class).rate * config.horizon.total_seconds() / 3600

