"""Contract validation, violations are returned as data."""
from dataclasses import dataclass
from typing import Iterable
from typing import List

from slicesla.contract import effective_terms_at
from slicesla.contract.catalog import QosCatalogBound
from slicesla.contract.error import ContractError
from slicesla.contract.model import Mode
from slicesla.contract.model import SlaContract
from slicesla.contract.model import Terms
from slicesla.economics import unresolved_references
from slicesla.penalty.error import ScheduleError


@dataclass(frozen=True)
class Violation:
    field: str
    message: str

    def __str__(self):
        return "{}: {}".format(self.field, self.message)


def validate_contract(contract: SlaContract, catalog: Iterable[QosCatalogBound] = ()) -> List[Violation]:
    """Return every broken invariant and catalog bound, an empty list means the contract is valid."""
    violations = []
    if not contract.start_time < contract.end_time:
        violations.append(Violation("lifetime", "start < end required"))

    base = _terms_violations(contract.terms)
    violations.extend(base)
    violations.extend(_catalog_violations(contract.terms, list(catalog)))

    for i, amendment in enumerate(contract.amendments):
        field = "amendments/{}".format(i)
        if contract.mode is Mode.STATIC and not amendment.renegotiated:
            violations.append(Violation(field, "amendments forbidden on static SLA"))
        if not contract.in_lifetime(amendment.effective_time):
            violations.append(Violation(field, "effective time outside the contract lifetime"))
            continue
        try:
            amended = effective_terms_at(contract, amendment.effective_time)
        except ContractError as error:
            violations.append(Violation(field, str(error)))
            continue
        for v in _terms_violations(amended):
            if v in base:
                continue
            violations.append(Violation("{}/{}".format(field, v.field), v.message))

    return violations


def _terms_violations(terms: Terms) -> List[Violation]:
    violations = []

    names = [s.name for s in terms.qos_specs]
    for name in sorted({n for n in names if names.count(n) > 1}):
        violations.append(Violation("qos/{}".format(name), "metric names must be unique"))
    for spec in terms.qos_specs:
        field = "qos/{}".format(spec.name)
        if not spec.unit:
            violations.append(Violation(field + "/unit", "unit must not be empty"))
        if spec.breached(spec.target):
            violations.append(
                Violation(
                    field + "/target",
                    "target {} does not satisfy threshold {} ({})".format(
                        spec.target, spec.violation_threshold, spec.direction.value
                    ),
                )
            )

    a = terms.availability
    if not 0 < a.agreed <= 1:
        violations.append(Violation("availability/agreed", "agreed must be in (0, 1]"))
    if not a.terminated < a.accepted:
        violations.append(Violation("availability/terminated", "terminated < accepted required"))
    if not a.accepted <= a.agreed:
        violations.append(Violation("availability/accepted", "accepted <= agreed required"))
    if not a.band_average_min < a.band_high_min <= 1:
        violations.append(Violation("availability/band_average_min", "band_average_min < band_high_min <= 1 required"))

    t = terms.tracking
    if t.window_length.total_seconds() <= 0:
        violations.append(Violation("tracking/window", "window length must be positive"))
    if t.max_major_plus_critical < 0:
        violations.append(Violation("tracking/max_major_plus_critical", "must be nonnegative"))

    p = terms.penalty
    if a.terminated < a.accepted:
        try:
            for message in terms.schedule().violations():
                violations.append(Violation("penalty/schedule", message))
        except ScheduleError as error:
            violations.append(Violation("penalty/schedule", str(error)))
    if p.per_breach < 0 or p.per_unit_time < 0:
        violations.append(Violation("penalty", "unit prices must be nonnegative"))
    if p.time_unit.total_seconds() <= 0:
        violations.append(Violation("penalty/time_unit", "time unit must be positive"))
    if p.sampling_step <= 0:
        violations.append(Violation("penalty/sampling_step", "sampling step must be positive"))
    for message in p.unresolved_references():
        violations.append(Violation("penalty", message))
    for name, profile in p.importance_profiles.items():
        for message in profile.violations():
            violations.append(Violation("penalty/importance_profiles/{}".format(name), message))
    seen_ids = set()
    for sub in p.subcontracts:
        field = "penalty/subcontracts/{}".format(sub.id)
        if sub.id in seen_ids:
            violations.append(Violation(field, "subcontract ids must be unique"))
        seen_ids.add(sub.id)
        if sub.sampling_step <= 0:
            violations.append(Violation(field, "sampling step must be positive"))
        if sub.unit_price < 0:
            violations.append(Violation(field, "unit price must be nonnegative"))
        for metric in sub.metrics:
            if terms.qos(metric) is None:
                violations.append(Violation(field, "unknown metric {!r}".format(metric)))

    e = terms.economics
    if e.price < 0 or e.slice_size < 0 or e.customer_size < 0:
        violations.append(Violation("economics", "price and sizes must be nonnegative"))
    if e.periods < 1:
        violations.append(Violation("economics/periods", "periods must be positive"))
    for name, value in e.kpis.items:
        if value <= 0:
            violations.append(Violation("economics/kpis/{}".format(name), "required value must be positive"))
    for message in unresolved_references(e):
        violations.append(Violation("economics", message))

    return violations


def _catalog_violations(terms: Terms, catalog: List[QosCatalogBound]) -> List[Violation]:
    violations = []
    for spec in terms.qos_specs:
        for bound in catalog:
            if bound.metric != spec.name:
                continue
            field = "qos/{}/target".format(spec.name)
            admitted = bound.admits(spec.target, spec.unit)
            if admitted is None:
                violations.append(
                    Violation(field, "unit {!r} not comparable with catalog unit {!r}".format(spec.unit, bound.unit))
                )
            elif not admitted:
                violations.append(
                    Violation(
                        field,
                        "target {} {} violates catalog {} {} {}".format(
                            spec.target, spec.unit, bound.kind.value, bound.bound, bound.unit
                        ),
                    )
                )
    return violations
