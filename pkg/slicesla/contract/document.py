"""Contract <-> document (plain dicts/lists/scalars) conversion.

The document is what the YAML contract files hold, and the terms part of it is
what amendments patch. Field paths in errors are slash separated
(`penalty/schedule/step`).
"""
from decimal import Decimal
from decimal import InvalidOperation
from typing import Any
from typing import Callable
from typing import Dict
from typing import List
from typing import Optional

from slicesla.base.money import to_decimal
from slicesla.base.timeutil import format_duration
from slicesla.base.timeutil import format_ts
from slicesla.base.timeutil import parse_duration
from slicesla.base.timeutil import parse_ts
from slicesla.contract.error import SchemaError
from slicesla.contract.model import Amendment
from slicesla.contract.model import AvailabilityTerms
from slicesla.contract.model import Direction
from slicesla.contract.model import Mode
from slicesla.contract.model import QosMetricSpec
from slicesla.contract.model import Retention
from slicesla.contract.model import SlaContract
from slicesla.contract.model import Terms
from slicesla.contract.model import TrackingLimits
from slicesla.economics import EconomicsTerms
from slicesla.economics import KpiRequirements
from slicesla.economics import ResourceAmount
from slicesla.economics import ResourceVector
from slicesla.economics import RevenueTier
from slicesla.economics import VnfCatalogEntry
from slicesla.incident import IncidentClass
from slicesla.penalty.formulas import Component
from slicesla.penalty.formulas import ImportanceProfile
from slicesla.penalty.schedule import ScheduleSegment
from slicesla.penalty.terms import PenaltyBase
from slicesla.penalty.terms import PenaltyTerms
from slicesla.penalty.terms import ScheduleKind
from slicesla.penalty.terms import ScheduleSpec
from slicesla.penalty.terms import SubcontractSpec

_REQUIRED = object()


class FieldReader:
    """Reads the fields of one mapping, remembering which ones were consumed."""

    def __init__(self, doc: Any, path: str = "") -> None:
        if not isinstance(doc, dict):
            raise SchemaError(path or "/", "expected a mapping")
        self.doc = doc
        self.path = path
        self.seen = set()

    def field(self, key: str) -> str:
        return "{}/{}".format(self.path, key) if self.path else key

    def get(self, key: str, convert: Callable[[Any], Any], default: Any = _REQUIRED) -> Any:
        self.seen.add(key)
        if self.doc.get(key) is None:
            if default is _REQUIRED:
                raise SchemaError(self.field(key), "missing required field")
            return default
        try:
            return convert(self.doc[key])
        except SchemaError:
            raise
        except (TypeError, ValueError, InvalidOperation, KeyError, AttributeError) as error:
            raise SchemaError(self.field(key), str(error) or "invalid value")

    def section(self, key: str) -> "FieldReader":
        self.seen.add(key)
        value = self.doc.get(key)
        return FieldReader({} if value is None else value, self.field(key))

    def items(self, key: str) -> List[Any]:
        self.seen.add(key)
        value = self.doc.get(key)
        if value is None:
            return []
        if not isinstance(value, (list, dict)):
            raise SchemaError(self.field(key), "expected a list or a mapping")
        return list(value.items()) if isinstance(value, dict) else list(enumerate(value))

    def items_all(self) -> List[Any]:
        """All the (key, value) pairs of the mapping, every key counting as consumed."""
        self.seen.update(self.doc)
        return list(self.doc.items())

    def finish(self) -> None:
        unknown = sorted(str(k) for k in set(self.doc) - self.seen)
        if unknown:
            raise SchemaError(self.field(unknown[0]), "unknown field {!r}".format(unknown[0]))


def _dec(value: Any) -> Decimal:
    if isinstance(value, bool):
        raise ValueError("expected a number, got a boolean")
    return to_decimal(value if isinstance(value, (int, float, Decimal)) else str(value))


def _float(value: Any) -> float:
    if isinstance(value, bool):
        raise ValueError("expected a number, got a boolean")
    return float(value)


def _int(value: Any) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValueError("expected an integer, got {!r}".format(value))
    return value


def _str(value: Any) -> str:
    if not isinstance(value, (str, int)) or isinstance(value, bool):
        raise ValueError("expected a string, got {!r}".format(value))
    return str(value)


def _num(value: Decimal) -> Any:
    """Decimal to a plain YAML/JSON number."""
    if value == value.to_integral_value():
        return int(value)
    return float(value)


# Reading


def contract_from_document(doc: Any) -> SlaContract:
    r = FieldReader(doc)
    lifetime = r.section("lifetime")
    contract = SlaContract(
        id=r.get("id", _str),
        tenant=r.get("tenant", _str),
        provider=r.get("provider", _str),
        mode=r.get("mode", Mode, Mode.STATIC),
        start_time=lifetime.get("start", parse_ts),
        end_time=lifetime.get("end", parse_ts),
        terms=_terms(r),
        amendments=tuple(_amendment(item, "amendments/{}".format(i)) for i, item in r.items("amendments")),
    )
    lifetime.finish()
    r.finish()
    return contract


def terms_from_document(doc: Any) -> Terms:
    r = FieldReader(doc)
    terms = _terms(r)
    r.finish()
    return terms


def _terms(r: FieldReader) -> Terms:
    return Terms(
        qos_specs=tuple(_qos(name, spec, r.field("qos/{}".format(name))) for name, spec in r.items("qos")),
        availability=_availability(r.section("availability")),
        penalty=_penalty(r.section("penalty")),
        economics=_economics(r.section("economics")),
        tracking=_tracking(r.section("tracking")),
        retention=r.get("retention", Retention, Retention.ARCHIVE),
    )


def _qos(name: str, doc: Any, path: str) -> QosMetricSpec:
    r = FieldReader(doc, path)
    spec = QosMetricSpec(
        name=str(name),
        unit=r.get("unit", _str, ""),
        target=r.get("target", _float),
        violation_threshold=r.get("threshold", _float),
        direction=r.get("direction", Direction, Direction.HIGHER_IS_BETTER),
    )
    r.finish()
    return spec


def _availability(r: FieldReader) -> AvailabilityTerms:
    d = AvailabilityTerms()
    terms = AvailabilityTerms(
        agreed=r.get("agreed", _dec, d.agreed),
        accepted=r.get("accepted", _dec, d.accepted),
        terminated=r.get("terminated", _dec, d.terminated),
        band_high_min=r.get("band_high_min", _dec, d.band_high_min),
        band_average_min=r.get("band_average_min", _dec, d.band_average_min),
        outage_classes=r.get(
            "outage_classes", lambda v: frozenset(IncidentClass(c) for c in v), d.outage_classes
        ),
    )
    r.finish()
    return terms


def _tracking(r: FieldReader) -> TrackingLimits:
    d = TrackingLimits()
    limits = TrackingLimits(
        window_length=r.get("window", parse_duration, d.window_length),
        max_major_plus_critical=r.get("max_major_plus_critical", _int, d.max_major_plus_critical),
    )
    r.finish()
    return limits


def _schedule(r: FieldReader) -> ScheduleSpec:
    d = ScheduleSpec()
    kind = r.get("kind", ScheduleKind, d.kind)
    segments = []
    for i, item in r.items("segments"):
        s = FieldReader(item, r.field("segments/{}".format(i)))
        segments.append(
            ScheduleSegment(floor=s.get("floor", _dec), step=s.get("step", _dec), increment=s.get("increment", _dec))
        )
        s.finish()
    spec = ScheduleSpec(
        kind=kind,
        step=r.get("step", _dec, d.step),
        increment=r.get("increment", _dec, d.increment),
        first_drop=r.get("first_drop", _dec, d.first_drop),
        first_penalty=r.get("first_penalty", _dec, d.first_penalty),
        segments=tuple(segments),
        points=r.get("points", lambda v: tuple((_dec(a), _dec(p)) for a, p in v), ()),
    )
    r.finish()
    return spec


def _profile(name: str, doc: Any, path: str) -> ImportanceProfile:
    r = FieldReader(doc, path)
    profile = ImportanceProfile(
        breakpoints=r.get("breakpoints", lambda v: tuple((_dec(t), _dec(x)) for t, x in v), ()),
        period=r.get("period", _dec, None),
        end=r.get("end", _dec, None),
        default=r.get("default", _dec, Decimal(1)),
    )
    r.finish()
    return profile


def _subcontract(doc: Any, path: str) -> SubcontractSpec:
    r = FieldReader(doc, path)
    spec = SubcontractSpec(
        id=r.get("id", _str),
        unit_price=r.get("unit_price", _dec),
        metrics=r.get("metrics", lambda v: tuple(_str(m) for m in v), ()),
        importance=r.get("importance", _str, None),
        sampling_step=r.get("sampling_step", _dec, Decimal(1)),
    )
    r.finish()
    return spec


def _penalty(r: FieldReader) -> PenaltyTerms:
    d = PenaltyTerms()
    terms = PenaltyTerms(
        schedule=_schedule(r.section("schedule")),
        base=r.get("base", PenaltyBase, d.base),
        per_breach=r.get("per_breach", _dec, d.per_breach),
        per_unit_time=r.get("per_unit_time", _dec, d.per_unit_time),
        time_unit=r.get("time_unit", parse_duration, d.time_unit),
        sampling_step=r.get("sampling_step", _dec, d.sampling_step),
        importance=r.get("importance", _str, None),
        importance_profiles={
            str(name): _profile(name, doc, r.field("importance_profiles/{}".format(name)))
            for name, doc in r.items("importance_profiles")
        },
        subcontracts=tuple(
            _subcontract(doc, r.field("subcontracts/{}".format(i))) for i, doc in r.items("subcontracts")
        ),
        components=r.get("components", lambda v: frozenset(Component(c) for c in v), d.components),
    )
    r.finish()
    return terms


def _resources(doc: Any, path: str) -> ResourceVector:
    r = FieldReader(doc, path)
    items = []
    for name, item in r.items_all():
        s = FieldReader(item, r.field(name))
        items.append(ResourceAmount(name=str(name), amount=s.get("amount", _float), unit=s.get("unit", _str, "")))
        s.finish()
    return ResourceVector(tuple(items))


def _vnf(vnf_id: str, doc: Any, path: str) -> VnfCatalogEntry:
    r = FieldReader(doc, path)
    entry = VnfCatalogEntry(
        id=str(vnf_id),
        base_resources=_resources(r.doc.get("base") or {}, r.field("base")),
        per_user_resources=_resources(r.doc.get("per_user") or {}, r.field("per_user")),
        kpi_multipliers=r.get("kpi_multipliers", lambda v: {str(k): _float(x) for k, x in v.items()}, {}),
    )
    r.seen.update(("base", "per_user"))
    r.finish()
    return entry


def vnf_catalog_from_document(doc: Any, path: str = "vnf_catalog") -> Dict[str, VnfCatalogEntry]:
    r = FieldReader(doc, path)
    return {str(vnf_id): _vnf(vnf_id, entry, r.field(vnf_id)) for vnf_id, entry in r.items_all()}


def _economics(r: FieldReader) -> EconomicsTerms:
    d = EconomicsTerms()
    terms = EconomicsTerms(
        currency=r.get("currency", _str, d.currency),
        price=r.get("price", _dec, d.price),
        slice_size=r.get("slice_size", _int, d.slice_size),
        customer_size=r.get("customer_size", _int, d.customer_size),
        periods=r.get("periods", _int, d.periods),
        vnf=r.get("vnf", _str, None),
        kpis=r.get("kpis", lambda v: KpiRequirements(tuple((str(k), _float(x)) for k, x in v.items())), d.kpis),
        baselines=r.get("baselines", lambda v: {str(k): _float(x) for k, x in v.items()}, {}),
        vnf_catalog=r.get("vnf_catalog", lambda v: vnf_catalog_from_document(v, r.field("vnf_catalog")), {}),
        unit_costs=r.get("unit_costs", lambda v: {str(k): _dec(x) for k, x in v.items()}, {}),
        revenue_tiers=r.get(
            "revenue_tiers",
            lambda v: tuple(
                RevenueTier(up_to=None if t.get("up_to") is None else _int(t["up_to"]), price=_dec(t["price"]))
                for t in v
            ),
            (),
        ),
    )
    r.finish()
    return terms


def _amendment(doc: Any, path: str) -> Amendment:
    r = FieldReader(doc, path)
    amendment = Amendment(
        effective_time=r.get("effective", parse_ts),
        changes=r.get("changes", lambda v: tuple((str(p), x) for p, x in v.items()), ()),
        renegotiated=r.get("renegotiated", bool, False),
    )
    r.finish()
    return amendment


# Writing


def contract_to_document(contract: SlaContract) -> Dict[str, Any]:
    doc: Dict[str, Any] = {
        "id": contract.id,
        "tenant": contract.tenant,
        "provider": contract.provider,
        "mode": contract.mode.value,
        "lifetime": {"start": format_ts(contract.start_time), "end": format_ts(contract.end_time)},
    }
    doc.update(terms_to_document(contract.terms))
    if contract.amendments:
        doc["amendments"] = [amendment_to_document(a) for a in contract.amendments]
    return doc


def amendment_to_document(amendment: Amendment) -> Dict[str, Any]:
    doc: Dict[str, Any] = {
        "effective": format_ts(amendment.effective_time),
        "changes": {path: value for path, value in amendment.changes},
    }
    if amendment.renegotiated:
        doc["renegotiated"] = True
    return doc


def terms_to_document(terms: Terms) -> Dict[str, Any]:
    a = terms.availability
    p = terms.penalty
    e = terms.economics
    return {
        "qos": {
            s.name: {
                "unit": s.unit,
                "target": s.target,
                "threshold": s.violation_threshold,
                "direction": s.direction.value,
            }
            for s in terms.qos_specs
        },
        "availability": {
            "agreed": _num(a.agreed),
            "accepted": _num(a.accepted),
            "terminated": _num(a.terminated),
            "band_high_min": _num(a.band_high_min),
            "band_average_min": _num(a.band_average_min),
            "outage_classes": [c.value for c in IncidentClass if c in a.outage_classes],
        },
        "penalty": {
            "schedule": _schedule_to_document(p.schedule),
            "base": p.base.value,
            "per_breach": _num(p.per_breach),
            "per_unit_time": _num(p.per_unit_time),
            "time_unit": format_duration(p.time_unit),
            "sampling_step": _num(p.sampling_step),
            "importance": p.importance,
            "importance_profiles": {name: _profile_to_document(prof) for name, prof in p.importance_profiles.items()},
            "subcontracts": [
                {
                    "id": s.id,
                    "unit_price": _num(s.unit_price),
                    "metrics": list(s.metrics),
                    "importance": s.importance,
                    "sampling_step": _num(s.sampling_step),
                }
                for s in p.subcontracts
            ],
            "components": [c.value for c in Component if c in p.components],
        },
        "economics": {
            "currency": e.currency,
            "price": _num(e.price),
            "slice_size": e.slice_size,
            "customer_size": e.customer_size,
            "periods": e.periods,
            "vnf": e.vnf,
            "kpis": {name: value for name, value in e.kpis.items},
            "baselines": dict(e.baselines),
            "vnf_catalog": {vnf_id: _vnf_to_document(entry) for vnf_id, entry in e.vnf_catalog.items()},
            "unit_costs": {name: _num(cost) for name, cost in e.unit_costs.items()},
            "revenue_tiers": [{"up_to": t.up_to, "price": _num(t.price)} for t in e.revenue_tiers],
        },
        "tracking": {
            "window": format_duration(terms.tracking.window_length),
            "max_major_plus_critical": terms.tracking.max_major_plus_critical,
        },
        "retention": terms.retention.value,
    }


def _schedule_to_document(spec: ScheduleSpec) -> Dict[str, Any]:
    doc: Dict[str, Any] = {"kind": spec.kind.value}
    if spec.kind is ScheduleKind.LINEAR:
        doc.update(step=_num(spec.step), increment=_num(spec.increment))
    elif spec.kind is ScheduleKind.SEGMENTED:
        doc.update(
            first_drop=_num(spec.first_drop),
            first_penalty=_num(spec.first_penalty),
            segments=[
                {"floor": _num(s.floor), "step": _num(s.step), "increment": _num(s.increment)} for s in spec.segments
            ],
        )
    elif spec.kind is ScheduleKind.BREAKPOINTS:
        doc["points"] = [[_num(a), _num(p)] for a, p in spec.points]
    return doc


def _profile_to_document(profile: ImportanceProfile) -> Dict[str, Any]:
    doc: Dict[str, Any] = {"breakpoints": [[_num(t), _num(v)] for t, v in profile.breakpoints]}
    if profile.period is not None:
        doc["period"] = _num(profile.period)
    if profile.end is not None:
        doc["end"] = _num(profile.end)
    if profile.default != 1:
        doc["default"] = _num(profile.default)
    return doc


def _vnf_to_document(entry: VnfCatalogEntry) -> Dict[str, Any]:
    def vector(v: ResourceVector) -> Dict[str, Any]:
        return {r.name: {"amount": r.amount, "unit": r.unit} for r in v.items}

    return {
        "base": vector(entry.base_resources),
        "per_user": vector(entry.per_user_resources),
        "kpi_multipliers": dict(entry.kpi_multipliers),
    }

