from dataclasses import replace
from datetime import timedelta
from decimal import Decimal

import pytest

from slicesla.contract import amendment_times
from slicesla.contract import apply_amendment
from slicesla.contract import contract_from_document
from slicesla.contract import contract_to_document
from slicesla.contract import effective_terms_at
from slicesla.contract.catalog import BoundKind
from slicesla.contract.catalog import QosCatalogBound
from slicesla.contract.catalog import convert
from slicesla.contract.catalog import load_catalog
from slicesla.contract.error import AmendmentError
from slicesla.contract.error import OutOfLifetimeError
from slicesla.contract.error import SchemaError
from slicesla.contract.error import StaticContractError
from slicesla.contract.model import Amendment
from slicesla.contract.model import Mode
from slicesla.contract.validate import Violation
from slicesla.contract.validate import validate_contract
from slicesla.formats.contract import load_contract
from slicesla.formats.contract import parse_contract
from slicesla.formats.contract import serialize_contract
from slicesla.formats.error import ContractParseError
from slicesla.penalty.terms import ScheduleKind
from tests.utils import at
from tests.utils import fixture


def _contract(**qos):
    doc = {
        "id": "slice-1",
        "tenant": "tenant",
        "provider": "operator",
        "lifetime": {"start": "2026-01-01T00:00:00Z", "end": "2026-01-31T00:00:00Z"},
        "qos": qos,
    }
    return contract_from_document(doc)


def _dynamic():
    return replace(load_contract(fixture("linear_contract.yaml")), mode=Mode.DYNAMIC)


def test_load_contract():
    contract = load_contract(fixture("linear_contract.yaml"))
    assert contract.id == "embb-city-center"
    assert contract.mode is Mode.STATIC
    assert contract.version == 1
    assert contract.end_time - contract.start_time == timedelta(days=30)

    terms = contract.terms
    assert terms.qos("latency").violation_threshold == 10
    assert terms.qos("jitter") is None
    assert terms.availability.accepted == Decimal("0.998")
    assert terms.penalty.time_unit == timedelta(hours=1)
    assert terms.penalty.schedule.kind is ScheduleKind.LINEAR
    assert terms.economics.unit_costs == {"spectrum": Decimal(3), "power": Decimal(2)}
    assert terms.tracking.max_major_plus_critical == 3
    assert validate_contract(contract, load_catalog()) == []

    nonlinear = load_contract(fixture("nonlinear_contract.yaml"))
    assert nonlinear.terms.penalty.schedule.kind is ScheduleKind.NONLINEAR_REFERENCE
    assert validate_contract(nonlinear) == []


def test_serialize_contract():
    for name in ("linear_contract.yaml", "nonlinear_contract.yaml", "dynamic_contract.yaml"):
        contract = load_contract(fixture(name))
        assert parse_contract(serialize_contract(contract)) == contract
        assert contract_from_document(contract_to_document(contract)) == contract


def test_parse_errors():
    with pytest.raises(ContractParseError) as excinfo:
        load_contract(fixture("bad_unknown_field.yaml"))
    assert excinfo.value.field == "penalty/surcharge"
    assert excinfo.value.line == 9
    assert "unknown field" in str(excinfo.value)

    with pytest.raises(ContractParseError) as excinfo:
        parse_contract("id: slice\ntenant: t\nprovider: [unclosed\n")
    assert excinfo.value.line is not None

    with pytest.raises(ContractParseError) as excinfo:
        parse_contract("id: slice\nprovider: p\nlifetime: {start: 2026-01-01T00:00:00Z, end: 2026-01-02T00:00:00Z}\n")
    assert excinfo.value.field == "tenant"
    assert "missing required field" in str(excinfo.value)

    with pytest.raises(ContractParseError) as excinfo:
        parse_contract("")
    assert excinfo.value.line == 1

    with pytest.raises(ContractParseError):
        load_contract(fixture("does_not_exist.yaml"))


def test_validate_contract_catalog():
    catalog = load_catalog()

    # at the standardized maximum, in another unit too
    assert validate_contract(_contract(peak_data_rate={"unit": "Gbps", "target": 10, "threshold": 5}), catalog) == []
    assert validate_contract(_contract(peak_data_rate={"unit": "Mbps", "target": 10000, "threshold": 1}), catalog) == []

    violations = validate_contract(
        _contract(latency={"unit": "ms", "target": 0.5, "threshold": 10, "direction": "lower-is-better"}), catalog
    )
    assert len(violations) == 1
    assert violations[0].field == "qos/latency/target"

    violations = validate_contract(_contract(latency={"unit": "Mbps", "target": 5, "threshold": 1}), catalog)
    assert "not comparable" in violations[0].message

    # without a catalog only the invariants are checked
    latency = {"unit": "ms", "target": 0.5, "threshold": 10, "direction": "lower-is-better"}
    assert validate_contract(_contract(latency=latency)) == []


def test_validate_contract_invariants():
    contract = load_contract(fixture("linear_contract.yaml"))
    availability = replace(contract.terms.availability, terminated=Decimal("0.998"))
    broken = replace(contract, terms=replace(contract.terms, availability=availability))
    assert validate_contract(broken) == [Violation("availability/terminated", "terminated < accepted required")]

    violations = validate_contract(_contract(bandwidth={"unit": "Mbps", "target": 40, "threshold": 50}))
    assert [v.field for v in violations] == ["qos/bandwidth/target"]

    violations = validate_contract(_contract(bandwidth={"unit": "", "target": 60, "threshold": 50}))
    assert [v.field for v in violations] == ["qos/bandwidth/unit"]

    reversed_lifetime = replace(contract, end_time=contract.start_time)
    assert Violation("lifetime", "start < end required") in validate_contract(reversed_lifetime)

    economics = replace(contract.terms.economics, vnf="upf-large")
    violations = validate_contract(replace(contract, terms=replace(contract.terms, economics=economics)))
    assert [v.field for v in violations] == ["economics"]


def test_validate_contract_amendments():
    contract = load_contract(fixture("linear_contract.yaml"))
    amendment = Amendment(effective_time=at(100), changes=(("/economics/price", 12),))
    static = replace(contract, amendments=(amendment,))
    assert validate_contract(static) == [Violation("amendments/0", "amendments forbidden on static SLA")]

    bad = Amendment(effective_time=at(100), changes=(("/availability/terminated", 0.999),))
    violations = validate_contract(replace(_dynamic(), amendments=(bad,)))
    assert Violation("amendments/0/availability/terminated", "terminated < accepted required") in violations

    assert validate_contract(load_contract(fixture("dynamic_contract.yaml"))) == []


def test_apply_amendment():
    contract = load_contract(fixture("linear_contract.yaml"))
    amendment = Amendment(effective_time=at(360), changes=(("/qos/bandwidth/target", 200),))
    with pytest.raises(StaticContractError) as excinfo:
        apply_amendment(contract, amendment)
    assert str(excinfo.value) == "amendments forbidden on static SLA"

    # renegotiations are allowed on static contracts
    renegotiated = apply_amendment(contract, amendment, renegotiated=True)
    assert renegotiated.amendments[0].renegotiated

    dynamic = _dynamic()
    amended = apply_amendment(dynamic, amendment)
    assert amended.version == 2
    assert dynamic.version == 1
    assert amended.at_version(1) == dynamic
    assert effective_terms_at(amended, at(360) - timedelta(seconds=1)).qos("bandwidth").target == 100
    assert effective_terms_at(amended, at(360)).qos("bandwidth").target == 200
    assert effective_terms_at(amended, at(360)).economics == dynamic.terms.economics

    # an empty change set changes nothing
    noop = apply_amendment(dynamic, Amendment(effective_time=at(10)))
    for h in (0, 10, 500):
        assert effective_terms_at(noop, at(h)) == dynamic.terms


def test_amendment_errors():
    dynamic = _dynamic()
    with pytest.raises(OutOfLifetimeError):
        apply_amendment(dynamic, Amendment(effective_time=at(-1), changes=(("/economics/price", 1),)))
    with pytest.raises(AmendmentError):
        apply_amendment(dynamic, Amendment(effective_time=at(1), changes=(("/qos/jitter/target", 1),)))
    with pytest.raises(AmendmentError):
        apply_amendment(dynamic, Amendment(effective_time=at(1), changes=(("/economics/slice_size", "lots"),)))
    with pytest.raises(OutOfLifetimeError):
        effective_terms_at(dynamic, at(-1))
    with pytest.raises(ValueError):
        dynamic.at_version(2)


def test_effective_terms_replay():
    dynamic = _dynamic()
    assert effective_terms_at(dynamic, dynamic.start_time) == dynamic.terms

    # the later amendment wins, whatever order they were logged in
    later = Amendment(effective_time=at(200), changes=(("/economics/price", 7),))
    earlier = Amendment(effective_time=at(100), changes=(("/economics/price", 5),))
    amended = apply_amendment(apply_amendment(dynamic, later), earlier)
    assert effective_terms_at(amended, at(50)).economics.price == 10
    assert effective_terms_at(amended, at(150)).economics.price == 5
    assert effective_terms_at(amended, at(300)).economics.price == 7
    assert amendment_times(amended) == [at(100), at(200)]

    fixture_contract = load_contract(fixture("dynamic_contract.yaml"))
    effective = fixture_contract.amendments[0].effective_time
    before = effective_terms_at(fixture_contract, effective - timedelta(seconds=1))
    after = effective_terms_at(fixture_contract, effective)
    assert (before.economics.price, after.economics.price) == (2, 4)
    assert (before.qos("bandwidth").violation_threshold, after.qos("bandwidth").violation_threshold) == (5, 4)


def test_catalog():
    assert convert(10, "Gbps", "Mbps") == 10000
    assert convert(36, "km/h", "m/s") == pytest.approx(10)
    assert convert(1, "ms", "Mbps") is None
    assert convert(1, "furlong", "m/s") is None

    bound = QosCatalogBound("latency", 1, BoundKind.MIN, "ms")
    assert bound.admits(1000, "us")
    assert not bound.admits(0.5, "ms")
    assert bound.admits(1, "Mbps") is None

    names = {b.metric for b in load_catalog()}
    assert {"peak_data_rate", "user_data_rate", "latency", "mobility"} <= names


def test_custom_catalog(tmp_path):
    path = tmp_path / "catalog.yaml"
    path.write_text("- {metric: latency, kind: min, bound: 2, unit: ms}\n")
    catalog = load_catalog(str(path))
    assert catalog == [QosCatalogBound("latency", 2.0, BoundKind.MIN, "ms")]

    path.write_text("- {metric: latency, kind: sideways, bound: 2}\n")
    with pytest.raises(SchemaError):
        load_catalog(str(path))

    path.write_text("latency: 2\n")
    with pytest.raises(SchemaError):
        load_catalog(str(path))
