"""YAML scenario documents for the simulator.

    name: remote-surgery
    horizon: 720h
    seed: 7
    classes:
      minor:
        rate: 0.02            # incidents per hour
        mean_duration: 5m
        degradations:
          - {metric: latency, observed: 12, probability: 0.8}
"""
from pathlib import Path
from typing import Any
from typing import Dict
from typing import Union

from slicesla.base.timeutil import format_duration
from slicesla.base.timeutil import format_ts
from slicesla.base.timeutil import parse_duration
from slicesla.base.timeutil import parse_ts
from slicesla.contract.document import FieldReader
from slicesla.contract.error import SchemaError
from slicesla.formats.document import YamlSyntaxError
from slicesla.formats.document import dump_yaml
from slicesla.formats.document import field_line
from slicesla.formats.document import load_yaml
from slicesla.formats.error import ScenarioParseError
from slicesla.incident import IncidentClass
from slicesla.simulator import ClassProfile
from slicesla.simulator import DegradationRule
from slicesla.simulator import ScenarioConfig


def _seed(value: Any) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValueError("expected an integer seed, got {!r}".format(value))
    return value


def _rule(doc: Any, path: str) -> DegradationRule:
    r = FieldReader(doc, path)
    rule = DegradationRule(
        metric=r.get("metric", str),
        observed=r.get("observed", float),
        probability=r.get("probability", float, 1.0),
    )
    r.finish()
    return rule


def _class_profile(doc: Any, path: str) -> ClassProfile:
    r = FieldReader(doc, path)
    d = ClassProfile()
    profile = ClassProfile(
        rate=r.get("rate", float, d.rate),
        mean_duration=r.get("mean_duration", parse_duration, d.mean_duration),
        degradations=tuple(_rule(item, r.field("degradations/{}".format(i))) for i, item in r.items("degradations")),
    )
    r.finish()
    return profile


def scenario_from_document(doc: Any) -> ScenarioConfig:
    r = FieldReader(doc)
    classes: Dict[IncidentClass, ClassProfile] = {}
    for name, item in r.items("classes"):
        try:
            incident_class = IncidentClass(name)
        except ValueError:
            raise SchemaError(r.field("classes/{}".format(name)), "unknown incident class {!r}".format(name))
        classes[incident_class] = _class_profile(item, r.field("classes/{}".format(name)))
    config = ScenarioConfig(
        name=r.get("name", str, ""),
        horizon=r.get("horizon", parse_duration),
        seed=r.get("seed", _seed, 0),
        start=r.get("start", parse_ts, None),
        classes=classes,
    )
    r.finish()
    return config


def scenario_to_document(config: ScenarioConfig) -> Dict[str, Any]:
    doc: Dict[str, Any] = {"name": config.name, "horizon": format_duration(config.horizon), "seed": config.seed}
    if config.start is not None:
        doc["start"] = format_ts(config.start)
    doc["classes"] = {
        c.value: {
            "rate": p.rate,
            "mean_duration": format_duration(p.mean_duration),
            "degradations": [
                {"metric": rule.metric, "observed": rule.observed, "probability": rule.probability}
                for rule in p.degradations
            ],
        }
        for c, p in config.classes.items()
    }
    return doc


def parse_scenario(text: str) -> ScenarioConfig:
    try:
        doc, node = load_yaml(text)
    except YamlSyntaxError as error:
        raise ScenarioParseError(str(error), error.line)
    if doc is None:
        raise ScenarioParseError("empty scenario document", 1)

    try:
        config = scenario_from_document(doc)
    except SchemaError as error:
        raise ScenarioParseError(str(error), field_line(node, error.field))
    errors = config.violations()
    if errors:
        raise ScenarioParseError("; ".join(errors))
    return config


def load_scenario(path: Union[str, Path]) -> ScenarioConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as error:
        raise ScenarioParseError("{}: {}".format(path, error.strerror or error))
    return parse_scenario(text)


def serialize_scenario(config: ScenarioConfig) -> str:
    return dump_yaml(scenario_to_document(config))
