"""YAML contract documents.

    id: slice-42
    tenant: hospital
    provider: operator
    mode: static
    lifetime: {start: '2026-01-01T00:00:00Z', end: '2026-01-31T00:00:00Z'}
    qos:
      latency: {unit: ms, target: 5, threshold: 10, direction: lower-is-better}
    availability: {accepted: 0.998, terminated: 0.984}
    penalty:
      schedule: {kind: linear, step: 0.002, increment: 5}

Every other section falls back to its defaults.
"""
from pathlib import Path
from typing import Union

from slicesla.contract import contract_from_document
from slicesla.contract import contract_to_document
from slicesla.contract.error import SchemaError
from slicesla.contract.model import SlaContract
from slicesla.formats.document import YamlSyntaxError
from slicesla.formats.document import dump_yaml
from slicesla.formats.document import field_line
from slicesla.formats.document import load_yaml
from slicesla.formats.error import ContractParseError


def parse_contract(text: str) -> SlaContract:
    """Parse a YAML contract, errors carry the field path and its line."""
    try:
        doc, node = load_yaml(text)
    except YamlSyntaxError as error:
        raise ContractParseError("/", str(error), error.line)
    if doc is None:
        raise ContractParseError("/", "empty contract document", 1)

    try:
        return contract_from_document(doc)
    except SchemaError as error:
        raise ContractParseError(error.field, error.message, field_line(node, error.field))


def load_contract(path: Union[str, Path]) -> SlaContract:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as error:
        raise ContractParseError(str(path), error.strerror or str(error))
    return parse_contract(text)


def serialize_contract(contract: SlaContract) -> str:
    return dump_yaml(contract_to_document(contract))
