"""QoS catalog: standardized bounds contract targets must respect."""
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import List
from typing import Optional

import yaml

from slicesla.contract.error import SchemaError

DEFAULT_CATALOG_PATH = Path(__file__).resolve().parent.parent / "data" / "qos_catalog.yaml"

# unit -> (dimension, scale to the dimension's base unit)
_UNITS = {
    "bps": ("rate", 1.0),
    "kbps": ("rate", 1e3),
    "Mbps": ("rate", 1e6),
    "Gbps": ("rate", 1e9),
    "us": ("time", 1e-6),
    "ms": ("time", 1e-3),
    "s": ("time", 1.0),
    "m/s": ("speed", 1.0),
    "km/h": ("speed", 1 / 3.6),
    "%": ("ratio", 1e-2),
}


class BoundKind(str, Enum):
    MAX = "max"
    MIN = "min"


@dataclass(frozen=True)
class QosCatalogBound:
    metric: str
    bound: float
    kind: BoundKind
    unit: str = ""

    def admits(self, value: float, unit: str) -> Optional[bool]:
        """Whether the value respects the bound, None when the units cannot be compared."""
        converted = convert(value, unit, self.unit)
        if converted is None:
            return None
        # absorbs unit-scale rounding on the bound
        tolerance = 1e-9 * max(abs(self.bound), 1.0)
        if self.kind is BoundKind.MAX:
            return converted <= self.bound + tolerance
        return converted >= self.bound - tolerance


def convert(value: float, from_unit: str, to_unit: str) -> Optional[float]:
    """Convert between units of the same dimension, None when not convertible."""
    if from_unit == to_unit:
        return value
    if from_unit not in _UNITS or to_unit not in _UNITS:
        return None
    (dim_from, scale_from), (dim_to, scale_to) = _UNITS[from_unit], _UNITS[to_unit]
    if dim_from != dim_to:
        return None
    return value * scale_from / scale_to


def load_catalog(path: Optional[str] = None) -> List[QosCatalogBound]:
    """Load a catalog YAML file (a list of `metric`/`kind`/`bound`/`unit` entries), the packaged one by default."""
    with open(path or DEFAULT_CATALOG_PATH) as f:
        data = yaml.safe_load(f) or []

    if not isinstance(data, list):
        raise SchemaError("/", "catalog must be a list of bounds")

    catalog = []
    for i, entry in enumerate(data):
        try:
            catalog.append(
                QosCatalogBound(
                    metric=str(entry["metric"]),
                    bound=float(entry["bound"]),
                    kind=BoundKind(entry["kind"]),
                    unit=str(entry.get("unit", "")),
                )
            )
        except (KeyError, TypeError, ValueError) as error:
            raise SchemaError(str(i), "invalid catalog entry: {}".format(error))
    return catalog
