"""Settings and logging setup for the command-line tool."""
import logging
import os
from decimal import Decimal
from pathlib import Path
from typing import Any
from typing import Dict
from typing import Optional

import yaml

from slicesla.base.error import SliceSlaError

DEFAULT_CONFIG_FILE = "slicesla.yaml"
LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s %(message)s"

_DEFAULTS: Dict[str, Any] = {
    "log_level": "WARNING",
    "catalog": None,
    "data_dir": None,
    "resolution": "0.001",
    "runs": 1000,
    "seed": None,
    "workers": 1,
}


class ConfigError(SliceSlaError):
    """Error raised for an unreadable or invalid settings file."""


class Settings:
    """Settings resolved from arguments, environment variables, the YAML settings file and defaults."""

    def __init__(self, values: Dict[str, Any]) -> None:
        self._values = values

    @classmethod
    def load(cls, path: Optional[str] = None, **overrides) -> "Settings":
        path = path or os.getenv("SLICESLA_CONFIG")
        values = dict(_DEFAULTS)

        file_path = Path(path or DEFAULT_CONFIG_FILE)
        if file_path.exists():
            try:
                with open(file_path) as f:
                    data = yaml.safe_load(f) or {}
            except yaml.YAMLError as error:
                raise ConfigError("invalid settings file {}: {}".format(file_path, error))
            if not isinstance(data, dict):
                raise ConfigError("settings file {} must be a mapping".format(file_path))
            unknown = set(data) - set(_DEFAULTS)
            if unknown:
                raise ConfigError("unknown settings: {}".format(", ".join(sorted(unknown))))
            values.update(data)
        elif path:
            raise ConfigError("settings file {} does not exist".format(file_path))

        for key, env in (
            ("log_level", "SLICESLA_LOG_LEVEL"),
            ("catalog", "SLICESLA_CATALOG"),
            ("data_dir", "SLICESLA_DATA_DIR"),
        ):
            if os.getenv(env):
                values[key] = os.getenv(env)

        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(values)

    @property
    def log_level(self) -> str:
        return str(self._values["log_level"]).upper()

    @property
    def catalog(self) -> Optional[str]:
        return self._values["catalog"]

    @property
    def data_dir(self) -> Optional[str]:
        return self._values["data_dir"]

    @property
    def resolution(self) -> Decimal:
        return Decimal(str(self._values["resolution"]))

    @property
    def runs(self) -> int:
        return int(self._values["runs"])

    @property
    def seed(self) -> Optional[int]:
        seed = self._values["seed"]
        return None if seed is None else int(seed)

    @property
    def workers(self) -> int:
        return int(self._values["workers"])

    def __repr__(self):
        return "slicesla.base.config.Settings({!r})".format(self._values)


def setup_logging(level: str = "WARNING") -> None:
    """Configure the root logger, only the CLI calls this."""
    logging.basicConfig(level=getattr(logging, level.upper(), logging.WARNING), format=LOG_FORMAT)
