"""Versioned record store for contract configuration and incident history.

Records are kept in memory and, when a data directory is given, mirrored as
JSON files (one file per key holding every version).
"""
import json
import logging
from pathlib import Path
from typing import Any
from typing import Dict
from typing import Iterator
from typing import List
from typing import Optional

from slicesla.base.error import SliceSlaError

logger = logging.getLogger(__name__)


class StoreError(SliceSlaError):
    """Base error for the store module."""


class KeyNotFoundError(StoreError):
    """Error raised when a key is not found."""


class ReadOnlyRecordError(StoreError):
    """Error raised when writing to an archived key."""


class Record:
    def __init__(self, key: str, version: int, data: bytes) -> None:
        self.key = key
        self.version = version
        self.data = data

    def json(self) -> Any:
        return json.loads(self.data.decode("utf-8"))

    def __str__(self):
        return "Record(key={!r}, version={})".format(self.key, self.version)

    def __repr__(self):
        return self.__str__()

    def __hash__(self):
        return hash((self.key, self.version, self.data))

    def __eq__(self, other):
        if not isinstance(other, self.__class__):
            return False

        return (self.key, self.version, self.data) == (other.key, other.version, other.data)

    def __ne__(self, other):
        return not self.__eq__(other)


class RecordStore:
    """Versioned key/record store, every `put` appends a new version."""

    def __init__(self, data_dir: Optional[str] = None) -> None:
        self._records: Dict[str, List[Record]] = {}
        self._archived = set()
        self.data_dir = Path(data_dir) if data_dir else None
        if self.data_dir:
            self._load()

    def put(self, key: str, data: Any) -> Record:
        """Store the JSON-serializable data as the next version of key."""
        if key in self._archived:
            raise ReadOnlyRecordError("{!r} is archived".format(key))

        raw = json.dumps(data, sort_keys=True, separators=(",", ":")).encode("utf-8")
        versions = self._records.setdefault(key, [])
        record = Record(key, len(versions) + 1, raw)
        versions.append(record)
        self._flush(key)
        return record

    def get(self, key: str, version: Optional[int] = None) -> Record:
        """Return the latest version of key, or the given version."""
        versions = self._records.get(key)
        if not versions:
            raise KeyNotFoundError(key)
        if version is None:
            return versions[-1]
        if not 1 <= version <= len(versions):
            raise KeyNotFoundError("{}@{}".format(key, version))
        return versions[version - 1]

    def get_versions(self, key: str) -> List[Record]:
        """Return all the versions of key, latest first."""
        versions = self._records.get(key)
        if not versions:
            raise KeyNotFoundError(key)
        return versions[::-1]

    def is_archived(self, key: str) -> bool:
        return key in self._archived

    def archive(self, key: str) -> None:
        """Retain every version of key, read-only."""
        if key not in self._records:
            raise KeyNotFoundError(key)
        self._archived.add(key)
        self._flush(key)
        logger.info("record_archived", extra={"key": key})

    def purge(self, key: str) -> None:
        """Remove every version of key (missing keys are ignored)."""
        self._records.pop(key, None)
        self._archived.discard(key)
        if self.data_dir:
            path = self._path(key)
            if path.exists():
                path.unlink()
        logger.info("record_purged", extra={"key": key})

    def keys(self) -> List[str]:
        return sorted(self._records)

    def __iter__(self) -> Iterator[Record]:
        for key in self.keys():
            yield self._records[key][-1]

    def __contains__(self, key: str) -> bool:
        return key in self._records

    def _path(self, key: str) -> Path:
        assert self.data_dir is not None
        return self.data_dir / "{}.json".format(key)

    def _flush(self, key: str) -> None:
        if not self.data_dir:
            return
        self.data_dir.mkdir(parents=True, exist_ok=True)
        payload = {
            "key": key,
            "archived": key in self._archived,
            "versions": [r.data.decode("utf-8") for r in self._records[key]],
        }
        self._path(key).write_text(json.dumps(payload), encoding="utf-8")

    def _load(self) -> None:
        assert self.data_dir is not None
        if not self.data_dir.is_dir():
            return
        for path in sorted(self.data_dir.glob("*.json")):
            payload = json.loads(path.read_text(encoding="utf-8"))
            key = payload["key"]
            self._records[key] = [
                Record(key, i + 1, raw.encode("utf-8")) for i, raw in enumerate(payload["versions"])
            ]
            if payload.get("archived"):
                self._archived.add(key)
