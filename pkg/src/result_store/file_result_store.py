import json
import logging
import re
import threading
import time

from pathlib import Path

from src.consts import DEFAULT_RESULTS_DIR
from src.result_store.abstractions import IResultStore

logger = logging.getLogger(__name__)


class FileResultStore(IResultStore):
    """One JSON file per key under `directory`: {"value": ..., "expires": epoch seconds or null}."""

    _lock = threading.Lock()

    def __init__(self, directory: Path = DEFAULT_RESULTS_DIR):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)

    def _path(self, key: str) -> Path:
        return self.directory / (re.sub(r"[^A-Za-z0-9_.-]", "_", key) + ".json")

    def _read(self, key: str) -> dict | None:
        path = self._path(key)
        if not path.exists():
            return None
        try:
            entry = json.loads(path.read_text())
        except json.JSONDecodeError:
            logger.warning(f"unreadable store entry {path}, ignoring it")
            return None
        if entry.get("expires") is not None and entry["expires"] < time.time():
            path.unlink(missing_ok=True)
            return None
        return entry

    def get(self, key: str) -> str | None:
        with self._lock:
            entry = self._read(key)
        return None if entry is None else entry["value"]

    def set(self, key: str, value: str, ex: int | None = None) -> bool:
        entry = {"value": value, "expires": time.time() + ex if ex is not None else None}
        with self._lock:
            self._path(key).write_text(json.dumps(entry))
        return True

    def exists(self, key: str) -> bool:
        with self._lock:
            return self._read(key) is not None

    def delete(self, key: str) -> int:
        with self._lock:
            path = self._path(key)
            if path.exists():
                path.unlink()
                return 1
        return 0
