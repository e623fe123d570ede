import logging

from abc import ABC, abstractmethod
from pathlib import Path

from src.consts import DEFAULT_RESULTS_DIR
from src.result_store.abstractions import IResultStore

logger = logging.getLogger(__name__)


class IReportSink(ABC):
    @abstractmethod
    def deliver(self, contents: bytes, filename: str) -> None:
        ...


class FileReportSink(IReportSink):
    def __init__(self, directory: Path = DEFAULT_RESULTS_DIR):
        self.directory = Path(directory)

    def deliver(self, contents: bytes, filename: str) -> None:
        self.directory.mkdir(parents=True, exist_ok=True)
        target = self.directory / Path(filename).name
        target.write_bytes(contents)
        logger.info(f"Report written to {target} ({len(contents)} bytes)")


class StoreReportSink(IReportSink):
    """Keeps the report in a result store under `report:<filename>`."""

    def __init__(self, store: IResultStore, ttl: int | None = None):
        self.store = store
        self.ttl = ttl

    def deliver(self, contents: bytes, filename: str) -> None:
        key = f"report:{filename}"
        self.store.set(key, contents.decode("utf-8"), ex=self.ttl)
        logger.info(f"Report stored under {key}")
