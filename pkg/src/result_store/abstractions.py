from abc import ABC, abstractmethod


class IResultStore(ABC):
    """String key/value store for experiment results.

    Keys in use: `calibration:<params digest>` for calibration reports and
    `report:<filename>` for scan reports delivered through a store sink.
    """

    @abstractmethod
    def get(self, key: str) -> str | None:
        """Stored value, or None when the key is missing or expired."""

    @abstractmethod
    def set(self, key: str, value: str, ex: int | None = None) -> bool:
        """Store `value`, expiring after `ex` seconds when given."""

    @abstractmethod
    def exists(self, key: str) -> bool:
        pass

    @abstractmethod
    def delete(self, key: str) -> int:
        """Number of entries removed (0 or 1)."""
