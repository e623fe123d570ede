from dataclasses import dataclass
from itertools import product
from typing import Iterable, Iterator, List, Tuple

from src.consts import END, FORBIDDEN_SYMBOL_CHARS, SPADE, WILDCARD
from src.exceptions import ConfigError


class Label(tuple):
    """Finite prefix of an infinite label. Entries past the stored prefix are END.

    Positions are 1-based, as in `at(1)` for the first entry. Trailing END entries
    are stripped on construction so equal labels hash equally.
    """

    __slots__ = ()

    def __new__(cls, entries: Iterable[str] = ()):
        entries = tuple(entries)
        end = len(entries)
        while end and entries[end - 1] == END:
            end -= 1
        return super().__new__(cls, entries[:end])

    def at(self, n: int) -> str:
        if n < 1:
            raise IndexError(f"label positions start at 1, got {n}")
        return self[n - 1] if n <= len(self) else END

    def with_entry(self, n: int, symbol: str) -> "Label":
        padded = list(self) + [END] * max(0, n - len(self))
        padded[n - 1] = symbol
        return Label(padded)

    def with_prefix(self, prefix: Iterable[str]) -> "Label":
        """Replace entries 1..len(prefix), keep the rest."""
        prefix = list(prefix)
        padded = list(self) + [END] * max(0, len(prefix) - len(self))
        padded[:len(prefix)] = prefix
        return Label(padded)

    @property
    def support(self) -> int:
        return len(self)

    def prefix(self, k: int) -> Tuple[str, ...]:
        return tuple(self.at(n) for n in range(1, k + 1))

    def wildcard_positions(self) -> List[int]:
        return [n for n, s in enumerate(self, start=1) if s == WILDCARD]

    def agrees_beyond(self, other: "Label", k: int) -> bool:
        """True when entries k+1, k+2, ... of both labels coincide."""
        top = max(len(self), len(other))
        return all(self.at(n) == other.at(n) for n in range(k + 1, top + 1))

    def differing_entries(self, other: "Label") -> List[int]:
        top = max(len(self), len(other))
        return [n for n in range(1, top + 1) if self.at(n) != other.at(n)]

    def key(self) -> str:
        return ".".join(self) if self else "-"

    @classmethod
    def parse(cls, text: str) -> "Label":
        text = text.strip()
        if text in ("", "-"):
            return cls()
        return cls(text.split("."))

    def __repr__(self) -> str:
        return f"Label({self.key()})"


def label_le(a: Label, b: Label) -> bool:
    """Partial order on lambda labels: a < b iff they differ and a is SPADE
    on every entry between the first and the last differing entry."""
    diff = a.differing_entries(b)
    if not diff:
        return True
    return all(a.at(n) == SPADE for n in range(diff[0], diff[-1] + 1))


def _validate_symbols(name: str, symbols: Tuple[str, ...]) -> None:
    if len(set(symbols)) != len(symbols):
        raise ConfigError(f"{name} has repeated symbols: {symbols}")
    for s in symbols:
        if not s or s == WILDCARD or any(c in s for c in FORBIDDEN_SYMBOL_CHARS):
            raise ConfigError(f"{name} contains a reserved or malformed symbol: {s!r}")
    if END not in symbols:
        raise ConfigError(f"{name} must contain {END}")


@dataclass(frozen=True)
class SymbolSets:
    sigma1: Tuple[str, ...]
    sigma2: Tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "sigma1", tuple(self.sigma1))
        object.__setattr__(self, "sigma2", tuple(self.sigma2))
        _validate_symbols("sigma1", self.sigma1)
        _validate_symbols("sigma2", self.sigma2)
        if SPADE not in self.sigma1:
            raise ConfigError(f"sigma1 must contain {SPADE}")
        if SPADE in self.sigma2:
            raise ConfigError(f"sigma2 must not contain {SPADE}")
        if len(self.sigma1) < 3:
            raise ConfigError(f"sigma1 needs at least 3 symbols, got {len(self.sigma1)}")
        if len(self.sigma2) < 2:
            raise ConfigError(f"sigma2 needs at least 2 symbols, got {len(self.sigma2)}")

    @property
    def pairs(self) -> List[Tuple[str, str]]:
        return [(s, t) for s in sorted(self.sigma1) for t in sorted(self.sigma2)]

    def prefixes(self, k: int) -> Iterator[Tuple[Tuple[str, ...], Tuple[str, ...]]]:
        """All (lambda prefix, theta prefix) pairs of length k, in sorted order."""
        for lam in product(sorted(self.sigma1), repeat=k):
            for theta in product(sorted(self.sigma2), repeat=k):
                yield lam, theta

    def lam_labels(self, depth: int) -> Iterator[Label]:
        for entries in product(sorted(self.sigma1), repeat=depth):
            yield Label(entries)

    def theta_labels(self, depth: int) -> Iterator[Label]:
        for entries in product(sorted(self.sigma2), repeat=depth):
            yield Label(entries)

    def check_lam(self, lam: Label) -> None:
        for s in lam:
            if s != WILDCARD and s not in self.sigma1:
                raise ValueError(f"unknown lambda symbol {s!r}")

    def check_theta(self, theta: Label) -> None:
        for s in theta:
            if s != WILDCARD and s not in self.sigma2:
                raise ValueError(f"unknown theta symbol {s!r}")
