from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Mapping, Tuple

from src.consts import END, SPADE, WILDCARD
from src.exceptions import ConfigError
from src.graph_params.symbols import Label, SymbolSets


@dataclass(frozen=True)
class WeightTable:
    items: Tuple[Tuple[str, Fraction], ...]
    s1: Fraction
    s2: Fraction

    @classmethod
    def from_mapping(cls, weights: Mapping[str, Fraction], symbols: SymbolSets) -> "WeightTable":
        w = {s: Fraction(v) for s, v in weights.items()}
        for s in set(symbols.sigma1) | set(symbols.sigma2):
            if s not in w:
                raise ConfigError(f"missing weight for symbol {s!r}")
        for s, v in w.items():
            if v <= 0:
                raise ConfigError(f"weight of {s!r} must be positive (w > 0), got {v}")
        if w[END] != 1:
            raise ConfigError(f"weight of {END} must be 1, got {w[END]}")
        return cls(
            items=tuple(sorted(w.items())),
            s1=sum((w[s] for s in symbols.sigma1), Fraction(0)),
            s2=sum((w[s] for s in symbols.sigma2), Fraction(0)),
        )

    @classmethod
    def unit(cls, symbols: SymbolSets) -> "WeightTable":
        return cls.from_mapping({s: Fraction(1) for s in set(symbols.sigma1) | set(symbols.sigma2)}, symbols)

    @property
    def w(self) -> Dict[str, Fraction]:
        return dict(self.items)

    def __getitem__(self, symbol: str) -> Fraction:
        for s, v in self.items:
            if s == symbol:
                return v
        raise KeyError(symbol)

    @property
    def spade(self) -> Fraction:
        return self[SPADE]

    def pair(self, lam_symbol: str, theta_symbol: str) -> Fraction:
        return self[lam_symbol] * self[theta_symbol]


def label_weight(label: Label, w: WeightTable) -> Fraction:
    table = w.w
    result = Fraction(1)
    for s in label:
        if s == WILDCARD:
            raise ValueError(f"label {label.key()} has an unresolved wildcard")
        result *= table[s]
    return result


def tail_weight(lam: Label, theta: Label, k: int, w: WeightTable) -> Fraction:
    """prod_{n>k} w(lam(n)) w(theta(n))."""
    table = w.w
    result = Fraction(1)
    for n in range(k + 1, max(len(lam), len(theta)) + 1):
        result *= table[lam.at(n)] * table[theta.at(n)]
    return result
