import hashlib
import json
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any, Dict, Optional, Tuple

from src.consts import DEFAULT_MAX_PATHS, DEFAULT_PAIR_MEASURE_C, DEFAULT_SEPARATION_TOL
from src.graph_params.scales import ScaleTable
from src.graph_params.symbols import SymbolSets
from src.graph_params.truncation import TruncationSpec
from src.graph_params.weights import WeightTable


@dataclass(frozen=True)
class ExperimentConstants:
    pair_measure_c: float = DEFAULT_PAIR_MEASURE_C
    j_cut: Optional[int] = None
    ball_box_c: Optional[int] = None
    separation_tol: float = DEFAULT_SEPARATION_TOL
    max_paths: int = DEFAULT_MAX_PATHS


@dataclass(frozen=True)
class Params:
    symbols: SymbolSets
    scales: ScaleTable
    weights: WeightTable
    truncation: TruncationSpec
    constants: ExperimentConstants = field(default_factory=ExperimentConstants)

    def __post_init__(self):
        self.truncation.validate(self.scales)

    @property
    def depth(self) -> int:
        return self.truncation.depth

    @property
    def window(self) -> Tuple[int, int]:
        return self.truncation.window

    def with_constants(self, **overrides) -> "Params":
        return replace(self, constants=replace(self.constants, **overrides))

    def to_dict(self) -> Dict[str, Any]:
        m: Any = {"constant": self.scales.m[0]} if self.scales.constant else list(self.scales.m)
        return {
            "N": self.scales.N,
            "m": m,
            "sigma1": list(self.symbols.sigma1),
            "sigma2": list(self.symbols.sigma2),
            "weights": {s: _fraction_str(v) for s, v in self.weights.items},
            "depth": self.truncation.depth,
            "window": list(self.truncation.window),
            "constants": {
                "pair_measure_c": self.constants.pair_measure_c,
                "j_cut": self.constants.j_cut,
                "ball_box_c": self.constants.ball_box_c,
                "separation_tol": self.constants.separation_tol,
                "max_paths": self.constants.max_paths,
            },
        }

    def digest(self) -> str:
        payload = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()[:16]


def _fraction_str(value: Fraction) -> str:
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


def make_params(m: int = 2, sigma1=("END", "SPADE", "a"), sigma2=("END", "b"), weights=None,
                depth: int = 3, window: Optional[Tuple[int, int]] = None, **constants) -> Params:
    """Small parameter sets with constant m, used by demos and tests."""
    symbols = SymbolSets(tuple(sigma1), tuple(sigma2))
    scales = ScaleTable.constant_m(m)
    table = {s: Fraction(1) for s in set(symbols.sigma1) | set(symbols.sigma2)}
    table.update({s: Fraction(v) for s, v in (weights or {}).items()})
    if window is None:
        half = 2 * scales.sigma(depth)
        window = (-half, half)
    return Params(
        symbols=symbols,
        scales=scales,
        weights=WeightTable.from_mapping(table, symbols),
        truncation=TruncationSpec(depth=depth, window=window),
        constants=ExperimentConstants(**constants),
    )
