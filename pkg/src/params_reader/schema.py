from fractions import Fraction
from typing import Dict, List, Optional, Tuple, Union

from pydantic import BaseModel, Field, field_validator

from src.consts import DEFAULT_MAX_PATHS, DEFAULT_PAIR_MEASURE_C, DEFAULT_SEPARATION_TOL
from src.graph_params.params import ExperimentConstants, Params
from src.graph_params.scales import ScaleTable
from src.graph_params.symbols import SymbolSets
from src.graph_params.truncation import TruncationSpec
from src.graph_params.weights import WeightTable


class ConstantsSchema(BaseModel):
    pair_measure_c: float = Field(default=DEFAULT_PAIR_MEASURE_C, gt=0)
    j_cut: Optional[int] = Field(default=None, ge=1)
    ball_box_c: Optional[int] = Field(default=None, ge=1)
    separation_tol: float = Field(default=DEFAULT_SEPARATION_TOL, gt=0)
    max_paths: int = Field(default=DEFAULT_MAX_PATHS, ge=1)


class ConstantM(BaseModel):
    constant: int = Field(ge=2)


class ParamsSchema(BaseModel):
    N: int = Field(ge=2)
    m: Union[List[int], ConstantM]
    sigma1: List[str]
    sigma2: List[str]
    weights: Dict[str, Union[int, float, str]]
    depth: int = Field(ge=1)
    window: Tuple[int, int]
    constants: ConstantsSchema = Field(default_factory=ConstantsSchema)

    @field_validator("weights")
    @classmethod
    def _weights_positive(cls, weights):
        for symbol, raw in weights.items():
            try:
                value = Fraction(str(raw))
            except (ValueError, ZeroDivisionError):
                raise ValueError(f"weight of {symbol!r} is not a rational number: {raw!r}")
            if value <= 0:
                raise ValueError(f"weight of {symbol!r} must be positive (w > 0), got {raw}")
        return weights

    def to_params(self) -> Params:
        symbols = SymbolSets(tuple(self.sigma1), tuple(self.sigma2))
        if isinstance(self.m, ConstantM):
            scales = ScaleTable(N=self.N, m=(self.m.constant,), constant=True)
        else:
            scales = ScaleTable(N=self.N, m=tuple(self.m))
        weights = WeightTable.from_mapping({s: Fraction(str(v)) for s, v in self.weights.items()}, symbols)
        return Params(
            symbols=symbols,
            scales=scales,
            weights=weights,
            truncation=TruncationSpec(depth=self.depth, window=self.window),
            constants=ExperimentConstants(**self.constants.model_dump()),
        )
