import hashlib
import json

from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional

from src.consts import EXAMPLE_PARAMS_JSON
from src.exceptions import ConfigError
from src.graph_params.symbols import Label
from src.doubling_graph.truncation import GraphTruncation
from src.doubling_graph.vertex import EdgePoint, Point


@dataclass
class ExperimentConfig:
    """Everything a run depends on: the params file, the subcommand and its options."""
    command: str
    params_path: Path = EXAMPLE_PARAMS_JSON
    options: Dict[str, Any] = field(default_factory=dict)
    seed: Optional[int] = None
    out: Optional[Path] = None

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["params_path"] = str(self.params_path)
        data["out"] = str(self.out) if self.out is not None else None
        return data

    def digest(self) -> str:
        payload = json.dumps(self.to_dict(), sort_keys=True, default=str)
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()[:16]


def parse_point(truncation: GraphTruncation, text: str) -> Point:
    """`m|lam|theta` names a vertex class, `m|lam|theta+offset` a point inside the edge starting there.

    Labels are dot-separated entries, `-` for the all-END label.
    """
    text = text.strip()
    head, plus, offset = text.rpartition("+")
    if not plus:
        head, offset = text, ""
    fields = head.split("|")
    if len(fields) != 3:
        raise ConfigError(f"malformed point {text!r}, expected m|lambda|theta[+offset]")
    try:
        m = int(fields[0])
        lam, theta = Label.parse(fields[1]), Label.parse(fields[2])
        if offset:
            return EdgePoint(truncation.edge(m, lam, theta), Fraction(offset))
        return truncation.normalize(m, lam, theta)
    except ValueError as e:
        raise ConfigError(f"malformed point {text!r}: {e}") from e


def parse_float_list(text: str) -> List[float]:
    try:
        return [float(item) for item in text.split(",") if item.strip()]
    except ValueError as e:
        raise ConfigError(f"malformed number list {text!r}") from e


def parse_int_range(text: str) -> List[int]:
    """`2..5` (inclusive) or a comma list `2,3,5`."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            return list(range(int(lo), int(hi) + 1))
        return [int(item) for item in text.split(",") if item.strip()]
    except ValueError as e:
        raise ConfigError(f"malformed integer range {text!r}") from e
