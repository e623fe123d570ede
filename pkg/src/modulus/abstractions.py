from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Dict, Hashable, List, Sequence, Tuple

import numpy as np

from src.modulus.problem import ModulusProblem

Path = Tuple[Hashable, ...]


@dataclass
class ModulusCertificate:
    """Admissible density for every path of the problem, with the bounds it certifies.

    `value` is the objective of `density` (an upper bound on the modulus), `lower`
    the dual value on the path set `paths` (a lower bound).
    """
    variables: List[Hashable]
    density: np.ndarray
    paths: List[Path]
    value: float
    lower: float
    iterations: int
    multipliers: np.ndarray

    @property
    def gap(self) -> float:
        return max(0.0, self.value - self.lower)

    def g(self, var: Hashable) -> float:
        return float(self.density[self.variables.index(var)])

    def as_dict(self) -> Dict[Hashable, float]:
        return {var: float(x) for var, x in zip(self.variables, self.density)}

    def path_length(self, problem: ModulusProblem, nodes: Sequence[Hashable]) -> float:
        return float(problem.path_row(nodes) @ self.density)

    def active_paths(self, threshold: float = 0.0) -> List[Path]:
        return [p for p, lam in zip(self.paths, self.multipliers) if lam > threshold]

    def to_dict(self) -> Dict:
        return {
            "value": self.value,
            "lower": self.lower,
            "gap": self.gap,
            "iterations": self.iterations,
            "paths": len(self.paths),
            "active_paths": len(self.active_paths()),
            "density": {_name(var): float(x) for var, x in zip(self.variables, self.density) if x > 0},
        }


def _name(var: Hashable) -> str:
    return var.key() if hasattr(var, "key") else str(var)


class IModulusSolver(ABC):
    @abstractmethod
    def solve(self, problem: ModulusProblem) -> ModulusCertificate:
        ...
