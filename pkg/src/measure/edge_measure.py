from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Mapping, Tuple, Union

from src.graph_params.weights import WeightTable, label_weight
from src.doubling_graph.vertex import Edge

Mass = Union[Fraction, float]


class EdgeMeasure:
    """Finite measure given by a mass per unit edge. Masses are Fractions for exact measures, floats for derived ones."""

    def __init__(self, masses: Mapping[Edge, Mass]):
        self._masses: Dict[Edge, Mass] = {e: m for e, m in masses.items() if m != 0}
        for e, m in self._masses.items():
            if m < 0:
                raise ValueError(f"negative mass {m} on edge {e.key()}")

    def mass(self, e: Edge) -> Mass:
        return self._masses.get(e, 0)

    def __getitem__(self, e: Edge) -> Mass:
        return self.mass(e)

    def __contains__(self, e: Edge) -> bool:
        return e in self._masses

    def __len__(self) -> int:
        return len(self._masses)

    def support(self) -> List[Edge]:
        return sorted(self._masses, key=Edge.sort_key)

    def items(self) -> Iterator[Tuple[Edge, Mass]]:
        for e in self.support():
            yield e, self._masses[e]

    def total(self) -> Mass:
        return sum(self._masses.values(), Fraction(0))

    def __add__(self, other: "EdgeMeasure") -> "EdgeMeasure":
        masses = dict(self._masses)
        for e, m in other._masses.items():
            masses[e] = masses.get(e, 0) + m
        return EdgeMeasure(masses)

    def scaled(self, factor: Mass) -> "EdgeMeasure":
        return EdgeMeasure({e: m * factor for e, m in self._masses.items()})

    def restricted(self, edges: Iterable[Edge]) -> "EdgeMeasure":
        keep = set(edges)
        return EdgeMeasure({e: m for e, m in self._masses.items() if e in keep})

    def __eq__(self, other) -> bool:
        if not isinstance(other, EdgeMeasure):
            return NotImplemented
        return self._masses == other._masses

    def to_dict(self) -> Dict[str, str]:
        return {e.key(): str(m) for e, m in self.items()}


def base_mass(e: Edge, w: WeightTable) -> Fraction:
    return label_weight(e.lam, w) * label_weight(e.theta, w)


def base_measure(edges: Iterable[Edge], w: WeightTable) -> EdgeMeasure:
    return EdgeMeasure({e: base_mass(e, w) for e in edges})
