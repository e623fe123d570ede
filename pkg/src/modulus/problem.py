import logging

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Hashable, List, Optional, Sequence

import networkx as nx
import numpy as np

from src.consts import DEFAULT_PAIR_MEASURE_C
from src.exceptions import DisconnectedError
from src.doubling_graph.truncation import GraphTruncation
from src.doubling_graph.vertex import Edge, EdgePoint, Point
from src.geodesy.boxes import Box
from src.measure.riesz import PairMeasure, pair_measure

logger = logging.getLogger(__name__)


@dataclass
class ModulusProblem:
    """Mod_P of the paths joining `source` to `target` in `graph` against the edge measure `nu`.

    Every graph edge carries a `var` attribute (the key of its density value in `nu`)
    and a `length`. Several graph edges may share a variable, as the two halves of an
    edge split at an interior endpoint do.
    """
    graph: nx.Graph
    source: Hashable
    target: Hashable
    P: float
    nu: Dict[Hashable, float]
    d: float = 1.0
    pair: Optional[PairMeasure] = field(default=None, repr=False)

    def __post_init__(self):
        if self.P < 1:
            raise ValueError(f"the modulus exponent must be >= 1, got {self.P}")
        if self.source == self.target:
            raise ValueError("the modulus needs two distinct endpoints")
        self.variables: List[Hashable] = list(self.nu)
        self.index: Dict[Hashable, int] = {v: i for i, v in enumerate(self.variables)}
        self.weights = np.array([float(self.nu[v]) for v in self.variables])
        if np.any(self.weights <= 0):
            raise ValueError("the background measure must be positive on every variable")

    @property
    def Q(self) -> float:
        return float("inf") if self.P == 1 else self.P / (self.P - 1)

    @property
    def size(self) -> int:
        return len(self.variables)

    def check_connected(self) -> None:
        for node in (self.source, self.target):
            if node not in self.graph:
                raise DisconnectedError(f"{_name(node)} is not in the support of the background measure")
        if not nx.has_path(self.graph, self.source, self.target):
            raise DisconnectedError(f"no path joins {_name(self.source)} to {_name(self.target)} in the support")

    def path_row(self, nodes: Sequence[Hashable]) -> np.ndarray:
        """Length of the path inside each variable."""
        row = np.zeros(self.size)
        for u, v in zip(nodes, nodes[1:]):
            data = self.graph.edges[u, v]
            row[self.index[data["var"]]] += data["length"]
        return row

    def objective(self, g: np.ndarray) -> float:
        if self.P == 1:
            return float(self.weights @ g)
        return float(self.weights @ np.power(g, self.P))

    def restricted(self, keep) -> "ModulusProblem":
        """Same problem on the edges whose variable satisfies `keep`."""
        graph = nx.Graph()
        graph.add_nodes_from([self.source, self.target])
        for u, v, data in self.graph.edges(data=True):
            if keep(data["var"]):
                graph.add_edge(u, v, **data)
        nu = {var: self.nu[var] for var in self.variables if keep(var)}
        return ModulusProblem(graph, self.source, self.target, self.P, nu, d=self.d, pair=self.pair)


def _name(node: Hashable) -> str:
    return node.key() if hasattr(node, "key") else str(node)


def graph_problem(graph: nx.Graph, source: Hashable, target: Hashable, P: float, weight: str = "nu") -> ModulusProblem:
    """Modulus problem on a plain graph: one variable per edge, unit lengths, masses from `weight` (default 1)."""
    g = nx.Graph()
    g.add_nodes_from(sorted(graph.nodes, key=str))
    nu: Dict[Hashable, float] = {}
    for u, v, data in sorted(graph.edges(data=True), key=lambda e: (str(e[0]), str(e[1]))):
        var = tuple(sorted((u, v), key=str))
        nu[var] = float(data.get(weight, 1.0))
        g.add_edge(u, v, var=var, length=1.0)
    return ModulusProblem(g, source, target, P, nu)


def _attach(graph: nx.Graph, p: Point, nu: Dict[Hashable, float]) -> None:
    if isinstance(p, EdgePoint) and p.edge in nu:
        e = p.edge
        graph.add_edge(e.left, p, var=e, length=float(p.offset))
        graph.add_edge(p, e.right, var=e, length=float(1 - p.offset))


def modulus_problem(truncation: GraphTruncation, p: Point, q: Point, P: float, C: float = DEFAULT_PAIR_MEASURE_C,
                    box: Optional[Box] = None) -> ModulusProblem:
    """Paths from p to q inside the support of the pair measure, optionally inside `box` as well.

    Edges have their covered length inside B(p, Cd) u B(q, Cd).
    """
    pair = pair_measure(truncation, p, q, C)
    graph = nx.Graph()
    nu: Dict[Hashable, float] = {}

    def inside(e: Edge) -> bool:
        if box is None:
            return True
        return (box.contains_coordinates(Fraction(e.m), e.lam, e.theta)
                and box.contains_coordinates(Fraction(e.m + 1), e.lam, e.theta))

    for e, mass in pair.measure.items():
        if not inside(e):
            continue
        nu[e] = float(mass)
        graph.add_edge(e.left, e.right, var=e, length=float(pair.lengths[e]))
    for point in (p, q):
        _attach(graph, point, nu)
    logger.debug(f"modulus problem {p.key()} ~ {q.key()}: {graph.number_of_nodes()} nodes, {len(nu)} edges, P={P}")
    return ModulusProblem(graph, p, q, P, nu, d=float(pair.d), pair=pair)
