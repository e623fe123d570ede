import logging
import threading

from fractions import Fraction
from typing import Dict, Iterator, List, Tuple

from src.consts import SPADE, WILDCARD
from src.exceptions import DepthError, WindowError
from src.graph_params.params import Params
from src.graph_params.symbols import Label
from src.doubling_graph.vertex import Edge, EdgePoint, Point, VertexClass, VertexKind

logger = logging.getLogger(__name__)


class GraphTruncation:
    """Finite piece of the graph: positions in the window, labels of support <= depth.

    Vertices are interned on demand and adjacency is cached, both under a lock, so
    queries may expand the truncation lazily. `freeze()` expands the whole window.
    """

    def __init__(self, params: Params):
        self.params = params
        self.scales = params.scales
        self.symbols = params.symbols
        self.weights = params.weights
        self.depth = params.truncation.depth
        self.m_lo, self.m_hi = params.truncation.window
        self._vertices: Dict[Tuple[int, Label, Label], VertexClass] = {}
        self._adjacency: Dict[VertexClass, Tuple[Edge, ...]] = {}
        self._lock = threading.Lock()
        self._frozen = False

    @property
    def frozen(self) -> bool:
        return self._frozen

    def in_window(self, m: int) -> bool:
        return self.m_lo <= m <= self.m_hi

    def _check_label(self, label: Label, order: int, name: str) -> None:
        if len(label) > self.depth:
            raise DepthError(f"{name} label {label.key()} has support {len(label)} beyond depth {self.depth}")
        for n in label.wildcard_positions():
            if n != order:
                raise ValueError(f"{name} label {label.key()} has a wildcard at entry {n}, not at the order {order}")

    def classify(self, m: int, lam: Label) -> Tuple[VertexKind, int]:
        t = self.scales.ord(m)
        if t == 0:
            return VertexKind.PLAIN, 0
        if t == 1 or all(lam.at(j) == SPADE for j in range(1, t)):
            return VertexKind.SOCKET, t
        return VertexKind.GLUING, t

    def normalize(self, m: int, lam: Label, theta: Label) -> VertexClass:
        if not self.in_window(m):
            raise WindowError(f"position {m} outside window [{self.m_lo}, {self.m_hi}]")
        lam, theta = Label(lam), Label(theta)
        kind, t = self.classify(m, lam)
        self._check_label(lam, t, "lambda")
        self._check_label(theta, t, "theta")
        self.symbols.check_lam(lam)
        self.symbols.check_theta(theta)
        # entries past the depth are END on every stored line, nothing to forget there
        if t <= self.depth:
            if kind is not VertexKind.PLAIN:
                lam = lam.with_entry(t, WILDCARD)
            if kind is VertexKind.SOCKET:
                theta = theta.with_entry(t, WILDCARD)
        elif WILDCARD in lam or WILDCARD in theta:
            raise ValueError(f"wildcard at order {t} beyond depth {self.depth}")
        key = (m, lam, theta)
        vertex = self._vertices.get(key)
        if vertex is None:
            with self._lock:
                vertex = self._vertices.setdefault(key, VertexClass(m, lam, theta, kind, t))
        return vertex

    def point(self, position: Fraction, lam: Label, theta: Label) -> Point:
        position = Fraction(position)
        if position.denominator == 1:
            return self.normalize(int(position), lam, theta)
        m = position.numerator // position.denominator
        return EdgePoint(self.edge(m, lam, theta), position - m)

    def fiber(self, v: VertexClass) -> List[Tuple[Label, Label]]:
        lam_options = [v.lam]
        theta_options = [v.theta]
        if WILDCARD in v.lam:
            lam_options = [v.lam.with_entry(v.order, s) for s in self.symbols.sigma1]
        if WILDCARD in v.theta:
            theta_options = [v.theta.with_entry(v.order, s) for s in self.symbols.sigma2]
        return sorted((lam, theta) for lam in lam_options for theta in theta_options)

    def edge(self, m: int, lam: Label, theta: Label) -> Edge:
        lam, theta = Label(lam), Label(theta)
        if WILDCARD in lam or WILDCARD in theta:
            raise ValueError(f"edge labels must be fully determined, got {lam.key()} / {theta.key()}")
        left = self.normalize(m, lam, theta)
        right = self.normalize(m + 1, lam, theta)
        return Edge(m, lam, theta, left, right)

    def neighbors(self, v: VertexClass) -> Tuple[Edge, ...]:
        cached = self._adjacency.get(v)
        if cached is not None:
            return cached
        edges = []
        for lam, theta in self.fiber(v):
            if self.in_window(v.m - 1):
                edges.append(self.edge(v.m - 1, lam, theta))
            if self.in_window(v.m + 1):
                edges.append(self.edge(v.m, lam, theta))
        edges.sort(key=Edge.sort_key)
        result = tuple(edges)
        with self._lock:
            self._adjacency.setdefault(v, result)
        return result

    def adjacent(self, v: VertexClass) -> Iterator[Tuple[Edge, VertexClass]]:
        for e in self.neighbors(v):
            yield e, e.other(v)

    def valence(self, v: VertexClass) -> int:
        return len(self.neighbors(v))

    def vertices_at(self, m: int) -> List[VertexClass]:
        classes = {
            self.normalize(m, lam, theta)
            for lam in self.symbols.lam_labels(self.depth)
            for theta in self.symbols.theta_labels(self.depth)
        }
        return sorted(classes, key=VertexClass.sort_key)

    def freeze(self) -> None:
        """Intern every class in the window and cache its adjacency."""
        if self._frozen:
            return
        for m in range(self.m_lo, self.m_hi + 1):
            for v in self.vertices_at(m):
                self.neighbors(v)
        self._frozen = True
        logger.info(f"Truncation frozen: {len(self._vertices)} vertices in [{self.m_lo}, {self.m_hi}] at depth {self.depth}")

    def known_vertices(self) -> List[VertexClass]:
        return sorted(self._vertices.values(), key=VertexClass.sort_key)

    def known_edges(self) -> List[Edge]:
        edges = {e for edges in list(self._adjacency.values()) for e in edges}
        return sorted(edges, key=Edge.sort_key)

    def is_boundary(self, v: VertexClass) -> bool:
        return v.m in (self.m_lo, self.m_hi)


def order_separation_violations(truncation: GraphTruncation, sample: List[VertexClass]) -> List[Tuple[VertexClass, VertexClass, int]]:
    """Pairs of sampled vertices with different orders closer than sigma_min(orders)."""
    from src.geodesy.distance import bfs_distances

    violations = []
    for v in sample:
        dist = bfs_distances(truncation, v, radius=truncation.scales.sigma(v.order))
        for w in sample:
            if w.order == v.order or w not in dist:
                continue
            bound = truncation.scales.sigma(min(v.order, w.order))
            if dist[w] < bound:
                violations.append((v, w, dist[w]))
    return violations
