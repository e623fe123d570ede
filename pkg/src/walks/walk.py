import re

from collections import Counter
from typing import Dict, Iterable, List, Mapping, NamedTuple, Optional, Sequence, Tuple

from src.exceptions import LiftError, PreconditionError, WindowError
from src.graph_params.symbols import Label, label_le
from src.consts import WILDCARD
from src.doubling_graph.truncation import GraphTruncation
from src.doubling_graph.vertex import Edge, VertexClass


class Switch(NamedTuple):
    field: str
    position: int
    old: str
    new: str


class Piece(NamedTuple):
    """A named stretch of a walk between vertex indices start and end."""
    kind: str
    start: int
    end: int
    order: int
    pivot: int = -1


SwitchMap = Dict[int, Tuple[Switch, ...]]


def edge_switches(prev: Edge, nxt: Edge) -> Tuple[Switch, ...]:
    out = [Switch("lam", n, prev.lam.at(n), nxt.lam.at(n)) for n in prev.lam.differing_entries(nxt.lam)]
    out += [Switch("theta", n, prev.theta.at(n), nxt.theta.at(n)) for n in prev.theta.differing_entries(nxt.theta)]
    return tuple(out)


def merge_switches(*groups: Iterable[Switch]) -> Tuple[Switch, ...]:
    merged: Dict[Tuple[str, int], Switch] = {}
    for group in groups:
        for s in group:
            current = merged.get((s.field, s.position))
            if current is None or (current.old == current.new and s.old != s.new):
                merged[(s.field, s.position)] = s
    return tuple(sorted(merged.values()))


class Walk:
    """Alternating vertex/edge string.

    `switches` records label changes between consecutive edges, keyed by the vertex
    index where they happen; entries with old == new are forced switches that a
    lift must replay. `markers` name vertex indices, `pieces` name stretches.
    Equality only looks at vertices and edges.
    """

    __slots__ = ("vertices", "edges", "markers", "switches", "pieces", "_hash", "_sort_key")

    def __init__(self, vertices: Sequence[VertexClass], edges: Sequence[Edge],
                 markers: Optional[Mapping[str, int]] = None,
                 switches: Optional[Mapping[int, Iterable[Switch]]] = None,
                 pieces: Iterable[Piece] = ()):
        self.vertices: Tuple[VertexClass, ...] = tuple(vertices)
        self.edges: Tuple[Edge, ...] = tuple(edges)
        if len(self.vertices) != len(self.edges) + 1:
            raise ValueError(f"a walk with {len(self.edges)} edges needs {len(self.edges) + 1} vertices")
        for i, e in enumerate(self.edges):
            a, b = self.vertices[i], self.vertices[i + 1]
            if not ((a == e.left and b == e.right) or (a == e.right and b == e.left)):
                raise ValueError(f"edge {i} ({e.key()}) does not join {a.key()} and {b.key()}")
        self.markers: Dict[str, int] = dict(markers or {})
        for name, index in self.markers.items():
            if not 0 <= index <= len(self.edges):
                raise ValueError(f"marker {name} at {index} outside walk of length {len(self.edges)}")
        if switches is None:
            switches = {i: edge_switches(self.edges[i - 1], self.edges[i]) for i in range(1, len(self.edges))}
        self.switches: SwitchMap = {i: tuple(s) for i, s in switches.items() if s}
        self.pieces: Tuple[Piece, ...] = tuple(pieces)
        self._hash = hash((self.vertices, self.edges))
        self._sort_key = None

    @classmethod
    def single(cls, v: VertexClass) -> "Walk":
        return cls((v,), ())

    @property
    def length(self) -> int:
        return len(self.edges)

    def __len__(self) -> int:
        return len(self.edges)

    @property
    def start(self) -> VertexClass:
        return self.vertices[0]

    @property
    def end(self) -> VertexClass:
        return self.vertices[-1]

    @property
    def positions(self) -> Tuple[int, ...]:
        return tuple(v.m for v in self.vertices)

    @property
    def direction(self) -> int:
        """+1 when monotone increasing, -1 when monotone decreasing, else 0."""
        steps = {b.m - a.m for a, b in zip(self.vertices, self.vertices[1:])}
        return steps.pop() if len(steps) == 1 else 0

    @property
    def is_monotone(self) -> bool:
        return self.direction != 0

    def has_constant_labels(self) -> bool:
        return len({(e.lam, e.theta) for e in self.edges}) <= 1

    def crossings(self) -> Counter:
        return Counter(self.edges)

    def sort_key(self) -> Tuple:
        if self._sort_key is None:
            self._sort_key = (self.start.sort_key(),) + tuple(e.sort_key() for e in self.edges)
        return self._sort_key

    def tau_markers(self) -> Dict[int, int]:
        """{i: index} for every marker named tau_i (possibly prefixed)."""
        out = {}
        for name, index in self.markers.items():
            match = re.search(r"(?:^|\.)tau_(\d+)$", name)
            if match:
                out[int(match.group(1))] = index
        return out

    def subwalk(self, i: int, j: int) -> "Walk":
        if not 0 <= i <= j <= self.length:
            raise ValueError(f"subwalk [{i}, {j}] outside walk of length {self.length}")
        return Walk(
            self.vertices[i:j + 1],
            self.edges[i:j],
            markers={n: k - i for n, k in self.markers.items() if i <= k <= j},
            switches={k - i: s for k, s in self.switches.items() if i <= k <= j},
            pieces=[Piece(p.kind, p.start - i, p.end - i, p.order, p.pivot - i if p.pivot >= 0 else -1)
                    for p in self.pieces if i <= p.start and p.end <= j],
        )

    def prefixed(self, prefix: str) -> "Walk":
        return Walk(self.vertices, self.edges, {prefix + n: k for n, k in self.markers.items()},
                    self.switches, self.pieces)

    def bare(self) -> "Walk":
        return Walk(self.vertices, self.edges, switches=self.switches)

    def with_pieces(self, pieces: Iterable[Piece]) -> "Walk":
        return Walk(self.vertices, self.edges, self.markers, self.switches, tuple(self.pieces) + tuple(pieces))

    def with_markers(self, markers: Mapping[str, int]) -> "Walk":
        merged = dict(self.markers)
        merged.update(markers)
        return Walk(self.vertices, self.edges, merged, self.switches, self.pieces)

    def to_dict(self) -> Dict:
        return {
            "length": self.length,
            "vertices": [v.key() for v in self.vertices],
            "edges": [e.key() for e in self.edges],
            "markers": dict(sorted(self.markers.items())),
            "pieces": [p._asdict() for p in self.pieces],
        }

    def __eq__(self, other) -> bool:
        if not isinstance(other, Walk):
            return NotImplemented
        return self._hash == other._hash and self.vertices == other.vertices and self.edges == other.edges

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Walk({self.start.key()} -> {self.end.key()}, len={self.length})"


def concat(w1: Walk, w2: Walk) -> Walk:
    if w1.end != w2.start:
        raise ValueError(f"cannot concatenate: {w1.end.key()} != {w2.start.key()}")
    clash = set(w1.markers) & set(w2.markers)
    if clash:
        raise ValueError(f"marker names used by both walks: {sorted(clash)}")
    shift = w1.length
    switches: Dict[int, Tuple[Switch, ...]] = dict(w1.switches)
    for i, s in w2.switches.items():
        switches[i + shift] = merge_switches(switches.get(i + shift, ()), s)
    if w1.length and w2.length:
        switches[shift] = merge_switches(edge_switches(w1.edges[-1], w2.edges[0]), switches.get(shift, ()))
    markers = dict(w1.markers)
    markers.update({n: i + shift for n, i in w2.markers.items()})
    pieces = list(w1.pieces) + [
        Piece(p.kind, p.start + shift, p.end + shift, p.order, p.pivot + shift if p.pivot >= 0 else -1)
        for p in w2.pieces
    ]
    return Walk(w1.vertices + w2.vertices[1:], w1.edges + w2.edges, markers, switches, pieces)


def reverse(w: Walk) -> Walk:
    L = w.length
    return Walk(
        w.vertices[::-1],
        w.edges[::-1],
        markers={n: L - i for n, i in w.markers.items()},
        switches={L - i: tuple(Switch(s.field, s.position, s.new, s.old) for s in group)
                  for i, group in w.switches.items()},
        pieces=[Piece(p.kind, L - p.end, L - p.start, p.order, L - p.pivot if p.pivot >= 0 else -1)
                for p in reversed(w.pieces)],
    )


class WalkBuilder:
    """Steps along the current line (lam, theta), switching lines only through the current vertex."""

    def __init__(self, truncation: GraphTruncation, start: VertexClass, lam: Label, theta: Label):
        lam, theta = Label(lam), Label(theta)
        if (lam, theta) not in truncation.fiber(start):
            raise PreconditionError(f"line {lam.key()} / {theta.key()} does not pass through {start.key()}")
        self._truncation = truncation
        self._position = start.m
        self._lam, self._theta = lam, theta
        self._vertices: List[VertexClass] = [start]
        self._edges: List[Edge] = []
        self._markers: Dict[str, int] = {}
        self._forced: Dict[int, List[Switch]] = {}

    @property
    def position(self) -> int:
        return self._position

    @property
    def lam(self) -> Label:
        return self._lam

    @property
    def theta(self) -> Label:
        return self._theta

    @property
    def index(self) -> int:
        return len(self._edges)

    @property
    def current(self) -> VertexClass:
        return self._vertices[-1]

    def step(self, direction: int) -> VertexClass:
        nxt = self._position + direction
        if not self._truncation.in_window(nxt):
            raise WindowError(f"walk leaves the window at position {nxt}")
        edge = self._truncation.edge(min(self._position, nxt), self._lam, self._theta)
        self._edges.append(edge)
        self._vertices.append(edge.right if direction > 0 else edge.left)
        self._position = nxt
        return self._vertices[-1]

    def walk_to(self, target: int) -> None:
        direction = 1 if target > self._position else -1
        while self._position != target:
            self.step(direction)

    def switch(self, lam: Optional[Label] = None, theta: Optional[Label] = None,
               forced: Iterable[Tuple[str, int]] = ()) -> None:
        new_lam = Label(lam) if lam is not None else self._lam
        new_theta = Label(theta) if theta is not None else self._theta
        if (new_lam, new_theta) not in self._truncation.fiber(self.current):
            raise PreconditionError(
                f"line {new_lam.key()} / {new_theta.key()} does not pass through {self.current.key()}")
        recorded = self._forced.setdefault(self.index, [])
        for field, position in forced:
            old = (self._lam if field == "lam" else self._theta).at(position)
            new = (new_lam if field == "lam" else new_theta).at(position)
            recorded.append(Switch(field, position, old, new))
        self._lam, self._theta = new_lam, new_theta

    def mark(self, name: str) -> None:
        self._markers[name] = self.index

    def build(self) -> Walk:
        switches = {i: edge_switches(self._edges[i - 1], self._edges[i]) for i in range(1, len(self._edges))}
        for i, group in self._forced.items():
            switches[i] = merge_switches(switches.get(i, ()), group)
        return Walk(self._vertices, self._edges, self._markers, switches)


def straight_walk(truncation: GraphTruncation, start: VertexClass, lam: Label, theta: Label, target: int) -> Walk:
    builder = WalkBuilder(truncation, start, lam, theta)
    builder.walk_to(target)
    return builder.build()


def lift(truncation: GraphTruncation, w: Walk, w0p: VertexClass) -> Walk:
    """Lift of `w` from `w0p`: follow the pi-trace of `w`, replaying its recorded switches.

    Wildcards of the start are resolved from the first edge of `w`; elsewhere the
    lift keeps its own labels.
    """
    if w0p.m != w.start.m:
        raise LiftError(f"lift start {w0p.key()} is not above {w.start.key()}")
    if w.length == 0:
        return Walk.single(w0p)
    first = w.edges[0]
    lam, theta = w0p.lam, w0p.theta
    if WILDCARD in lam:
        lam = lam.with_entry(w0p.order, first.lam.at(w0p.order))
    if WILDCARD in theta:
        theta = theta.with_entry(w0p.order, first.theta.at(w0p.order))
    builder = WalkBuilder(truncation, w0p, lam, theta)
    for i, edge in enumerate(w.edges):
        group = w.switches.get(i, ()) if i > 0 else ()
        if group:
            new_lam, new_theta = builder.lam, builder.theta
            for s in group:
                if s.field == "lam":
                    new_lam = new_lam.with_entry(s.position, s.new)
                else:
                    new_theta = new_theta.with_entry(s.position, s.new)
            try:
                builder.switch(new_lam, new_theta, forced=[(s.field, s.position) for s in group])
            except PreconditionError as e:
                raise LiftError(f"lift from {w0p.key()} cannot replay the switch at step {i}: {e}") from e
        builder.step(1 if edge.m == builder.position else -1)
    lifted = builder.build()
    return Walk(lifted.vertices, lifted.edges, w.markers, lifted.switches, w.pieces)


def label_monotone(w: Walk, increasing: bool) -> bool:
    for prev, nxt in zip(w.edges, w.edges[1:]):
        ok = label_le(prev.lam, nxt.lam) if increasing else label_le(nxt.lam, prev.lam)
        if not ok:
            return False
    return True
