import math

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict

from src.exceptions import WindowError
from src.doubling_graph.truncation import GraphTruncation
from src.doubling_graph.vertex import Edge, EdgePoint, Point, VertexClass
from src.geodesy.distance import point_distances


@dataclass(frozen=True)
class BallSpec:
    center: Point
    radius: Fraction

    def __post_init__(self):
        object.__setattr__(self, "radius", Fraction(self.radius))
        if self.radius <= 0:
            raise ValueError(f"ball radius must be positive, got {self.radius}")


@dataclass
class Ball:
    spec: BallSpec
    vertices: Dict[VertexClass, Fraction]
    edges: Dict[Edge, Fraction]

    def __contains__(self, v: VertexClass) -> bool:
        return v in self.vertices

    @property
    def size(self) -> int:
        return len(self.vertices)


def covered_length(r: Fraction, du: Fraction, dv: Fraction) -> Fraction:
    """Length of a unit edge with endpoint distances du, dv lying in the open ball of radius r."""
    return min(Fraction(1), max(Fraction(0), r - du) + max(Fraction(0), r - dv))


def ball(truncation: GraphTruncation, spec: BallSpec, allow_boundary: bool = False) -> Ball:
    """Open ball B(center, r): vertices at distance < r and every edge meeting it with its covered length."""
    r = spec.radius
    dist = point_distances(truncation, spec.center, radius=math.ceil(r) + 1)
    vertices = {v: d for v, d in dist.items() if d < r}
    if not allow_boundary:
        touching = [v for v in vertices if truncation.is_boundary(v)]
        if touching:
            raise WindowError(f"ball of radius {r} around {spec.center.key()} reaches the window boundary at {touching[0].key()}")
    edges: Dict[Edge, Fraction] = {}
    for v in vertices:
        for e, w in truncation.adjacent(v):
            if e in edges:
                continue
            du = dist[e.left] if e.left in dist else None
            dv = dist[e.right] if e.right in dist else None
            far = r + 1
            edges[e] = covered_length(r, du if du is not None else far, dv if dv is not None else far)
    if isinstance(spec.center, EdgePoint):
        e0, s0 = spec.center.edge, spec.center.offset
        direct = min(Fraction(1), s0 + r) - max(Fraction(0), s0 - r)
        edges[e0] = max(edges.get(e0, Fraction(0)), min(Fraction(1), direct))
    return Ball(spec=spec, vertices=vertices, edges={e: c for e, c in edges.items() if c > 0})
