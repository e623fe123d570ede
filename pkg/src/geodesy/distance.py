import logging

from collections import deque
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Set, Tuple, Union

from src.exceptions import WindowError
from src.doubling_graph.truncation import GraphTruncation
from src.doubling_graph.vertex import Edge, EdgePoint, Point, VertexClass
from src.walks.walk import Walk

logger = logging.getLogger(__name__)

Distance = Union[int, Fraction]


def bfs_distances(truncation: GraphTruncation, source: VertexClass, radius: Optional[int] = None,
                  targets: Optional[Iterable[VertexClass]] = None) -> Dict[VertexClass, int]:
    """Hop distances from `source`, up to `radius` hops, stopping early once all `targets` are settled."""
    return bfs_from_set(truncation, [source], radius=radius, targets=targets)


def bfs_from_set(truncation: GraphTruncation, sources: Iterable[VertexClass], radius: Optional[int] = None,
                 targets: Optional[Iterable[VertexClass]] = None) -> Dict[VertexClass, int]:
    dist: Dict[VertexClass, int] = {}
    queue = deque()
    for s in sources:
        if s not in dist:
            dist[s] = 0
            queue.append(s)
    remaining: Optional[Set[VertexClass]] = set(targets) if targets is not None else None
    while queue:
        v = queue.popleft()
        d = dist[v]
        if remaining is not None:
            remaining.discard(v)
            if not remaining:
                break
        if radius is not None and d >= radius:
            continue
        for _, w in truncation.adjacent(v):
            if w not in dist:
                dist[w] = d + 1
                queue.append(w)
    logger.debug(f"BFS settled {len(dist)} vertices (radius={radius})")
    return dist


def anchors(x: Point) -> List[Tuple[VertexClass, Fraction]]:
    """Vertices through which geodesics leave `x`, with the distance from `x` to each."""
    if isinstance(x, EdgePoint):
        return [(x.edge.left, x.offset), (x.edge.right, 1 - x.offset)]
    return [(x, Fraction(0))]


def _normalized(value: Fraction) -> Distance:
    return int(value) if value.denominator == 1 else value


def point_distances(truncation: GraphTruncation, center: Point, radius: Optional[int] = None) -> Dict[VertexClass, Fraction]:
    """Exact distances from a vertex or edge point to the vertices within `radius` hops of its anchors."""
    out: Dict[VertexClass, Fraction] = {}
    for v, offset in anchors(center):
        for w, d in bfs_distances(truncation, v, radius=radius).items():
            value = offset + d
            if w not in out or value < out[w]:
                out[w] = value
    return out


def distance(truncation: GraphTruncation, x: Point, y: Point, max_radius: Optional[int] = None) -> Distance:
    if x == y:
        return 0
    best: Optional[Fraction] = None
    if isinstance(x, EdgePoint) and isinstance(y, EdgePoint) and x.edge == y.edge:
        best = abs(x.offset - y.offset)
    ys = anchors(y)
    for vx, ox in anchors(x):
        dist = bfs_distances(truncation, vx, radius=max_radius, targets=[v for v, _ in ys])
        for vy, oy in ys:
            if vy in dist:
                candidate = ox + dist[vy] + oy
                if best is None or candidate < best:
                    best = candidate
    if best is None:
        raise WindowError(f"window-limited distance: {y.key()} unreachable from {x.key()} inside the truncation")
    return _normalized(best)


def shortest_path(truncation: GraphTruncation, source: VertexClass, target: VertexClass) -> Walk:
    """BFS path; parents are fixed at first discovery over sorted adjacency, so ties break lexicographically."""
    if source == target:
        return Walk.single(source)
    parent: Dict[VertexClass, Tuple[VertexClass, Edge]] = {source: (source, None)}
    queue = deque([source])
    while queue and target not in parent:
        v = queue.popleft()
        for e, w in sorted(truncation.adjacent(v), key=lambda item: (item[1].sort_key(), item[0].sort_key())):
            if w not in parent:
                parent[w] = (v, e)
                queue.append(w)
    if target not in parent:
        raise WindowError(f"window-limited distance: {target.key()} unreachable from {source.key()}")
    vertices, edges = [target], []
    v = target
    while v != source:
        prev, e = parent[v]
        vertices.append(prev)
        edges.append(e)
        v = prev
    return Walk(vertices[::-1], edges[::-1])


def geodesic_walk(truncation: GraphTruncation, x: Point, y: Point) -> Walk:
    """Walk W from w_x to w_y with d(x,y) = d(x,w_x) + len W + d(y,w_y)."""
    if isinstance(x, VertexClass) and isinstance(y, VertexClass):
        return shortest_path(truncation, x, y)
    ys = anchors(y)
    best = None
    for vx, ox in anchors(x):
        dist = bfs_distances(truncation, vx, targets=[v for v, _ in ys])
        for vy, oy in ys:
            if vy in dist:
                candidate = (ox + dist[vy] + oy, vx.sort_key(), vy.sort_key())
                if best is None or candidate < best[0]:
                    best = (candidate, vx, vy)
    if best is None:
        raise WindowError(f"window-limited distance: {y.key()} unreachable from {x.key()}")
    _, vx, vy = best
    return shortest_path(truncation, vx, vy)
