import logging

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from src.consts import DEFAULT_MAX_J_CUT, DEFAULT_PAIR_MEASURE_C, SPADE
from src.exceptions import PreconditionError
from src.doubling_graph.truncation import GraphTruncation
from src.doubling_graph.vertex import Point, VertexClass
from src.geodesy.distance import bfs_distances, distance, geodesic_walk
from src.measure.riesz import pair_measure
from src.curves.compression import compression_curve
from src.curves.density_audits import spine_distance
from src.curves.distribution import CurveDistribution, concat_curves, lq_norm
from src.curves.ensembles import string_map
from src.curves.expansion import expansion_curve, expansion_detour, expansion_fits
from src.curves.transport import transport_curve
from src.walks.good_walks import anchor_vertex, good_walk
from src.walks.walk import Walk, WalkBuilder, reverse

logger = logging.getLogger(__name__)


@dataclass
class HalfCurve:
    """Random curve from the start of `walk` to the canonical ensemble of depth `depth` at its end."""
    curve: CurveDistribution
    walk: Walk
    depth: int
    profile: List[Tuple[int, int]] = field(default_factory=list)
    pieces: Counter = field(default_factory=Counter)


@dataclass
class PiCurveReport:
    x: str
    y: str
    z: Optional[str]
    d: Fraction
    P: float
    Q: float
    norm: float
    ratio: float
    depth: int
    expected_length: Fraction
    support_radius: int
    pieces: Dict[str, int]
    profile_x: List[Tuple[int, int]]
    profile_y: List[Tuple[int, int]]

    def to_dict(self) -> Dict:
        return {
            "x": self.x, "y": self.y, "z": self.z, "d": str(self.d), "P": self.P, "Q": self.Q,
            "norm": self.norm, "ratio": self.ratio, "depth": self.depth,
            "expected_length": str(self.expected_length), "support_radius": self.support_radius,
            "pieces": dict(sorted(self.pieces.items())),
            "profile_x": [list(row) for row in self.profile_x],
            "profile_y": [list(row) for row in self.profile_y],
        }


def _expansion_jcut(truncation: GraphTruncation, kappa: int, j_cut: Optional[int]) -> Optional[int]:
    if j_cut is not None:
        return j_cut if expansion_fits(truncation, kappa + 1, truncation.scales.sigma(kappa + j_cut)) else None
    for j in range(1, DEFAULT_MAX_J_CUT + 1):
        if expansion_fits(truncation, kappa + 1, truncation.scales.sigma(kappa + j)):
            return j
    return None


def _insertion_walks(truncation: GraphTruncation, w: Walk, u_index: int, M: int, direction: int) -> Tuple[Walk, ...]:
    """u -> a on the label before u, a -> u back with tau markers, u -> b on the label after u, b -> u with tau markers."""
    u = w.vertices[u_index]
    before, after = w.edges[u_index - 1], w.edges[u_index]
    reach = u.m + direction * (truncation.scales.sigma(M) + 1)

    def out_and_back(lam, theta):
        builder = WalkBuilder(truncation, u, lam, theta)
        builder.walk_to(reach)
        out = builder.build()
        builder = WalkBuilder(truncation, out.end, lam, theta)
        for i in range(M - 1, 0, -1):
            builder.walk_to(u.m + direction * truncation.scales.sigma(i))
            builder.mark(f"tau_{i}")
            builder.switch(lam=builder.lam.with_entry(i, SPADE), forced=[("lam", i)])
        builder.walk_to(u.m)
        return out, builder.build()

    w0, w1 = out_and_back(before.lam, before.theta)
    w2, w3 = out_and_back(after.lam, after.theta)
    return w0, w1, w2, w3


def _compression_pair(truncation: GraphTruncation, down: Walk, up: Walk, k: int, kappa: int,
                      start_law: Dict[VertexClass, Fraction]) -> CurveDistribution:
    """Compression into the socket along `down`, then out along `up` to the tau-image of the start."""
    first = compression_curve(truncation, down, k - kappa, k=k, start_law=start_law)
    tau = string_map(truncation, start_law, up.end, kappa)
    second = compression_curve(truncation, reverse(up), k - kappa, k=k, start_law=tau.push(start_law))
    return concat_curves(first, second.reversed(), coupling=tau)


def half_curve(truncation: GraphTruncation, x: VertexClass, z: VertexClass, cap: int,
               j_cut: Optional[int] = None) -> HalfCurve:
    """Random curve from x to F(z; depth) along a good walk, with depth <= cap."""
    w = good_walk(truncation, x, z)
    result = HalfCurve(curve=CurveDistribution.point_mass(Walk.single(x)), walk=w, depth=0)
    u_index = w.markers.get("u_kmax")
    insertion = None
    if u_index is not None and 0 < u_index < w.length:
        kmax = w.vertices[u_index].order
        if w.edges[u_index - 1].theta.at(kmax) != w.edges[u_index].theta.at(kmax):
            u = w.vertices[u_index]
            M = min(kmax, max(1, truncation.scales.disc_log(distance(truncation, x, u))))
            direction = 1 if u.m >= x.m else -1
            insertion = (u_index, M, direction)
    pending = 0

    def flush(until: int) -> None:
        nonlocal pending
        if until > pending:
            segment = w.subwalk(pending, until)
            moved = transport_curve(truncation, segment, result.depth, start_law=result.curve.end_law())
            result.curve = concat_curves(result.curve, moved)
            result.pieces["transport"] += 1
        pending = max(pending, until)

    def cap_at(index: int) -> int:
        limit = min(cap, truncation.depth)
        if insertion is not None and index < insertion[0]:
            limit = min(limit, insertion[1] - 1)
        return limit

    def expansion_window(lo: int, hi: int, shortest: int, longest: int) -> Optional[Tuple[int, int]]:
        """First (start, end) in [lo, hi] with order-0 ends, one line in between and shortest <= end - start <= longest."""
        for start in range(lo, hi - shortest + 1):
            if w.vertices[start].order != 0:
                continue
            for end in range(start + shortest, min(hi, start + longest) + 1):
                if w.vertices[end].order == 0 and len({(e.lam, e.theta) for e in w.edges[start:end]}) == 1:
                    return start, end
        return None

    def expand_run(lo: int, hi: int) -> None:
        nonlocal pending
        scales = truncation.scales
        while result.depth + 1 <= cap_at(hi - 1):
            j = _expansion_jcut(truncation, result.depth, j_cut)
            if j is None:
                return
            k = result.depth + j
            shortest = max(scales.sigma(k - 1) + 1, expansion_detour(truncation, result.depth + 1))
            found = expansion_window(max(lo, pending, shortest // 2), hi, shortest, scales.sigma(k))
            if found is None:
                return
            start, end = found
            flush(start)
            grown = expansion_curve(truncation, w.subwalk(start, end), j, start_law=result.curve.end_law())
            result.curve = concat_curves(result.curve, grown)
            result.depth += 1
            result.pieces["expansion"] += 1
            result.profile.append((end, result.depth))
            pending = end

    def insert() -> None:
        u_index, M, direction = insertion
        if result.depth > M - 1:
            raise PreconditionError(f"depth {result.depth} too large for the insertion of order {M} at u_kmax")
        flush(u_index)
        w0, w1, w2, w3 = _insertion_walks(truncation, w, u_index, M, direction)
        kappa = result.depth
        outward = transport_curve(truncation, w0, kappa, start_law=result.curve.end_law())
        result.curve = concat_curves(result.curve, outward)
        start_law = result.curve.end_law()
        first = compression_curve(truncation, w1, M - kappa, k=M, start_law=start_law)
        tau = string_map(truncation, start_law, w3.start, kappa)
        second = compression_curve(truncation, w3, M - kappa, k=M, start_law=tau.push(start_law))
        result.curve = concat_curves(result.curve, concat_curves(first, second.reversed(), coupling=tau))
        back = transport_curve(truncation, reverse(w2), kappa, start_law=result.curve.end_law())
        result.curve = concat_curves(result.curve, back)
        result.pieces["insertion"] += 1
        result.profile.append((u_index, result.depth))

    inserted = insertion is None
    for piece in sorted(w.pieces, key=lambda p: p.start):
        if not inserted and piece.start >= insertion[0]:
            insert()
            inserted = True
        if piece.kind == "neck" and piece.order > result.depth:
            flush(piece.start)
            down, up = w.subwalk(piece.start, piece.pivot), w.subwalk(piece.pivot, piece.end)
            law = result.curve.end_law()
            result.curve = concat_curves(result.curve,
                                         _compression_pair(truncation, down, up, piece.order, result.depth, law))
            result.pieces["neck"] += 1
            result.profile.append((piece.end, result.depth))
            pending = piece.end
        elif piece.kind == "glue":
            expand_run(piece.start, piece.pivot)
            expand_run(piece.pivot, piece.end)
        elif piece.kind == "line":
            expand_run(piece.start, piece.end)
    if not inserted:
        insert()
    flush(w.length)
    logger.debug(f"half curve {x.key()} -> {z.key()}: depth {result.depth}, pieces {dict(result.pieces)}")
    return result


def midpoint_vertex(truncation: GraphTruncation, x: VertexClass, y: VertexClass) -> Optional[VertexClass]:
    """Least order-0 vertex z with |d(z, x) - d/2| <= 1 and |d(z, y) - d/2| <= 1."""
    d = Fraction(distance(truncation, x, y))
    radius = int(d / 2) + 2
    from_x = bfs_distances(truncation, x, radius=radius)
    from_y = bfs_distances(truncation, y, radius=radius)
    candidates = [v for v, dx in from_x.items()
                  if v.order == 0 and v in from_y and abs(dx - d / 2) <= 1 and abs(from_y[v] - d / 2) <= 1]
    return min(candidates, key=VertexClass.sort_key) if candidates else None


def pi_random_curve(truncation: GraphTruncation, x: Point, y: Point, P: float,
                    C: float = DEFAULT_PAIR_MEASURE_C, j_cut: Optional[int] = None) -> Tuple[CurveDistribution, PiCurveReport]:
    """Random curve joining x to y built from expansions, compressions and transports, with its norm
    against the pair measure: sum_e (dE||Gamma|| / dmu_{x,y})^Q dmu_{x,y}, Q = P / (P - 1)."""
    if P <= 1:
        raise ValueError(f"P must exceed 1, got {P}")
    Q = P / (P - 1)
    wx, wy = anchor_vertex(x, y), anchor_vertex(y, x)
    d = Fraction(distance(truncation, x, y))
    z = midpoint_vertex(truncation, wx, wy) if d > 4 else None
    pieces: Counter = Counter()
    profile_x: List[Tuple[int, int]] = []
    profile_y: List[Tuple[int, int]] = []
    depth = 0
    if z is None or distance(truncation, wx, z) <= 1 or distance(truncation, wy, z) <= 1:
        curve = CurveDistribution.point_mass(geodesic_walk(truncation, wx, wy))
        pieces["geodesic"] += 1
    else:
        cap = truncation.depth
        while True:
            hx = half_curve(truncation, wx, z, cap, j_cut)
            hy = half_curve(truncation, wy, z, cap, j_cut)
            if hx.depth == hy.depth:
                break
            cap = min(hx.depth, hy.depth)
        depth = hx.depth
        curve = concat_curves(hx.curve, hy.curve.reversed())
        pieces = hx.pieces + hy.pieces
        profile_x, profile_y = hx.profile, hy.profile
    reference = pair_measure(truncation, x, y, C)
    norm = lq_norm(curve, reference.measure, Q)
    radius = spine_distance(truncation, curve, [Walk.single(wx), Walk.single(wy)])
    report = PiCurveReport(
        x=x.key(), y=y.key(), z=z.key() if z is not None else None, d=d, P=P, Q=Q,
        norm=norm, ratio=norm / float(d), depth=depth, expected_length=curve.expected_length(),
        support_radius=radius, pieces=dict(pieces), profile_x=profile_x, profile_y=profile_y,
    )
    logger.info(f"PI curve {x.key()} ~ {y.key()}: d={d}, depth={depth}, norm/d={report.ratio:.4g}")
    return curve, report
