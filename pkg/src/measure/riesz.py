import logging
import math

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Tuple

from src.consts import DEFAULT_PAIR_MEASURE_C
from src.exceptions import WindowError
from src.doubling_graph.truncation import GraphTruncation
from src.doubling_graph.vertex import Edge, EdgePoint, Point
from src.geodesy.balls import covered_length
from src.geodesy.distance import distance, point_distances
from src.measure.edge_measure import EdgeMeasure, base_mass

logger = logging.getLogger(__name__)


@dataclass
class RieszDensity:
    """d(p, e) / mu(B(p, d(p, e))) at the midpoint of every edge met by B(p, radius).

    `covered` is the length of each edge inside B(p, radius).
    """
    basepoint: Point
    radius: Fraction
    density: Dict[Edge, float]
    covered: Dict[Edge, Fraction]
    reach: Dict[Edge, Tuple[Fraction, Fraction]]

    def __getitem__(self, e: Edge) -> float:
        return self.density.get(e, 0.0)


def midpoint_distance(center: Point, e: Edge, du: Fraction, dv: Fraction) -> Fraction:
    """Distance from `center` used for the whole edge `e`, given the distances du, dv to its ends.

    On any other edge this is the distance to the edge midpoint, min(du, dv) + 1/2. On the
    center's own edge it is the mean distance from the center over the edge,
    (s^2 + (1 - s)^2) / 2 for offset s, which stays positive at s = 1/2 where the midpoint
    distance would vanish.
    """
    if isinstance(center, EdgePoint) and center.edge == e:
        s = center.offset
        return (s * s + (1 - s) * (1 - s)) / 2
    return min(du, dv) + Fraction(1, 2)


class _MassProfile:
    """mu(B(p, r)) for many r from one distance table, memoized per radius."""

    def __init__(self, truncation: GraphTruncation, center: Point, dist: Dict, far: Fraction):
        self._rows: List[Tuple[Edge, Fraction, Fraction, Fraction]] = []
        seen = set()
        for v in dist:
            for e, _ in truncation.adjacent(v):
                if e in seen:
                    continue
                seen.add(e)
                self._rows.append((e, base_mass(e, truncation.weights), dist.get(e.left, far), dist.get(e.right, far)))
        self._center = center
        self._cache: Dict[Fraction, Fraction] = {}

    def mass(self, r: Fraction) -> Fraction:
        cached = self._cache.get(r)
        if cached is not None:
            return cached
        total = Fraction(0)
        for e, w, du, dv in self._rows:
            c = covered_length(r, du, dv)
            if isinstance(self._center, EdgePoint) and e == self._center.edge:
                s0 = self._center.offset
                c = max(c, min(Fraction(1), s0 + r) - max(Fraction(0), s0 - r))
            total += w * c
        self._cache[r] = total
        return total


def riesz_density(truncation: GraphTruncation, p: Point, radius: Fraction) -> RieszDensity:
    radius = Fraction(radius)
    far = radius + 1
    dist = point_distances(truncation, p, radius=math.ceil(radius) + 1)
    inside = [v for v, d in dist.items() if d < radius]
    boundary = [v for v in inside if truncation.is_boundary(v)]
    if boundary:
        raise WindowError(f"Riesz density around {p.key()} with radius {radius} reaches the window boundary at "
                          f"{boundary[0].key()}")
    profile = _MassProfile(truncation, p, dist, far)
    density: Dict[Edge, float] = {}
    covered: Dict[Edge, Fraction] = {}
    reach: Dict[Edge, Tuple[Fraction, Fraction]] = {}
    for v in sorted(inside):
        for e, _ in truncation.adjacent(v):
            if e in covered:
                continue
            du, dv = dist.get(e.left, far), dist.get(e.right, far)
            c = covered_length(radius, du, dv)
            if isinstance(p, EdgePoint) and e == p.edge:
                c = Fraction(1) if radius >= 1 else min(Fraction(1), c + radius)
            if c <= 0:
                continue
            r = midpoint_distance(p, e, du, dv)
            covered[e] = c
            reach[e] = (max(Fraction(0), radius - du), max(Fraction(0), radius - dv))
            density[e] = float(r) / float(profile.mass(r)) if r > 0 else 0.0
    logger.debug(f"Riesz density around {p.key()}: {len(density)} edges within {radius}")
    return RieszDensity(basepoint=p, radius=radius, density=density, covered=covered, reach=reach)


@dataclass
class PairMeasure:
    """The two-point reference measure around p and q.

    `measure` holds the float masses, `base` the exact base masses of the same
    edges, `lengths` the length of each edge inside B(p, Cd) u B(q, Cd).
    """
    p: Point
    q: Point
    C: float
    d: Fraction
    measure: EdgeMeasure
    base: EdgeMeasure
    lengths: Dict[Edge, Fraction]

    def full(self, e: Edge) -> bool:
        return self.lengths.get(e, Fraction(0)) >= 1


def pair_measure(truncation: GraphTruncation, p: Point, q: Point, C: float = DEFAULT_PAIR_MEASURE_C) -> PairMeasure:
    d = Fraction(distance(truncation, p, q))
    if d == 0:
        raise ValueError("the pair measure needs two distinct points")
    radius = Fraction(C).limit_denominator(1000) * d
    rho_p = riesz_density(truncation, p, radius)
    rho_q = riesz_density(truncation, q, radius)
    masses: Dict[Edge, float] = {}
    lengths: Dict[Edge, Fraction] = {}
    for e in set(rho_p.covered) | set(rho_q.covered):
        w = float(base_mass(e, truncation.weights))
        masses[e] = w * (float(rho_p.covered.get(e, 0)) * rho_p[e] + float(rho_q.covered.get(e, 0)) * rho_q[e])
        a_p, b_p = rho_p.reach.get(e, (Fraction(0), Fraction(0)))
        a_q, b_q = rho_q.reach.get(e, (Fraction(0), Fraction(0)))
        union = max(a_p, a_q) + max(b_p, b_q)
        lengths[e] = min(Fraction(1), max(union, rho_p.covered.get(e, Fraction(0)), rho_q.covered.get(e, Fraction(0))))
    measure = EdgeMeasure(masses)
    base = EdgeMeasure({e: base_mass(e, truncation.weights) for e in measure.support()})
    logger.info(f"Pair measure {p.key()} ~ {q.key()}: d={d}, C={C}, {len(measure)} edges")
    return PairMeasure(p=p, q=q, C=C, d=d, measure=measure, base=base,
                       lengths={e: lengths[e] for e in measure.support()})
