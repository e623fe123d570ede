import logging
import math

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional

from src.doubling_graph.truncation import GraphTruncation
from src.doubling_graph.vertex import EdgePoint, project
from src.geodesy.balls import BallSpec, ball, covered_length
from src.geodesy.distance import point_distances
from src.graph_params.weights import tail_weight
from src.measure.edge_measure import base_mass

logger = logging.getLogger(__name__)


@dataclass
class BallMeasureReport:
    center: str
    radius: Fraction
    mass: Fraction
    box_ratio: float
    power_ratio: Optional[float]


@dataclass
class DoublingRow:
    center: str
    radius: Fraction
    mass: Fraction
    mass_2r: Fraction
    ratio: float


@dataclass
class DoublingScanReport:
    rows: List[DoublingRow]
    max_ratio: float


def ball_mass(truncation: GraphTruncation, spec: BallSpec) -> Fraction:
    b = ball(truncation, spec)
    return sum((base_mass(e, truncation.weights) * c for e, c in b.edges.items()), Fraction(0))


def brute_force_ball_mass(truncation: GraphTruncation, spec: BallSpec) -> Fraction:
    """Same mass from enumerating every line-coordinate edge near the center."""
    r = spec.radius
    dist = point_distances(truncation, spec.center)
    center = project(spec.center)
    far = r + 1
    total = Fraction(0)
    for n in range(math.floor(center - r) - 1, math.ceil(center + r) + 1):
        if not (truncation.in_window(n) and truncation.in_window(n + 1)):
            continue
        for lam in truncation.symbols.lam_labels(truncation.depth):
            for theta in truncation.symbols.theta_labels(truncation.depth):
                e = truncation.edge(n, lam, theta)
                covered = covered_length(r, dist.get(e.left, far), dist.get(e.right, far))
                if isinstance(spec.center, EdgePoint) and e == spec.center.edge:
                    s0 = spec.center.offset
                    covered = max(covered, min(Fraction(1), s0 + r) - max(Fraction(0), s0 - r))
                total += base_mass(e, truncation.weights) * covered
    return total


def reference_mass(truncation: GraphTruncation, spec: BallSpec) -> Fraction:
    """R (S1 S2)^lg R times the weights of the center's labels beyond lg R."""
    w = truncation.weights
    k = truncation.scales.disc_log(spec.radius)
    if isinstance(spec.center, EdgePoint):
        lam, theta = spec.center.edge.lam, spec.center.edge.theta
    else:
        lam, theta = truncation.fiber(spec.center)[0]
    return spec.radius * (w.s1 * w.s2) ** k * tail_weight(lam, theta, k, w)


def ball_measure(truncation: GraphTruncation, spec: BallSpec) -> BallMeasureReport:
    mass = ball_mass(truncation, spec)
    power_ratio = None
    if truncation.scales.constant:
        w = truncation.weights
        m = truncation.scales.m[0]
        exponent = 1 + math.log(float(w.s1 * w.s2), m)
        power_ratio = float(mass) / float(spec.radius) ** exponent
    return BallMeasureReport(
        center=spec.center.key(),
        radius=spec.radius,
        mass=mass,
        box_ratio=float(mass / reference_mass(truncation, spec)),
        power_ratio=power_ratio,
    )


def doubling_ratio_scan(truncation: GraphTruncation, sample: Iterable[BallSpec]) -> DoublingScanReport:
    rows = []
    for spec in sample:
        mass = ball_mass(truncation, spec)
        mass_2r = ball_mass(truncation, BallSpec(spec.center, 2 * spec.radius))
        rows.append(DoublingRow(spec.center.key(), spec.radius, mass, mass_2r, float(mass_2r / mass)))
    max_ratio = max((row.ratio for row in rows), default=1.0)
    logger.info(f"Doubling scan over {len(rows)} balls: max ratio {max_ratio:.4g}")
    return DoublingScanReport(rows=rows, max_ratio=max_ratio)
