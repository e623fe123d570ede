import logging

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import FrozenSet, Iterable, List, Optional, Tuple

from src.consts import DEFAULT_MAX_BALL_BOX_C_EXPONENT
from src.exceptions import DepthError
from src.graph_params.symbols import Label
from src.doubling_graph.truncation import GraphTruncation
from src.doubling_graph.vertex import VertexClass
from src.geodesy.distance import bfs_distances

logger = logging.getLogger(__name__)

LabelPair = Tuple[Label, Label]


@dataclass(frozen=True)
class Box:
    """Points with coordinate in `interval` whose labels agree beyond `depth` with some element of `labels`."""
    interval: Tuple[Fraction, Fraction]
    labels: FrozenSet[LabelPair]
    depth: int

    def __post_init__(self):
        object.__setattr__(self, "interval", (Fraction(self.interval[0]), Fraction(self.interval[1])))
        object.__setattr__(self, "labels", frozenset(self.labels))

    @property
    def length(self) -> Fraction:
        return self.interval[1] - self.interval[0]

    def matches(self, lam: Label, theta: Label) -> bool:
        return any(lam.agrees_beyond(l, self.depth) and theta.agrees_beyond(t, self.depth) for l, t in self.labels)

    def contains_coordinates(self, t: Fraction, lam: Label, theta: Label) -> bool:
        return self.interval[0] <= t <= self.interval[1] and self.matches(lam, theta)

    def contains_vertex(self, truncation: GraphTruncation, v: VertexClass) -> bool:
        return any(self.contains_coordinates(Fraction(v.m), lam, theta) for lam, theta in truncation.fiber(v))

    def separated(self) -> bool:
        """No element of `labels` is another one with some of its first `depth` entries modified."""
        for (l1, t1), (l2, t2) in combinations(sorted(self.labels), 2):
            if l1.agrees_beyond(l2, self.depth) and t1.agrees_beyond(t2, self.depth):
                return False
        return True


@dataclass
class SandwichResult:
    center: VertexClass
    radius: int
    C: int
    inner: Box
    outer: Box
    inner_failures: List[str] = field(default_factory=list)
    outer_failures: List[str] = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return not self.inner_failures and not self.outer_failures


def outer_label_set(truncation: GraphTruncation, lam: Label, theta: Label, position: int, R: int) -> Tuple[FrozenSet[LabelPair], int]:
    """S(x, R): the labels of x, or Omega_M when an integer of order M > lg(2R) lies within R of x."""
    scales = truncation.scales
    M, _ = scales.max_order_in(position - R, position + R)
    if M <= scales.disc_log(2 * R):
        return frozenset({(lam, theta)}), M
    omega = {
        (lam.with_entry(M, s), theta.with_entry(M, t))
        for s in truncation.symbols.sigma1 for t in truncation.symbols.sigma2
    }
    return frozenset(omega), M


def ball_box_sandwich(truncation: GraphTruncation, x: VertexClass, R: int, C: int) -> SandwichResult:
    """Check inner box <= closed ball B(x, R) <= outer box at the vertices of the truncation."""
    scales = truncation.scales
    lam, theta = truncation.fiber(x)[0]
    k_in = scales.disc_log(Fraction(R, C))
    k_out = scales.disc_log(2 * R)
    if k_in > truncation.depth:
        raise DepthError(f"inner box depth {k_in} exceeds truncation depth {truncation.depth}")
    inner = Box((x.m - Fraction(R, 2), x.m + Fraction(R, 2)), {(lam, theta)}, k_in)
    labels, _ = outer_label_set(truncation, lam, theta, x.m, R)
    outer = Box((x.m - R, x.m + R), labels, k_out)
    result = SandwichResult(center=x, radius=R, C=C, inner=inner, outer=outer)

    dist = bfs_distances(truncation, x, radius=R)
    lo = max(truncation.m_lo, -((-inner.interval[0].numerator) // inner.interval[0].denominator))
    hi = min(truncation.m_hi, inner.interval[1].numerator // inner.interval[1].denominator)
    for lam_prefix, theta_prefix in truncation.symbols.prefixes(k_in):
        lam_v = lam.with_prefix(lam_prefix)
        theta_v = theta.with_prefix(theta_prefix)
        for m in range(lo, hi + 1):
            v = truncation.normalize(m, lam_v, theta_v)
            if dist.get(v, R + 1) > R:
                result.inner_failures.append(f"{v.key()} in inner box but d={dist.get(v, '>R')} from {x.key()}")
    for v, d in dist.items():
        if d <= R and not outer.contains_vertex(truncation, v):
            result.outer_failures.append(f"{v.key()} at d={d} outside outer box")
    return result


def calibrate_ball_box_constant(truncation: GraphTruncation, centers: Iterable[VertexClass], radii: Iterable[int],
                                max_exponent: int = DEFAULT_MAX_BALL_BOX_C_EXPONENT) -> Tuple[Optional[int], int]:
    """Smallest power of 2 making every inner inclusion hold; also the number of outer failures."""
    centers, radii = list(centers), list(radii)
    outer_failures = 0
    for x in centers:
        for R in radii:
            outer_failures += len(ball_box_sandwich(truncation, x, R, 1).outer_failures)
    for exponent in range(max_exponent + 1):
        C = 2 ** exponent
        ok = all(not ball_box_sandwich(truncation, x, R, C).inner_failures for x in centers for R in radii)
        if ok:
            logger.info(f"Ball/box constant calibrated: C={C} over {len(centers)} centers, {len(radii)} radii")
            return C, outer_failures
    logger.warning(f"No ball/box constant up to 2**{max_exponent} works")
    return None, outer_failures
