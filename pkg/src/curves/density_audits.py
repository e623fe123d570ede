from fractions import Fraction
from typing import Callable, Dict, Iterable, Tuple

from src.graph_params.weights import tail_weight
from src.doubling_graph.truncation import GraphTruncation
from src.doubling_graph.vertex import Edge
from src.geodesy.distance import bfs_from_set
from src.measure.edge_measure import base_mass
from src.curves.distribution import CurveDistribution
from src.curves.transport import transport_density
from src.walks.walk import Walk

Range = Tuple[float, float]


def edge_index(w: Walk) -> Dict[int, int]:
    """Position of each edge of a monotone walk, keyed by its left coordinate, 1-based."""
    return {e.m: t for t, e in enumerate(w.edges, start=1)}


def density_ratio_range(truncation: GraphTruncation, curve: CurveDistribution,
                        formula: Callable[[Edge], Fraction]) -> Range:
    """(min, max) over the support of (dE||Gamma|| / dmu)(e) / formula(e)."""
    ratios = []
    for e, mass in curve.expectation().items():
        ratios.append(float(mass / base_mass(e, truncation.weights) / formula(e)))
    return min(ratios), max(ratios)


def compression_density(truncation: GraphTruncation, w0: Walk, k: int, j_cut: int) -> Callable[[Edge], Fraction]:
    """S1^-lg(len - idx) S2^-(k - j_cut) w_spade^-(k - lg(len - idx)) prod_{j>=k} w(e; j)^-1."""
    w = truncation.weights
    index = edge_index(w0)
    length = w0.length

    def formula(e: Edge) -> Fraction:
        lg = truncation.scales.disc_log(length - index[e.m])
        return (w.s1 ** -lg * w.s2 ** -(k - j_cut) * w.spade ** (lg - k)
                / tail_weight(e.lam, e.theta, k - 1, w))
    return formula


def expansion_new_density(truncation: GraphTruncation, w: Walk, w0_length: int, k: int) -> Callable[[Edge], Fraction]:
    """S1^-T(e) w_spade^-(k - T(e)) S2^-k prod_{j>=k} w(e; j)^-1 with T measured from the socket."""
    weights = truncation.weights
    index = edge_index(w)

    def formula(e: Edge) -> Fraction:
        idx = index[e.m]
        T = truncation.scales.disc_log(w0_length - idx if idx <= w0_length else idx - w0_length)
        return (weights.s1 ** -T * weights.spade ** (T - k) * weights.s2 ** -k
                / tail_weight(e.lam, e.theta, k - 1, weights))
    return formula


def expansion_old_density(truncation: GraphTruncation, k: int) -> Callable[[Edge], Fraction]:
    weights = truncation.weights

    def formula(e: Edge) -> Fraction:
        return 1 / ((weights.s1 * weights.s2) ** k * tail_weight(e.lam, e.theta, k - 1, weights))
    return formula


def audit_compression_density(truncation: GraphTruncation, curve: CurveDistribution, w0: Walk) -> Range:
    return density_ratio_range(truncation, curve, compression_density(truncation, w0, curve.info["k"], curve.info["j_cut"]))


def audit_transport_density(truncation: GraphTruncation, curve: CurveDistribution, k: int) -> Range:
    return density_ratio_range(truncation, curve, lambda e: transport_density(truncation, e, k))


def audit_expansion_density(truncation: GraphTruncation, curve: CurveDistribution, w: Walk) -> Dict[str, Range]:
    k = curve.info["k"]
    out = {"old": density_ratio_range(truncation, curve.conditional("old"), expansion_old_density(truncation, k))}
    if curve.event_probability("new"):
        new = expansion_new_density(truncation, w, curve.info["w0_length"], k)
        out["new"] = density_ratio_range(truncation, curve.conditional("new"), new)
    return out


def spine_distance(truncation: GraphTruncation, curve: CurveDistribution, spine: Iterable[Walk]) -> int:
    """(C2): the largest hop distance from a support edge to the vertices of the spine walks."""
    sources = {v for w in spine for v in w.vertices}
    targets = {v for e in curve.edge_support() for v in (e.left, e.right)}
    dist = bfs_from_set(truncation, sources, targets=targets)
    return max((min(dist[e.left], dist[e.right]) for e in curve.edge_support()), default=0)
