import math

from fractions import Fraction

from src.exceptions import DepthError, PreconditionError
from src.graph_params.params import Params
from src.graph_params.weights import tail_weight
from src.doubling_graph.truncation import GraphTruncation
from src.geodesy.boxes import Box
from src.measure.edge_measure import base_mass


def box_measure(box: Box, params: Params) -> Fraction:
    """Closed form l(I) * S1^k * S2^k * sum over S of the weights beyond entry k."""
    if not box.separated():
        raise PreconditionError("box label set is not separated: two elements differ only in their first "
                                f"{box.depth} entries")
    w = params.weights
    k = box.depth
    tails = sum((tail_weight(lam, theta, k, w) for lam, theta in box.labels), Fraction(0))
    return box.length * w.s1 ** k * w.s2 ** k * tails


def edge_sum_box_measure(truncation: GraphTruncation, box: Box) -> Fraction:
    """Sum of base masses times overlap length over every truncation edge in the box."""
    if box.depth > truncation.depth or any(max(len(l), len(t)) > truncation.depth for l, t in box.labels):
        raise DepthError(f"box of depth {box.depth} does not fit in a depth-{truncation.depth} truncation")
    a, b = box.interval
    total = Fraction(0)
    for n in range(math.floor(a), math.ceil(b)):
        overlap = min(b, Fraction(n + 1)) - max(a, Fraction(n))
        if overlap <= 0:
            continue
        for lam in truncation.symbols.lam_labels(truncation.depth):
            for theta in truncation.symbols.theta_labels(truncation.depth):
                if box.matches(lam, theta):
                    total += overlap * base_mass(truncation.edge(n, lam, theta), truncation.weights)
    return total
