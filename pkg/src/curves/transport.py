import logging

from fractions import Fraction
from typing import Dict, Mapping, Optional

from src.consts import WILDCARD
from src.exceptions import LiftError, PreconditionError
from src.graph_params.weights import tail_weight
from src.doubling_graph.truncation import GraphTruncation
from src.doubling_graph.vertex import Edge, VertexClass
from src.curves.distribution import CurveDistribution
from src.curves.ensembles import canonical_ensemble
from src.walks.walk import Walk

logger = logging.getLogger(__name__)


def transport_walk(truncation: GraphTruncation, w: Walk, k: int, start: VertexClass) -> Walk:
    """W_{p'}: the walk over the same positions as `w` whose edges carry the first k
    label entries of `start` and the remaining entries of the corresponding edge of `w`.
    """
    if start.m != w.start.m:
        raise LiftError(f"transport start {start.key()} is not above {w.start.key()}")
    if w.length == 0:
        return Walk.single(start)
    first = w.edges[0]
    lam0, theta0 = start.lam, start.theta
    if WILDCARD in lam0:
        lam0 = lam0.with_entry(start.order, first.lam.at(start.order))
    if WILDCARD in theta0:
        theta0 = theta0.with_entry(start.order, first.theta.at(start.order))
    lam_prefix, theta_prefix = lam0.prefix(k), theta0.prefix(k)
    if WILDCARD in lam_prefix or WILDCARD in theta_prefix:
        raise LiftError(f"labels of {start.key()} are not determined up to entry {k}")
    vertices = [start]
    edges = []
    for i, e in enumerate(w.edges):
        moved = truncation.edge(e.m, e.lam.with_prefix(lam_prefix), e.theta.with_prefix(theta_prefix))
        here = vertices[-1]
        if here == moved.left:
            vertices.append(moved.right)
        elif here == moved.right:
            vertices.append(moved.left)
        else:
            raise LiftError(f"transport from {start.key()} breaks at step {i}: {moved.key()} misses {here.key()}")
        edges.append(moved)
    return Walk(vertices, edges, markers=w.markers, pieces=w.pieces)


def transport_density(truncation: GraphTruncation, e: Edge, k: int) -> Fraction:
    """(S1 S2)^-k prod_{j>k} w(lam_e(j), theta_e(j))^-1."""
    w = truncation.weights
    return 1 / ((w.s1 * w.s2) ** k * tail_weight(e.lam, e.theta, k, w))


def transport_curve(truncation: GraphTruncation, w: Walk, k: int,
                    start_law: Optional[Mapping[VertexClass, Fraction]] = None) -> CurveDistribution:
    """Random curve moving parallel to `w`, its start drawn from F(w.start; k) unless a law is given."""
    if start_law is None:
        failures = []
        if not w.is_monotone:
            failures.append("walk is not monotone")
        if w.start.order != 0 or w.end.order != 0:
            failures.append(f"endpoint orders are {w.start.order} and {w.end.order}, not 0")
        if failures:
            raise PreconditionError("transport_curve", failures)
        start_law = canonical_ensemble(truncation, w.start, k).prob
    law: Dict[Walk, Fraction] = {}
    for p, q in start_law.items():
        moved = transport_walk(truncation, w, k, p)
        law[moved] = law.get(moved, Fraction(0)) + q
    logger.debug(f"transport_curve k={k}: {len(law)} walks of length {w.length}")
    return CurveDistribution(law, info={"k": k, "length": w.length})

