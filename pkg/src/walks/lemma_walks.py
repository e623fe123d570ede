import logging

from src.consts import SPADE
from src.exceptions import PreconditionError
from src.graph_params.scales import ScaleTable
from src.graph_params.symbols import Label
from src.doubling_graph.truncation import GraphTruncation
from src.doubling_graph.vertex import VertexClass, VertexKind
from src.walks.walk import Walk, WalkBuilder

logger = logging.getLogger(__name__)


def first_of_order(scales: ScaleTable, start: int, direction: int, k: int, min_offset: int = 0) -> int:
    """First integer n with direction*(n - start) >= min_offset and ord(n) == k exactly."""
    origin = start + direction * min_offset
    if k == 0:
        n = origin
        while scales.ord(n) != 0:
            n += direction
        return n
    s = scales.sigma(k)
    n = -((-origin) // s) * s if direction > 0 else (origin // s) * s
    while n == 0 or scales.ord(n) != k:
        n += direction * s
    return n


def _check_k(k: int) -> None:
    if k < 1:
        raise PreconditionError(f"walk lemmas need k >= 1, got {k}")


def gluing_walk(truncation: GraphTruncation, p: VertexClass, k: int, direction: int,
                lam: Label, theta: Label) -> Walk:
    """Monotone constant-label walk from p to the nearest point of order exactly k at least sigma_k away."""
    _check_k(k)
    builder = WalkBuilder(truncation, p, lam, theta)
    builder.walk_to(first_of_order(truncation.scales, p.m, direction, k, truncation.scales.sigma(k)))
    return builder.build()


def rolled_lambda(lam: Label, lo: int, hi: int) -> Label:
    """lam with entries lo..hi replaced by SPADE."""
    for j in range(lo, hi + 1):
        lam = lam.with_entry(j, SPADE)
    return lam


def lead_in(builder: WalkBuilder, scales: ScaleTable, direction: int, k: int) -> None:
    """Walk 3*sigma_k/2 steps on the current line, then on to the next order-0 integer."""
    builder.walk_to(builder.position + direction * ((3 * scales.sigma(k) + 1) // 2))
    builder.walk_to(first_of_order(scales, builder.position, direction, 0))


def descend_to_socket(truncation: GraphTruncation, p: VertexClass, k: int, direction: int,
                      lam: Label, theta: Label) -> Walk:
    """Label-nonincreasing monotone walk from p to a socket of order k.

    A constant-label lead-in reaches an order-0 point v; t_0 is the first order-k
    integer at least sigma_k beyond v. The walk then turns lam(i) into SPADE at
    t_i = t_0 - direction*sigma_i for i = k-1, ..., 1 and marks those vertices
    tau_i. theta never changes.
    """
    _check_k(k)
    scales = truncation.scales
    builder = WalkBuilder(truncation, p, lam, theta)
    lead_in(builder, scales, direction, k)
    builder.mark("lead_in")
    t0 = first_of_order(scales, builder.position, direction, k, scales.sigma(k))
    for i in range(k - 1, 0, -1):
        builder.walk_to(t0 - direction * scales.sigma(i))
        builder.mark(f"tau_{i}")
        builder.switch(lam=builder.lam.with_entry(i, SPADE), forced=[("lam", i)])
    builder.walk_to(t0)
    walk = builder.build()
    if walk.end.kind is not VertexKind.SOCKET:
        raise PreconditionError(f"descent from {p.key()} ended at a {walk.end.kind.value} point {walk.end.key()}")
    logger.debug(f"descend_to_socket k={k}: {p.key()} -> {walk.end.key()} in {walk.length} steps")
    return walk


def ascend_from_socket(truncation: GraphTruncation, v: VertexClass, k: int, direction: int,
                       lam: Label, theta: Label) -> Walk:
    """Label-nondecreasing monotone walk from a socket v of order k0 >= k, ending on (lam, theta).

    Leaves v on lam with entries below k set to SPADE, restores lam(i) at
    s_i = pi(v) + direction*sigma_i (marked tau_i) for i = 1, ..., k-1, and stops at
    the order-0 point sigma_k + 1 away.
    """
    _check_k(k)
    scales = truncation.scales
    k0 = v.order
    failures = []
    if v.kind is not VertexKind.SOCKET:
        failures.append(f"{v.key()} is not a socket")
    if k > k0:
        failures.append(f"k={k} exceeds the socket order {k0}")
    for l in range(k + 1, max(len(lam), len(v.lam)) + 1):
        if l != k0 and lam.at(l) != v.lam.at(l):
            failures.append(f"lambda({l})={lam.at(l)} differs from the socket's {v.lam.at(l)}")
    if k < k0 and lam.at(k) != SPADE:
        failures.append(f"lambda({k}) must be {SPADE} below the socket order")
    for j in range(1, max(len(theta), len(v.theta)) + 1):
        if j != k0 and theta.at(j) != v.theta.at(j):
            failures.append(f"theta({j})={theta.at(j)} differs from the socket's {v.theta.at(j)}")
    if failures:
        raise PreconditionError(f"ascend_from_socket at {v.key()}", failures)
    builder = WalkBuilder(truncation, v, rolled_lambda(lam, 1, k - 1), theta)
    for i in range(1, k):
        builder.walk_to(v.m + direction * scales.sigma(i))
        builder.mark(f"tau_{i}")
        builder.switch(lam=builder.lam.with_entry(i, lam.at(i)), forced=[("lam", i)])
    builder.walk_to(v.m + direction * (scales.sigma(k) + 1))
    return builder.build()
