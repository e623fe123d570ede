import logging

from fractions import Fraction
from typing import Dict, List, Mapping, Optional

from src.consts import SPADE
from src.exceptions import PreconditionError
from src.doubling_graph.truncation import GraphTruncation
from src.doubling_graph.vertex import VertexClass, VertexKind
from src.curves.distribution import CurveDistribution
from src.curves.ensembles import Flavor, canonical_ensemble
from src.walks.walk import Walk, lift

logger = logging.getLogger(__name__)

DEFAULT_HYPOTHESIS_C0 = 5


def audit_compression_hypotheses(truncation: GraphTruncation, w0: Walk, k: int,
                                 C0: float = DEFAULT_HYPOTHESIS_C0, check_start: bool = True) -> List[str]:
    """Failed checks among (H1)-(H5) for a walk W0 ending at a socket, each tagged with its hypothesis."""
    scales = truncation.scales
    failures = []
    if k < 1:
        return [f"(H1) k={k} < 1"]
    if not w0.is_monotone:
        failures.append("walk is not monotone")
    xi = w0.end
    if check_start and w0.start.order != 0:
        failures.append(f"(H1) start {w0.start.key()} has order {w0.start.order}")
    if xi.kind is not VertexKind.SOCKET or xi.order < k:
        failures.append(f"(H1) end {xi.key()} is not a socket of order >= {k}")
    length = w0.length
    if not scales.sigma(k) <= length <= C0 * scales.sigma(k):
        failures.append(f"(H2) len {length} outside [sigma_{k}, {C0}*sigma_{k}]")
    if len({e.theta for e in w0.edges}) > 1:
        failures.append("(H2) theta changes along the walk")
    if not w0.edges:
        return failures

    tau = w0.tau_markers()
    if sorted(tau) != list(range(1, k)):
        failures.append(f"(H3) tau markers {sorted(tau)} != 1..{k - 1}")
        return failures
    if any(tau[i + 1] >= tau[i] for i in range(1, k - 1)):
        failures.append("(H3) tau is not strictly decreasing")
    depth = truncation.depth
    for i in range(1, k):
        v = w0.vertices[tau[i]]
        if v.order != i or v.kind is VertexKind.PLAIN:
            failures.append(f"(H3) w_tau_{i} = {v.key()} is not a gluing or socket point of order {i}")
        if not scales.sigma(i) <= length - tau[i] <= C0 * scales.sigma(i):
            failures.append(f"(H3) len - tau_{i} = {length - tau[i]} outside [sigma_{i}, {C0}*sigma_{i}]")
        for l in range(tau[i] + 1, length + 1):
            lam = w0.edges[l - 1].lam
            if any(lam.at(j) != SPADE for j in range(i, k)):
                failures.append(f"(H3) edge {l} past tau_{i} has lambda {lam.key()}, not {SPADE} on {i}..{k - 1}")
                break

    for s in range(1, length):
        if w0.vertices[s].order >= k and w0.edges[s - 1].lam != w0.edges[s].lam:
            failures.append(f"(H4) lambda switches at w_{s} of order {w0.vertices[s].order} >= {k}")

    lam0 = w0.edges[0].lam
    if w0.start.order == 0:
        lam0 = w0.start.lam
    for t, e in enumerate(w0.edges, start=1):
        if k > 1 and t <= tau[k - 1]:
            kept = range(1, depth + 1)
        else:
            passed = [i for i in range(1, k) if t > tau[i]]
            i = min(passed) - 1 if passed else k
            kept = [l for l in range(1, depth + 1) if l < i or l >= k]
        bad = [l for l in kept if e.lam.at(l) != lam0.at(l)]
        if bad:
            failures.append(f"(H5) edge {t} changes lambda entries {bad}")
            break
    return failures


def compression_curve(truncation: GraphTruncation, w0: Walk, j_cut: int, k: Optional[int] = None,
                      start_law: Optional[Mapping[VertexClass, Fraction]] = None,
                      C0: float = DEFAULT_HYPOTHESIS_C0) -> CurveDistribution:
    """Gamma = p'_0 . W0 with p'_0 drawn from F(p_0; k - j_cut), or from `start_law`.

    k defaults to one more than the number of tau markers of W0.
    """
    if k is None:
        k = len(w0.tau_markers()) + 1
    if not 0 <= j_cut <= k:
        raise ValueError(f"j_cut must lie in [0, {k}], got {j_cut}")
    failures = audit_compression_hypotheses(truncation, w0, k, C0, check_start=start_law is None)
    if failures:
        raise PreconditionError("compression hypotheses", failures)
    depth = k - j_cut
    if start_law is None:
        start_law = canonical_ensemble(truncation, w0.start, depth).prob
    law: Dict[Walk, Fraction] = {}
    for p, q in start_law.items():
        lifted = lift(truncation, w0, p)
        law[lifted] = law.get(lifted, Fraction(0)) + q
    logger.debug(f"compression_curve k={k} j_cut={j_cut}: {len(law)} walks into {w0.end.key()}")
    return CurveDistribution(law, info={"k": k, "j_cut": j_cut, "xi": w0.end.key(), "length": w0.length})


def compression_end_law_holds(truncation: GraphTruncation, curve: CurveDistribution, w0: Walk, depth: int) -> bool:
    """(C1): the endpoint law is the canonical theta-ensemble at the socket."""
    return curve.end_law() == canonical_ensemble(truncation, w0.end, depth, Flavor.THETA).prob
