import logging

from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Tuple

from src.consts import DEFAULT_MAX_J_CUT
from src.exceptions import PreconditionError, WindowError
from src.doubling_graph.truncation import GraphTruncation
from src.doubling_graph.vertex import VertexClass
from src.curves.distribution import CurveDistribution
from src.curves.ensembles import canonical_ensemble, representative
from src.walks.lemma_walks import ascend_from_socket, descend_to_socket
from src.walks.walk import Walk, WalkBuilder, concat, lift, reverse

logger = logging.getLogger(__name__)


def expansion_scale(truncation: GraphTruncation, length: int) -> int:
    """Smallest k with sigma_k >= length."""
    k = 0
    while truncation.scales.sigma(k) < length:
        k += 1
    return k


def expansion_detour(truncation: GraphTruncation, kappa: int) -> int:
    """Most steps the descent to a socket of order kappa and the ascent back out can take."""
    return 11 * truncation.scales.sigma(kappa) // 2 + 2


def expansion_fits(truncation: GraphTruncation, kappa: int, length: int) -> bool:
    return kappa >= 1 and expansion_detour(truncation, kappa) <= length


def minimum_expansion_jcut(truncation: GraphTruncation, k: int, length: Optional[int] = None) -> int:
    """Smallest j_cut for which the socket detour of an expansion along a walk of `length` (sigma_k by default) fits."""
    length = truncation.scales.sigma(k) if length is None else length
    for j_cut in range(1, min(k, DEFAULT_MAX_J_CUT) + 1):
        if expansion_fits(truncation, k - j_cut + 1, length):
            return j_cut
    raise PreconditionError(f"no j_cut <= {min(k, DEFAULT_MAX_J_CUT)} makes an expansion fit in {length} steps at k={k}")


def _splice_walks(truncation: GraphTruncation, w: Walk, kappa: int, branch: Tuple[str, str]) -> Tuple[Walk, Walk]:
    """W0 from p0 to a socket xi of order kappa, W1 from xi to p1-hat of the branch."""
    direction = w.direction
    p0, p1 = w.start, w.end
    lam, theta = w.edges[0].lam, w.edges[0].theta
    w0 = descend_to_socket(truncation, p0, kappa, direction, lam, theta)
    xi = w0.end
    lam_hat = lam.with_entry(kappa, branch[0])
    theta_hat = theta.with_entry(kappa, branch[1])
    up = ascend_from_socket(truncation, xi, kappa, direction, lam_hat, theta_hat)
    if direction * (p1.m - up.end.m) < 0:
        raise PreconditionError(f"socket detour of order {kappa} overshoots {p1.key()}: j_cut too small for len {w.length}")
    builder = WalkBuilder(truncation, up.end, lam_hat, theta_hat)
    builder.walk_to(p1.m)
    w1 = concat(up, builder.build())
    return w0, w1


def default_branch(truncation: GraphTruncation, p0: VertexClass, kappa: int) -> Tuple[str, str]:
    lam, theta = representative(truncation, p0)
    current = (lam.at(kappa), theta.at(kappa))
    return next(pair for pair in truncation.symbols.pairs if pair != current)


def expansion_curve(truncation: GraphTruncation, w: Walk, j_cut: int, branch: Optional[Tuple[str, str]] = None,
                    start_law: Optional[Mapping[VertexClass, Fraction]] = None) -> CurveDistribution:
    """Random curve along a constant-label monotone walk that opens entry k - j_cut + 1.

    With probability w((s0, t0)) / (S1 S2) the lifted walk p'_0 . W (event "old"); with
    probability w((s, t)) / (S1 S2) the splice through the socket xi ending at the point
    whose entry k - j_cut + 1 is (s, t) (event "new:s,t").
    """
    failures = []
    if not w.is_monotone:
        failures.append("walk is not monotone")
    if not w.has_constant_labels():
        failures.append("edge labels are not constant")
    if w.start.order != 0 or w.end.order != 0:
        failures.append(f"endpoint orders are {w.start.order} and {w.end.order}, not 0")
    k = expansion_scale(truncation, w.length)
    if 2 * w.length < truncation.scales.sigma(k):
        failures.append(f"len {w.length} outside [sigma_{k}/2, sigma_{k}]")
    kappa = k - j_cut + 1
    if not 1 <= kappa <= truncation.depth:
        failures.append(f"entry {kappa} = k - j_cut + 1 is outside 1..{truncation.depth}")
    if failures:
        raise PreconditionError("expansion_curve", failures)

    branch = branch or default_branch(truncation, w.start, kappa)
    lam0, theta0 = w.edges[0].lam, w.edges[0].theta
    s0, t0 = lam0.at(kappa), theta0.at(kappa)
    if branch == (s0, t0):
        raise PreconditionError(f"branch {branch} repeats the current entry {kappa}")
    try:
        w0_new, w1_new = _splice_walks(truncation, w, kappa, branch)
    except WindowError as e:
        raise WindowError(f"expansion socket detour leaves the window: {e}") from e

    if start_law is None:
        start_law = canonical_ensemble(truncation, w.start, kappa - 1).prob
    weights = truncation.weights
    norm = weights.s1 * weights.s2
    p1 = w.end
    lam1, theta1 = representative(truncation, p1)
    back = reverse(w1_new)
    law: Dict[Walk, Fraction] = {}
    events: Dict[Walk, str] = {}
    for p, q in start_law.items():
        old = lift(truncation, w, p)
        law[old] = law.get(old, Fraction(0)) + q * weights.pair(s0, t0) / norm
        events[old] = "old"
        head = lift(truncation, w0_new, p)
        lam_p, theta_p = representative(truncation, p)
        for s, t in truncation.symbols.pairs:
            if (s, t) == (s0, t0):
                continue
            target = truncation.normalize(
                p1.m,
                lam1.with_prefix(lam_p.prefix(kappa - 1)).with_entry(kappa, s),
                theta1.with_prefix(theta_p.prefix(kappa - 1)).with_entry(kappa, t),
            )
            tail = reverse(lift(truncation, back, target))
            spliced = concat(head.bare(), tail.bare())
            law[spliced] = law.get(spliced, Fraction(0)) + q * weights.pair(s, t) / norm
            events[spliced] = f"new:{s},{t}"
    logger.debug(f"expansion_curve k={k} j_cut={j_cut}: socket {w0_new.end.key()}, {len(law)} walks")
    info = {"k": k, "j_cut": j_cut, "kappa": kappa, "xi": w0_new.end.key(), "w0_length": w0_new.length,
            "branch": list(branch)}
    return CurveDistribution(law, events, info)


def expansion_branch_probabilities(truncation: GraphTruncation, s0: str, t0: str) -> Dict[str, Fraction]:
    w = truncation.weights
    norm = w.s1 * w.s2
    out = {"old": w.pair(s0, t0) / norm}
    for s, t in truncation.symbols.pairs:
        if (s, t) != (s0, t0):
            out[f"new:{s},{t}"] = w.pair(s, t) / norm
    return out


def expansion_events(curve: CurveDistribution) -> List[str]:
    return sorted(set(curve.events.values()))
