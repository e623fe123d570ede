from fractions import Fraction
from typing import Dict, List

from src.consts import SPADE
from src.graph_params.symbols import Label
from src.doubling_graph.truncation import GraphTruncation
from src.doubling_graph.vertex import Point, VertexClass, VertexKind, project
from src.geodesy.distance import distance, point_distances
from src.geodesy.label_diff import label_diff
from src.walks.lemma_walks import rolled_lambda
from src.walks.walk import Walk, label_monotone, reverse


def _common(truncation: GraphTruncation, w: Walk, start: VertexClass, k: int, direction: int, C: float) -> List[str]:
    sigma = truncation.scales.sigma(k)
    failures = []
    if w.start != start:
        failures.append(f"walk starts at {w.start.key()}, not {start.key()}")
    if w.direction != direction:
        failures.append(f"walk is not monotone in direction {direction}")
    if not sigma <= w.length <= C * sigma:
        failures.append(f"len {w.length} outside [{sigma}, {C}*{sigma}]")
    return failures


def audit_gluing_walk(truncation: GraphTruncation, w: Walk, p: VertexClass, k: int, direction: int,
                      lam: Label, theta: Label, C: float = 3) -> List[str]:
    failures = _common(truncation, w, p, k, direction, C)
    sigma = truncation.scales.sigma(k)
    end = w.end
    if end.order != k or end.kind is VertexKind.PLAIN:
        failures.append(f"end {end.key()} is not a gluing or socket point of order {k}")
    shift = direction * (end.m - p.m)
    if not sigma <= shift <= C * sigma:
        failures.append(f"displacement {shift} outside [{sigma}, {C}*{sigma}]")
    if any((e.lam, e.theta) != (lam, theta) for e in w.edges):
        failures.append("edge labels are not constantly (lam, theta)")
    return failures


def audit_descend(truncation: GraphTruncation, w: Walk, p: VertexClass, k: int, direction: int,
                  lam: Label, theta: Label, C: float = 5) -> List[str]:
    scales = truncation.scales
    failures = _common(truncation, w, p, k, direction, C)
    if w.end.kind is not VertexKind.SOCKET or w.end.order != k:
        failures.append(f"end {w.end.key()} is not a socket of order {k}")
    if any(e.theta != theta for e in w.edges):
        failures.append("theta changes along the descent")
    head = (3 * scales.sigma(k) + 1) // 2
    if any((e.lam, e.theta) != (lam, theta) for e in w.edges[:head]):
        failures.append(f"labels change within the first {head} edges")
    tau = w.tau_markers()
    if sorted(tau) != list(range(1, k)):
        failures.append(f"tau markers {sorted(tau)} != 1..{k - 1}")
        return failures
    if any(tau[i + 1] >= tau[i] for i in range(1, k - 1)):
        failures.append("tau markers are not strictly decreasing in i")
    if k > 1 and not head <= tau[k - 1] <= C * scales.sigma(k):
        failures.append(f"tau_{k - 1} = {tau[k - 1]} outside [{head}, C*sigma_{k}]")
    for i in range(1, k):
        if w.vertices[tau[i]].order != i:
            failures.append(f"tau_{i} sits at order {w.vertices[tau[i]].order}")
        if not scales.sigma(i) <= w.length - tau[i] <= C * scales.sigma(i):
            failures.append(f"len - tau_{i} = {w.length - tau[i]} outside [sigma_{i}, C*sigma_{i}]")
    for t, e in enumerate(w.edges, start=1):
        passed = [i for i in range(1, k) if t > tau[i]]
        expected = rolled_lambda(lam, min(passed), k - 1) if passed else lam
        if e.lam != expected:
            failures.append(f"edge {t} has lambda {e.lam.key()}, expected {expected.key()}")
            break
    if not label_monotone(w, increasing=False):
        failures.append("lambda labels are not nonincreasing")
    return failures


def audit_ascend(truncation: GraphTruncation, w: Walk, v: VertexClass, k: int, direction: int,
                 lam: Label, theta: Label, C: float = 5) -> List[str]:
    scales = truncation.scales
    failures = _common(truncation, w, v, k, direction, C)
    last = w.edges[-1] if w.edges else None
    if last is None or (last.lam, last.theta) != (lam, theta):
        failures.append("walk does not end on (lam, theta)")
    if w.end.order != 0:
        failures.append(f"end {w.end.key()} has order {w.end.order}")
    if any(e.theta != theta for e in w.edges):
        failures.append("theta changes along the ascent")
    tail = scales.sigma(k) // 2
    if len({(e.lam, e.theta) for e in w.edges[w.length - tail:]}) > 1:
        failures.append(f"labels change within the last {tail} edges")
    tau = w.tau_markers()
    if sorted(tau) != list(range(1, k)):
        failures.append(f"tau markers {sorted(tau)} != 1..{k - 1}")
        return failures
    if any(tau[i + 1] <= tau[i] for i in range(1, k - 1)):
        failures.append("tau markers are not strictly increasing in i")
    if k > 1 and tau[k - 1] > w.length - scales.sigma(k) / 2:
        failures.append(f"tau_{k - 1} = {tau[k - 1]} is within sigma_{k}/2 of the end")
    for i in range(1, k):
        if w.vertices[tau[i]].order != i:
            failures.append(f"tau_{i} sits at order {w.vertices[tau[i]].order}")
        if not scales.sigma(i) <= tau[i] <= C * scales.sigma(i):
            failures.append(f"tau_{i} = {tau[i]} outside [sigma_{i}, C*sigma_{i}]")
    for t, e in enumerate(w.edges, start=1):
        restored = max([i for i in range(1, k) if t > tau[i]], default=0)
        expected = rolled_lambda(lam, restored + 1, k - 1)
        if e.lam != expected:
            failures.append(f"edge {t} has lambda {e.lam.key()}, expected {expected.key()}")
            break
    if not label_monotone(w, increasing=True):
        failures.append("lambda labels are not nondecreasing")
    return failures


def audit_good_walk(truncation: GraphTruncation, w: Walk, x: Point, y: Point, C: float) -> List[str]:
    failures = []
    d = distance(truncation, x, y)
    if w.length > C * d:
        failures.append(f"(GW1) len {w.length} > {C}*d={C * d}")
    if distance(truncation, w.start, x) >= 1:
        failures.append(f"(GW2) start {w.start.key()} is not within 1 of x")
    if distance(truncation, w.end, y) >= 1:
        failures.append(f"(GW2) end {w.end.key()} is not within 1 of y")
    from_x = point_distances(truncation, x, radius=w.length + 1)
    for i, v in enumerate(w.vertices[1:], start=1):
        if from_x.get(v, Fraction(w.length + 2)) < Fraction(i) / Fraction(C):
            failures.append(f"(GW3) d(w_{i}, x)={from_x[v]} < {i}/{C}")
            break
    return failures


def good_walk_constants(truncation: GraphTruncation, w: Walk, x: Point, y: Point) -> Dict[str, float]:
    d = distance(truncation, x, y)
    diff = label_diff(truncation, w.start, w.end)
    from_x = point_distances(truncation, x, radius=w.length + 1)
    gw3 = max((i / float(from_x[v]) for i, v in enumerate(w.vertices[1:], start=1) if from_x.get(v)), default=0.0)
    scale = max(abs(float(project(x) - project(y))), float(truncation.scales.sigma(diff.kmax)))
    return {
        "d": float(d),
        "gw1": w.length / float(d),
        "gw3": gw3,
        "length_ratio": w.length / scale,
    }


def audit_gwa1(truncation: GraphTruncation, w: Walk, x: VertexClass, y: VertexClass) -> List[str]:
    """Label pattern around the markers s_k of a walk built by gw_part1."""
    if x.m > y.m:
        w, x, y = reverse(w), y, x
    diff = label_diff(truncation, x, y)
    lam_x, theta_x = diff.x_labels
    lam_y, theta_y = diff.y_labels
    failures = []
    previous = -1
    for k in diff.nset:
        s = w.markers.get(f"s_{k}")
        if s is None:
            failures.append(f"missing marker s_{k}")
            continue
        if s <= previous:
            failures.append(f"s_{k}={s} is not after the previous marker")
        previous = s
        theta_same = theta_x.at(k) == theta_y.at(k)
        for t, e in enumerate(w.edges, start=1):
            lam_k, theta_k = e.lam.at(k), e.theta.at(k)
            if t <= s:
                ok = lam_k == lam_x.at(k) and theta_k == theta_x.at(k)
            else:
                ok = lam_k in (lam_y.at(k), SPADE) and theta_k == (theta_x.at(k) if theta_same else theta_y.at(k))
            if not ok:
                failures.append(f"edge {t} breaks the entry-{k} pattern around s_{k}={s}")
                break
    return failures


def audit_gwa3(truncation: GraphTruncation, w: Walk, x: VertexClass, y: VertexClass) -> List[str]:
    """Entry kmax is constant on each side of u_kmax and switches only there."""
    failures = []
    u = w.markers.get("u_kmax")
    if u is None:
        return ["missing marker u_kmax"]
    diff = label_diff(truncation, x, y)
    kmax = diff.kmax
    pivot = w.vertices[u]
    if pivot.order != kmax:
        failures.append(f"u_kmax has order {pivot.order}, expected {kmax}")
    if diff.theta_differs(kmax) and pivot.kind is not VertexKind.SOCKET:
        failures.append("theta(kmax) changes but u_kmax is not a socket")
    before = {(e.lam.at(kmax), e.theta.at(kmax)) for e in w.edges[:u]}
    after = {(e.lam.at(kmax), e.theta.at(kmax)) for e in w.edges[u:]}
    if len(before) > 1 or len(after) > 1:
        failures.append(f"entry {kmax} is not constant on each side of u_kmax")
    elif before and after and diff.theta_differs(kmax) and next(iter(before))[1] == next(iter(after))[1]:
        failures.append(f"theta({kmax}) does not switch at u_kmax")
    return failures


def max_lemma_constant(truncation: GraphTruncation, w: Walk, k: int, ascending: bool = False) -> float:
    """Measured constant C of a lemma walk: len and tau gaps relative to their scales."""
    scales = truncation.scales
    ratios = [w.length / scales.sigma(k), abs(w.end.m - w.start.m) / scales.sigma(k)]
    for i, index in w.tau_markers().items():
        gap = index if ascending else w.length - index
        ratios.append(gap / scales.sigma(i))
    return max(ratios)
