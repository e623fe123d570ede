from dataclasses import dataclass
from typing import List, Tuple

from src.graph_params.symbols import Label
from src.doubling_graph.truncation import GraphTruncation
from src.doubling_graph.vertex import EdgePoint, Point, VertexClass
from src.geodesy.distance import distance


@dataclass(frozen=True)
class LabelDiff:
    x: Point
    y: Point
    nset: Tuple[int, ...]
    kmax: int
    x_labels: Tuple[Label, Label]
    y_labels: Tuple[Label, Label]

    def theta_differs(self, k: int) -> bool:
        return self.x_labels[1].at(k) != self.y_labels[1].at(k)


def _choices(truncation: GraphTruncation, p: Point) -> List[Tuple[Label, Label]]:
    if isinstance(p, EdgePoint):
        return [(p.edge.lam, p.edge.theta)]
    return truncation.fiber(p)


def mismatch_set(a: Tuple[Label, Label], b: Tuple[Label, Label]) -> Tuple[int, ...]:
    lam_diff = set(a[0].differing_entries(b[0]))
    theta_diff = set(a[1].differing_entries(b[1]))
    return tuple(sorted(lam_diff | theta_diff))


def label_diff(truncation: GraphTruncation, x: Point, y: Point) -> LabelDiff:
    """N(x, y) over the label choices of x and y minimizing its size; ties go to the lexicographically least."""
    best = None
    for xl in _choices(truncation, x):
        for yl in _choices(truncation, y):
            nset = mismatch_set(xl, yl)
            candidate = (len(nset), nset, xl, yl)
            if best is None or candidate < best:
                best = candidate
    _, nset, xl, yl = best
    return LabelDiff(x=x, y=y, nset=nset, kmax=max(nset) if nset else 0, x_labels=xl, y_labels=yl)


def exc_estimate_holds(truncation: GraphTruncation, x: Point, y: Point) -> bool:
    """When lg d(x,y) < max N(x,y), every other k in N(x,y) has sigma_k <= d(x,y)."""
    diff = label_diff(truncation, x, y)
    d = distance(truncation, x, y)
    if truncation.scales.disc_log(d) >= diff.kmax:
        return True
    return all(truncation.scales.sigma(k) <= d for k in diff.nset if k != diff.kmax)
