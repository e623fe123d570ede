import logging

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

from src.consts import WILDCARD
from src.exceptions import DepthError, PreconditionError
from src.graph_params.symbols import Label
from src.doubling_graph.truncation import GraphTruncation
from src.doubling_graph.vertex import VertexClass

logger = logging.getLogger(__name__)

Law = Dict[VertexClass, Fraction]
LabelString = Tuple


class Flavor(str, Enum):
    FULL = "full"
    THETA = "theta"


@dataclass
class CanonicalEnsemble:
    """Weighted label variants of `base` at the same position.

    FULL varies (lambda, theta) on entries <= depth, THETA varies theta only.
    `strings` maps the varied prefix s(p') to the point p'.
    """
    base: VertexClass
    depth: int
    flavor: Flavor
    prob: Law
    strings: Dict[LabelString, VertexClass] = field(repr=False)

    @property
    def support(self) -> List[VertexClass]:
        return sorted(self.prob, key=VertexClass.sort_key)

    def __getitem__(self, p: VertexClass) -> Fraction:
        return self.prob.get(p, Fraction(0))

    def __len__(self) -> int:
        return len(self.prob)

    def total(self) -> Fraction:
        return sum(self.prob.values(), Fraction(0))

    def law(self) -> Law:
        return dict(self.prob)


def representative(truncation: GraphTruncation, p: VertexClass) -> Tuple[Label, Label]:
    """Labels of some line through p; wildcard entries take the least symbol."""
    return truncation.fiber(p)[0]


def label_string(lam: Label, theta: Label, k: int, flavor: Flavor = Flavor.FULL) -> LabelString:
    if WILDCARD in lam.prefix(k) or WILDCARD in theta.prefix(k):
        raise PreconditionError(f"labels {lam.key()} / {theta.key()} are not determined up to entry {k}")
    if flavor is Flavor.THETA:
        return theta.prefix(k)
    return tuple(zip(lam.prefix(k), theta.prefix(k)))


def canonical_ensemble(truncation: GraphTruncation, p: VertexClass, k: int, flavor: Flavor = Flavor.FULL) -> CanonicalEnsemble:
    if k < 0:
        raise ValueError(f"ensemble depth must be >= 0, got {k}")
    if k > truncation.depth:
        raise DepthError(f"ensemble depth {k} exceeds truncation depth {truncation.depth}")
    if flavor is Flavor.FULL and k > 0 and p.order != 0:
        raise PreconditionError(f"full ensembles live at order-0 points, {p.key()} has order {p.order}")
    w = truncation.weights
    lam0, theta0 = representative(truncation, p)
    prob: Law = {}
    strings: Dict[LabelString, VertexClass] = {}
    if flavor is Flavor.FULL:
        norm = (w.s1 * w.s2) ** k
        for lam_prefix, theta_prefix in truncation.symbols.prefixes(k):
            q = truncation.normalize(p.m, lam0.with_prefix(lam_prefix), theta0.with_prefix(theta_prefix))
            weight = Fraction(1)
            for s, t in zip(lam_prefix, theta_prefix):
                weight *= w.pair(s, t)
            prob[q] = prob.get(q, Fraction(0)) + weight / norm
            strings[tuple(zip(lam_prefix, theta_prefix))] = q
    else:
        norm = w.s2 ** k
        for theta_label in truncation.symbols.theta_labels(k):
            theta_prefix = theta_label.prefix(k)
            q = truncation.normalize(p.m, lam0, theta0.with_prefix(theta_prefix))
            weight = Fraction(1)
            for t in theta_prefix:
                weight *= w[t]
            prob[q] = prob.get(q, Fraction(0)) + weight / norm
            strings[theta_prefix] = q
    return CanonicalEnsemble(base=p, depth=k, flavor=flavor, prob=prob, strings=strings)


@dataclass
class TransportMap:
    """tau: the point with the same label prefix s(p') at the target position."""
    depth: int
    mapping: Dict[VertexClass, VertexClass]
    source: Optional[CanonicalEnsemble] = None
    target: Optional[CanonicalEnsemble] = None

    def __call__(self, p: VertexClass) -> VertexClass:
        try:
            return self.mapping[p]
        except KeyError:
            raise PreconditionError(f"{p.key()} is outside the domain of the transport map") from None

    def push(self, law: Mapping[VertexClass, Fraction]) -> Law:
        out: Law = {}
        for p, q in law.items():
            image = self(p)
            out[image] = out.get(image, Fraction(0)) + q
        return out

    def pushes_forward(self) -> bool:
        """tau_# P0 == P1 for the attached ensembles."""
        if self.source is None or self.target is None:
            return False
        return self.push(self.source.prob) == self.target.prob


def string_map(truncation: GraphTruncation, points: Iterable[VertexClass], target: VertexClass, k: int) -> TransportMap:
    """Send each point to the point above `target` whose first k label entries are the same."""
    lam_t, theta_t = representative(truncation, target)
    mapping = {}
    for p in points:
        lam, theta = representative(truncation, p)
        prefix = label_string(lam, theta, k)
        mapping[p] = truncation.normalize(
            target.m,
            lam_t.with_prefix([s for s, _ in prefix]),
            theta_t.with_prefix([t for _, t in prefix]),
        )
    return TransportMap(depth=k, mapping=mapping)


def transport_map(truncation: GraphTruncation, p0: VertexClass, p1: VertexClass, k: int) -> TransportMap:
    source = canonical_ensemble(truncation, p0, k)
    target = canonical_ensemble(truncation, p1, k)
    mapping = {source.strings[s]: target.strings[s] for s in source.strings}
    return TransportMap(depth=k, mapping=mapping, source=source, target=target)
