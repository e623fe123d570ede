import logging

from fractions import Fraction
from typing import Callable, Dict, Iterator, List, Mapping, Optional, Tuple

import numpy as np

from src.exceptions import LawMismatchError, SupportError
from src.doubling_graph.vertex import Edge, VertexClass
from src.measure.edge_measure import EdgeMeasure
from src.walks.walk import Walk, concat, reverse

logger = logging.getLogger(__name__)

Law = Dict[VertexClass, Fraction]


def _law_str(law: Mapping[VertexClass, Fraction]) -> str:
    items = sorted(law.items(), key=lambda item: item[0].sort_key())
    return ", ".join(f"{p.key()}: {q}" for p, q in items[:4]) + (" ..." if len(items) > 4 else "")


class CurveDistribution:
    """Exact finite law of a random curve: walks with rational probabilities.

    `events` tags walks with the branch that produced them (for instance "old" or
    "new:s,t"), `info` carries construction data such as the socket used.
    """

    def __init__(self, law: Mapping[Walk, Fraction], events: Optional[Mapping[Walk, str]] = None,
                 info: Optional[Dict] = None):
        merged: Dict[Walk, Fraction] = {}
        for w, p in law.items():
            p = Fraction(p)
            if p < 0:
                raise ValueError(f"negative probability {p} for {w!r}")
            if p:
                merged[w] = merged.get(w, Fraction(0)) + p
        total = sum(merged.values(), Fraction(0))
        if total != 1:
            raise ValueError(f"curve probabilities sum to {total}, not 1")
        self._law = merged
        self.events: Dict[Walk, str] = {w: tag for w, tag in (events or {}).items() if w in merged}
        self.info: Dict = dict(info or {})
        self._expectation: Optional[EdgeMeasure] = None
        self._support: Optional[List[Walk]] = None

    @classmethod
    def point_mass(cls, walk: Walk, event: Optional[str] = None) -> "CurveDistribution":
        return cls({walk: Fraction(1)}, events={walk: event} if event else None)

    def __len__(self) -> int:
        return len(self._law)

    def __contains__(self, w: Walk) -> bool:
        return w in self._law

    @property
    def support(self) -> List[Walk]:
        if self._support is None:
            self._support = sorted(self._law, key=Walk.sort_key)
        return self._support

    def prob(self, w: Walk) -> Fraction:
        return self._law.get(w, Fraction(0))

    def items(self) -> Iterator[Tuple[Walk, Fraction]]:
        for w in self.support:
            yield w, self._law[w]

    def expectation(self) -> EdgeMeasure:
        """E||Gamma||: mass(e) = sum over walks of prob * number of crossings of e."""
        if self._expectation is None:
            masses: Dict[Edge, Fraction] = {}
            for w, p in self._law.items():
                for e, n in w.crossings().items():
                    masses[e] = masses.get(e, Fraction(0)) + p * n
            self._expectation = EdgeMeasure(masses)
        return self._expectation

    def expected_length(self) -> Fraction:
        return sum((p * w.length for w, p in self._law.items()), Fraction(0))

    def _marginal(self, pick: Callable[[Walk], VertexClass]) -> Law:
        law: Law = {}
        for w, p in self._law.items():
            v = pick(w)
            law[v] = law.get(v, Fraction(0)) + p
        return law

    def start_law(self) -> Law:
        return self._marginal(lambda w: w.start)

    def end_law(self) -> Law:
        return self._marginal(lambda w: w.end)

    def edge_support(self) -> List[Edge]:
        return self.expectation().support()

    def reversed(self) -> "CurveDistribution":
        flipped = {reverse(w): p for w, p in self._law.items()}
        events = {reverse(w): tag for w, tag in self.events.items()}
        return CurveDistribution(flipped, events, self.info)

    def conditional(self, event_prefix: str) -> "CurveDistribution":
        """Law conditioned on the walks whose event tag starts with `event_prefix`."""
        kept = {w: p for w, p in self._law.items() if self.events.get(w, "").startswith(event_prefix)}
        mass = sum(kept.values(), Fraction(0))
        if not mass:
            raise ValueError(f"event {event_prefix!r} has probability 0")
        return CurveDistribution({w: p / mass for w, p in kept.items()},
                                 {w: self.events[w] for w in kept}, self.info)

    def event_probability(self, event_prefix: str) -> Fraction:
        return sum((p for w, p in self._law.items() if self.events.get(w, "").startswith(event_prefix)), Fraction(0))

    def sample_walks(self, n: int, seed: Optional[int] = None) -> List[Walk]:
        """Draws for profiling; every computation in the library uses the exact law."""
        rng = np.random.default_rng(seed)
        walks = self.support
        probs = np.array([float(self._law[w]) for w in walks])
        picks = rng.choice(len(walks), size=n, p=probs / probs.sum())
        return [walks[i] for i in picks]

    def to_dict(self, with_walks: bool = True) -> Dict:
        out = {
            "size": len(self),
            "expected_length": str(self.expected_length()),
            "start_law": {p.key(): str(q) for p, q in sorted(self.start_law().items(), key=lambda i: i[0].sort_key())},
            "end_law": {p.key(): str(q) for p, q in sorted(self.end_law().items(), key=lambda i: i[0].sort_key())},
            "expectation": self.expectation().to_dict(),
        }
        if with_walks:
            out["walks"] = [
                {"prob": str(p), "event": self.events.get(w), "edges": [e.key() for e in w.edges],
                 "start": w.start.key(), "end": w.end.key()}
                for w, p in self.items()
            ]
        return out

    def __repr__(self) -> str:
        return f"CurveDistribution({len(self)} walks, E[len]={self.expected_length()})"


def concat_curves(d1: CurveDistribution, d2: CurveDistribution, coupling=None) -> CurveDistribution:
    """Gamma_1 * Gamma_2.

    Without a coupling the second curve is drawn from d2 conditioned on starting where
    the first one ends, which needs end-law(d1) == start-law(d2). With a coupling tau the
    second curve is drawn conditioned on starting at end(W1) and ending at tau(start(W1)).
    """
    if coupling is None:
        if d1.end_law() != d2.start_law():
            raise LawMismatchError(f"end law of the first curve ({_law_str(d1.end_law())}) differs from the "
                                   f"start law of the second ({_law_str(d2.start_law())})")
        by_start: Dict[VertexClass, List[Tuple[Walk, Fraction]]] = {}
        for w, p in d2.items():
            by_start.setdefault(w.start, []).append((w, p))
        starts = d2.start_law()

        def pick(w1: Walk):
            return by_start[w1.end], starts[w1.end]
    else:
        if coupling.push(d1.start_law()) != d2.end_law():
            raise LawMismatchError("the coupling does not push the first start law onto the second end law")
        by_ends: Dict[Tuple[VertexClass, VertexClass], List[Tuple[Walk, Fraction]]] = {}
        for w, p in d2.items():
            by_ends.setdefault((w.start, w.end), []).append((w, p))

        def pick(w1: Walk):
            options = by_ends.get((w1.end, coupling(w1.start)))
            if not options:
                raise LawMismatchError(f"no second curve joins {w1.end.key()} to {coupling(w1.start).key()}")
            return options, sum((p for _, p in options), Fraction(0))

    law: Dict[Walk, Fraction] = {}
    events: Dict[Walk, str] = {}
    for w1, p1 in d1.items():
        options, mass = pick(w1)
        for w2, p2 in options:
            joined = concat(w1.bare(), w2.bare())
            law[joined] = law.get(joined, Fraction(0)) + p1 * p2 / mass
            tags = [t for t in (d1.events.get(w1), d2.events.get(w2)) if t]
            if tags:
                events[joined] = "+".join(tags)
    logger.debug(f"Concatenated {len(d1)} x {len(d2)} walks into {len(law)}")
    return CurveDistribution(law, events)


def lq_norm(d: CurveDistribution, ref: EdgeMeasure, Q: float) -> float:
    """sum_e (E||Gamma||(e) / ref(e))^Q ref(e)."""
    total = 0.0
    for e, mass in d.expectation().items():
        r = ref.mass(e)
        if not r:
            raise SupportError(f"curve charges edge {e.key()} outside the reference support")
        total += (float(mass) / float(r)) ** Q * float(r)
    return total
