import logging

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional

import numpy as np

from src.consts import DEFAULT_MAX_PATHS, DEFAULT_SEPARATION_TOL, END, SPADE
from src.exceptions import WindowError
from src.graph_params.scales import ScaleTable
from src.graph_params.symbols import Label
from src.graph_params.weights import WeightTable
from src.doubling_graph.truncation import GraphTruncation
from src.doubling_graph.vertex import Edge, VertexClass
from src.geodesy.boxes import Box
from src.modulus.cutting_plane import p_modulus
from src.modulus.kkt import separate
from src.modulus.problem import ModulusProblem, modulus_problem

logger = logging.getLogger(__name__)

DEFAULT_BAD_BOX_C0 = 1.0


@dataclass
class BadBox:
    """Two points at m -/+ sigma_k on spade lines whose theta differ at the order k + M of m."""
    k: int
    M: int
    m: int
    R: Fraction
    C0: float
    lam: Label
    theta0: Label
    theta1: Label
    p0: VertexClass
    p1: VertexClass

    def box(self, l: int) -> Box:
        return Box((self.m - self.R, self.m + self.R), frozenset({(self.lam, self.theta0)}), self.k + l)


@dataclass
class BadBoxReport:
    k: int
    P: float
    M: int
    l: int
    d: float
    lhs: float
    lhs_lower: float
    rhs_bound: float
    explicit_value: float
    explicit_shortest: float
    modulus: float
    gap: float

    @property
    def explicit_admissible(self) -> bool:
        return self.explicit_shortest >= 1 - 1e-9

    def to_dict(self) -> Dict:
        return {
            "k": self.k, "P": self.P, "M": self.M, "l": self.l, "d": self.d,
            "lhs": self.lhs, "lhs_lower": self.lhs_lower, "rhs_bound": self.rhs_bound,
            "explicit_value": self.explicit_value, "explicit_shortest": self.explicit_shortest,
            "explicit_admissible": self.explicit_admissible, "modulus": self.modulus, "gap": self.gap,
        }


def bad_box_scale(scales: ScaleTable, k: int, C0: float = DEFAULT_BAD_BOX_C0) -> int:
    """Smallest M >= 1 with sigma_{k+M} > 3 C0 sigma_k, so m is the only integer of order k + M within R."""
    R = 3 * Fraction(C0).limit_denominator(1000) * scales.sigma(k)
    M = 1
    while scales.sigma(k + M) <= R:
        M += 1
    return M


def bad_box_rhs(scales: ScaleTable, weights: WeightTable, k: int, P: float) -> float:
    """(k-1)^-P sum_{i=1}^{k-1} (sigma_k / sigma_i)^(P-1) (w_spade S1^-1)^(k-1-i)."""
    if k < 2:
        raise ValueError(f"the bad-box bound needs k >= 2, got {k}")
    ratio = float(weights.spade / weights.s1)
    total = sum((scales.sigma(k) / scales.sigma(i)) ** (P - 1) * ratio ** (k - 1 - i) for i in range(1, k))
    return total / (k - 1) ** P


def build_bad_box(truncation: GraphTruncation, k: int, C0: float = DEFAULT_BAD_BOX_C0) -> BadBox:
    if k < 2:
        raise ValueError(f"bad boxes need k >= 2, got {k}")
    scales = truncation.scales
    M = bad_box_scale(scales, k, C0)
    order = k + M
    if order > truncation.depth:
        raise WindowError(f"window too small for (M, l): k + M = {order} exceeds depth {truncation.depth}")
    R = 3 * Fraction(C0).limit_denominator(1000) * scales.sigma(k)
    m = scales.sigma(order)
    if not (truncation.in_window(int(m - R) - 1) and truncation.in_window(int(m + R) + 1)):
        raise WindowError(f"window too small for (M, l): [{m - R}, {m + R}] leaves [{truncation.m_lo}, {truncation.m_hi}]")
    lam = Label([SPADE] * order)
    theta0 = Label()
    other = next(s for s in truncation.symbols.sigma2 if s != END)
    theta1 = theta0.with_entry(order, other)
    p0 = truncation.normalize(m - scales.sigma(k), lam, theta0)
    p1 = truncation.normalize(m + scales.sigma(k), lam, theta1)
    return BadBox(k=k, M=M, m=m, R=R, C0=C0, lam=lam, theta0=theta0, theta1=theta1, p0=p0, p1=p1)


def calibrate_box_depth(truncation: GraphTruncation, bad: BadBox, problem: ModulusProblem) -> int:
    """Smallest l >= M whose box contains every edge of the background measure."""
    edges = [var for var in problem.variables if isinstance(var, Edge)]
    for l in range(bad.M, truncation.depth - bad.k + 1):
        box = bad.box(l)
        if all(box.contains_coordinates(Fraction(e.m), e.lam, e.theta)
               and box.contains_coordinates(Fraction(e.m + 1), e.lam, e.theta) for e in edges):
            return l
    raise WindowError(f"window too small for (M, l): no box of depth <= {truncation.depth} holds "
                      f"B({{p0, p1}}, C0 d) at k={bad.k}")


def explicit_bad_box_density(truncation: GraphTruncation, bad: BadBox, l: int, problem: ModulusProblem) -> np.ndarray:
    """g = (k-1)^-1 (sigma_i - sigma_{i-1})^-1 on the edges of the annuli sigma_{i-1} <= |t - m| <= sigma_i
    (sigma_0 = 0) whose lambda is spade on entries i .. k+M-1, and 0 elsewhere."""
    scales = truncation.scales
    k, top = bad.k, bad.k + bad.M
    g = np.zeros(problem.size)

    def sigma(i: int) -> int:
        return 0 if i == 0 else scales.sigma(i)

    for idx, var in enumerate(problem.variables):
        e: Edge = var
        if not e.theta.agrees_beyond(bad.theta0, k + l):
            continue
        offset = min(abs(e.m - bad.m), abs(e.m + 1 - bad.m))
        far = max(abs(e.m - bad.m), abs(e.m + 1 - bad.m))
        for i in range(1, k):
            if sigma(i - 1) <= offset and far <= sigma(i):
                if all(e.lam.at(j) == SPADE for j in range(i, top)):
                    g[idx] = 1 / ((k - 1) * (sigma(i) - sigma(i - 1)))
                break
    return g


def bad_box_experiment(truncation: GraphTruncation, k: int, P: float, C0: float = DEFAULT_BAD_BOX_C0,
                       tol: float = DEFAULT_SEPARATION_TOL, max_paths: int = DEFAULT_MAX_PATHS,
                       bad: Optional[BadBox] = None) -> BadBoxReport:
    """d(p0, p1)^(P-1) Mod_P(p0, p1) against the pair measure of constant C0, with the explicit bound."""
    bad = bad or build_bad_box(truncation, k, C0)
    problem = modulus_problem(truncation, bad.p0, bad.p1, P, C=C0)
    l = calibrate_box_depth(truncation, bad, problem)
    cert = p_modulus(problem, tol=tol, max_paths=max_paths)
    g = explicit_bad_box_density(truncation, bad, l, problem)
    shortest, _ = separate(problem, g)
    scale = problem.d ** (P - 1)
    report = BadBoxReport(
        k=k, P=P, M=bad.M, l=l, d=problem.d,
        lhs=scale * cert.value, lhs_lower=scale * cert.lower,
        rhs_bound=bad_box_rhs(truncation.scales, truncation.weights, k, P),
        explicit_value=scale * problem.objective(g), explicit_shortest=shortest,
        modulus=cert.value, gap=cert.gap,
    )
    logger.info(f"bad box k={k} P={P}: lhs={report.lhs:.6g}, rhs={report.rhs_bound:.6g}, explicit={report.explicit_value:.6g}")
    return report

