import logging

from dataclasses import dataclass
from typing import Dict, Optional

from src.consts import DEFAULT_MAX_PATHS, DEFAULT_PAIR_MEASURE_C, DEFAULT_SEPARATION_TOL
from src.doubling_graph.truncation import GraphTruncation
from src.doubling_graph.vertex import Edge, Point
from src.geodesy.boxes import Box
from src.measure.edge_measure import EdgeMeasure
from src.curves.distribution import CurveDistribution, lq_norm
from src.modulus.abstractions import ModulusCertificate
from src.modulus.factory import ModulusSolverFactory
from src.modulus.problem import ModulusProblem, modulus_problem

logger = logging.getLogger(__name__)


@dataclass
class PiCondition:
    value: float
    lower: float
    d: float
    P: float
    C: float
    problem: ModulusProblem
    certificate: ModulusCertificate

    def to_dict(self) -> Dict:
        return {
            "value": self.value, "lower": self.lower, "d": self.d, "P": self.P, "C": self.C,
            "modulus": self.certificate.value, "gap": self.certificate.gap,
            "paths": len(self.certificate.paths), "edges": self.problem.size,
        }


def pi_condition(truncation: GraphTruncation, p: Point, q: Point, P: float, C: float = DEFAULT_PAIR_MEASURE_C,
                 box: Optional[Box] = None, tol: float = DEFAULT_SEPARATION_TOL,
                 max_paths: int = DEFAULT_MAX_PATHS, solver: str = "cutting_plane") -> PiCondition:
    problem = modulus_problem(truncation, p, q, P, C, box=box)
    cert = ModulusSolverFactory.get_solver(solver, tol=tol, max_paths=max_paths).solve(problem)
    scale = problem.d ** (P - 1)
    return PiCondition(value=scale * cert.value, lower=scale * cert.lower, d=problem.d, P=P, C=C,
                       problem=problem, certificate=cert)


def pi_condition_1(truncation: GraphTruncation, p: Point, q: Point, P: float, C: float = DEFAULT_PAIR_MEASURE_C,
                   box: Optional[Box] = None, tol: float = DEFAULT_SEPARATION_TOL) -> float:
    """d(p, q)^(P-1) Mod_P(p, q) against the pair measure; uniformly bounded below iff the PI holds."""
    return pi_condition(truncation, p, q, P, C, box=box, tol=tol).value


@dataclass
class HolderReport:
    g_norm: float
    density_norm: float
    expected_g_length: float

    @property
    def product(self) -> float:
        return self.g_norm * self.density_norm


def holder_check(curve: CurveDistribution, certificate: ModulusCertificate, problem: ModulusProblem) -> HolderReport:
    """1 <= E int g d||Gamma|| <= ||g||_P ||dE||Gamma|| / dnu||_Q over the background measure of `problem`."""
    P, Q = problem.P, problem.Q
    nu = EdgeMeasure({var: mass for var, mass in problem.nu.items() if isinstance(var, Edge)})
    expectation = curve.expectation()
    density = certificate.as_dict()
    expected = sum(float(mass) * density.get(e, 0.0) for e, mass in expectation.items())
    report = HolderReport(
        g_norm=certificate.value ** (1 / P),
        density_norm=lq_norm(curve, nu, Q) ** (1 / Q),
        expected_g_length=expected,
    )
    logger.debug(f"Hoelder chain: E int g = {expected:.6g} <= {report.product:.6g}")
    return report
