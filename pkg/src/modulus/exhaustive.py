import logging

from typing import List

import networkx as nx
import numpy as np

from scipy.optimize import minimize

from src.consts import DEFAULT_MAX_PATHS
from src.exceptions import ConvergenceError
from src.modulus.abstractions import IModulusSolver, ModulusCertificate, Path
from src.modulus.kkt import certificate, densities, dual_value, kkt_polish, solve_lp
from src.modulus.problem import ModulusProblem

logger = logging.getLogger(__name__)


class ExhaustiveSolver(IModulusSolver):
    """Every simple path as a constraint; SLSQP on the primal, then a KKT polish of its multipliers."""

    def __init__(self, max_paths: int = DEFAULT_MAX_PATHS):
        self.max_paths = max_paths

    def solve(self, problem: ModulusProblem) -> ModulusCertificate:
        problem.check_connected()
        paths: List[Path] = []
        for path in nx.all_simple_paths(problem.graph, problem.source, problem.target):
            paths.append(tuple(path))
            if len(paths) > self.max_paths:
                raise ConvergenceError(f"more than {self.max_paths} simple paths to enumerate")
        A = np.vstack([problem.path_row(p) for p in paths])
        nu, P = problem.weights, problem.P
        if P == 1:
            g, lam, lower = solve_lp(A, nu)
            return certificate(problem, g, lam, lower, paths, 1)

        x0 = np.full(problem.size, 1.0 / A.sum(axis=1).min())
        result = minimize(
            lambda g: (float(nu @ np.power(g, P)), P * nu * np.power(g, P - 1)),
            x0, jac=True, method="SLSQP", bounds=[(0.0, None)] * problem.size,
            constraints=[{"type": "ineq", "fun": lambda g: A @ g - 1.0, "jac": lambda g: A}],
            options={"ftol": 1e-15, "maxiter": 2000},
        )
        g = np.maximum(result.x, 0.0)
        logger.debug(f"exhaustive SLSQP over {len(paths)} paths: {result.nit} iterations, {result.message}")

        lam = np.zeros(len(paths))
        tight = np.abs(A @ g - 1.0) < 1e-6
        if tight.any():
            stationarity = P * nu * np.power(g, P - 1)
            lam[tight] = np.maximum(np.linalg.lstsq(A[tight].T, stationarity, rcond=None)[0], 0.0)
        lam = kkt_polish(A, nu, P, lam)
        lower = dual_value(A, nu, P, lam)
        if lam.any():
            dual_g = densities(A, nu, P, lam)
            if np.min(A @ dual_g) > 0 and problem.objective(dual_g / np.min(A @ dual_g)) <= problem.objective(g):
                g = dual_g
        return certificate(problem, g, lam, lower, paths, result.nit)


def exhaustive_modulus(problem: ModulusProblem, max_paths: int = DEFAULT_MAX_PATHS) -> ModulusCertificate:
    return ExhaustiveSolver(max_paths).solve(problem)
