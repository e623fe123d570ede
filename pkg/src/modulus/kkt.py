import logging

from typing import Tuple

import networkx as nx
import numpy as np

from scipy.optimize import linprog, minimize

from src.exceptions import ConvergenceError
from src.modulus.abstractions import ModulusCertificate, Path
from src.modulus.problem import ModulusProblem

logger = logging.getLogger(__name__)

# rows with multipliers below this fraction of the largest one are treated as inactive
ACTIVE_FRACTION = 1e-10
POLISH_RESIDUAL = 1e-14


def densities(A: np.ndarray, nu: np.ndarray, P: float, lam: np.ndarray) -> np.ndarray:
    """Minimizer over g >= 0 of the Lagrangian: g = (A^T lam / (P nu))^(1/(P-1))."""
    rho = np.maximum(A.T @ lam, 0.0)
    return np.power(rho / (P * nu), 1.0 / (P - 1))


def dual_value(A: np.ndarray, nu: np.ndarray, P: float, lam: np.ndarray) -> float:
    Q = P / (P - 1)
    rho = np.maximum(A.T @ lam, 0.0)
    return float(lam.sum() - (P - 1) * np.sum(nu * np.power(rho / (P * nu), Q)))


def kkt_polish(A: np.ndarray, nu: np.ndarray, P: float, lam: np.ndarray, iterations: int = 50) -> np.ndarray:
    """Newton iterations on A_S g(lam_S) = 1 over the active rows S, kept only if the dual improves."""
    lam = np.maximum(lam, 0.0)
    if not lam.any():
        return lam
    active = lam > ACTIVE_FRACTION * lam.max()
    B = A[active]
    x = lam[active]
    exponent = 1.0 / (P - 1)

    def residual(y: np.ndarray) -> np.ndarray:
        return B @ densities(B, nu, P, y) - 1.0

    r = residual(x)
    for _ in range(iterations):
        if np.max(np.abs(r)) < POLISH_RESIDUAL:
            break
        rho = B.T @ x
        g = densities(B, nu, P, x)
        safe = np.where(rho > 0, rho, 1.0)
        dg = np.where(rho > 0, exponent * g / safe, 0.0)
        J = (B * dg) @ B.T
        step = np.linalg.lstsq(J, -r, rcond=None)[0]
        t, accepted = 1.0, False
        while t > 1e-8:
            trial = x + t * step
            if np.all(trial >= 0):
                r_trial = residual(trial)
                if np.linalg.norm(r_trial) < np.linalg.norm(r):
                    accepted = True
                    break
            t /= 2
        if not accepted:
            break
        x, r = trial, r_trial
    polished = np.zeros_like(lam)
    polished[active] = x
    if dual_value(A, nu, P, polished) >= dual_value(A, nu, P, lam):
        return polished
    return lam


def solve_dual(A: np.ndarray, nu: np.ndarray, P: float, lam0: np.ndarray) -> np.ndarray:
    """Maximize the concave dual over lam >= 0 with L-BFGS-B, then polish on the active set."""

    def negated(lam: np.ndarray) -> Tuple[float, np.ndarray]:
        g = densities(A, nu, P, lam)
        return -dual_value(A, nu, P, lam), A @ g - 1.0

    result = minimize(negated, lam0, jac=True, method="L-BFGS-B", bounds=[(0.0, None)] * len(lam0),
                      options={"ftol": 1e-15, "gtol": 1e-12, "maxiter": 20000, "maxcor": 30})
    logger.debug(f"dual solve over {len(lam0)} paths: {result.nit} iterations, {result.message}")
    return kkt_polish(A, nu, P, result.x)


def solve_lp(A: np.ndarray, nu: np.ndarray) -> Tuple[np.ndarray, np.ndarray, float]:
    """P = 1: min nu.g subject to A g >= 1, g >= 0, with its multipliers."""
    result = linprog(nu, A_ub=-A, b_ub=-np.ones(len(A)), bounds=[(0.0, None)] * len(nu), method="highs")
    if result.status != 0:
        raise ConvergenceError(f"restricted linear program failed: {result.message}")
    return result.x, -result.ineqlin.marginals, float(result.fun)


def solve_restricted(problem: ModulusProblem, A: np.ndarray, lam0: np.ndarray) -> Tuple[np.ndarray, np.ndarray, float]:
    """Optimal (g, multipliers, dual value) of the problem restricted to the rows of A."""
    nu = problem.weights
    if problem.P == 1:
        return solve_lp(A, nu)
    lam = solve_dual(A, nu, problem.P, lam0)
    return densities(A, nu, problem.P, lam), lam, dual_value(A, nu, problem.P, lam)


def separate(problem: ModulusProblem, g: np.ndarray) -> Tuple[float, Path]:
    """Shortest path from source to target under the edge lengths g(var) * length."""

    def weight(u, v, data) -> float:
        return g[problem.index[data["var"]]] * data["length"]

    length, path = nx.single_source_dijkstra(problem.graph, problem.source, problem.target, weight=weight)
    return float(length), tuple(path)


def certificate(problem: ModulusProblem, g: np.ndarray, lam: np.ndarray, lower: float,
                paths, iterations: int) -> ModulusCertificate:
    """Rescale g so that the shortest path has g-length exactly 1."""
    shortest, _ = separate(problem, g)
    if shortest <= 0:
        raise ConvergenceError("density vanishes along a path joining the endpoints", gap=float("inf"))
    admissible = g / shortest
    value = problem.objective(admissible)
    return ModulusCertificate(
        variables=problem.variables, density=admissible, paths=list(paths), value=value,
        lower=min(lower, value), iterations=iterations, multipliers=np.asarray(lam, dtype=float),
    )
