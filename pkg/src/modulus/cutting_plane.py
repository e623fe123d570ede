import logging

from typing import List

import networkx as nx
import numpy as np

from src.consts import DEFAULT_MAX_PATHS, DEFAULT_SEPARATION_TOL
from src.exceptions import ConvergenceError
from src.modulus.abstractions import IModulusSolver, ModulusCertificate, Path
from src.modulus.kkt import certificate, separate, solve_restricted
from src.modulus.problem import ModulusProblem

logger = logging.getLogger(__name__)


class CuttingPlaneSolver(IModulusSolver):
    """Grows a path set until the shortest path under the current density has g-length >= 1 - tol."""

    def __init__(self, tol: float = DEFAULT_SEPARATION_TOL, max_paths: int = DEFAULT_MAX_PATHS):
        self.tol = tol
        self.max_paths = max_paths

    def solve(self, problem: ModulusProblem) -> ModulusCertificate:
        problem.check_connected()
        first = tuple(nx.shortest_path(problem.graph, problem.source, problem.target))
        paths: List[Path] = [first]
        rows = [problem.path_row(first)]
        seen = {first}
        lam = np.ones(1)
        iteration = 0
        while True:
            iteration += 1
            A = np.vstack(rows)
            g, lam, lower = solve_restricted(problem, A, lam)
            length, path = separate(problem, g)
            logger.debug(f"cutting plane {iteration}: {len(paths)} paths, dual {lower:.12g}, shortest {length:.12g}")
            if length >= 1 - self.tol:
                break
            if path in seen:
                logger.warning(f"cutting plane stalled on a known path at {len(paths)} paths (shortest {length:.3e})")
                break
            if len(paths) >= self.max_paths:
                upper = problem.objective(g / length) if length > 0 else float("inf")
                raise ConvergenceError(f"cutting plane reached {self.max_paths} paths", gap=upper - lower)
            paths.append(path)
            rows.append(problem.path_row(path))
            seen.add(path)
            lam = np.append(lam, 0.0)
        result = certificate(problem, g, lam, lower, paths, iteration)
        logger.info(f"Mod_{problem.P} = {result.value:.12g} (gap {result.gap:.3e}, {len(paths)} paths)")
        return result


def p_modulus(problem: ModulusProblem, tol: float = DEFAULT_SEPARATION_TOL,
              max_paths: int = DEFAULT_MAX_PATHS) -> ModulusCertificate:
    return CuttingPlaneSolver(tol, max_paths).solve(problem)
