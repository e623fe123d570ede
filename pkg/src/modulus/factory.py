from src.consts import DEFAULT_MAX_PATHS, DEFAULT_SEPARATION_TOL
from src.modulus.abstractions import IModulusSolver
from src.modulus.cutting_plane import CuttingPlaneSolver
from src.modulus.exhaustive import ExhaustiveSolver


class ModulusSolverFactory:
    @staticmethod
    def get_solver(solver: str, tol: float = DEFAULT_SEPARATION_TOL, max_paths: int = DEFAULT_MAX_PATHS) -> IModulusSolver:
        if solver == "cutting_plane":
            return CuttingPlaneSolver(tol=tol, max_paths=max_paths)
        elif solver == "exhaustive":
            return ExhaustiveSolver(max_paths=max_paths)
        else:
            raise NotImplementedError
