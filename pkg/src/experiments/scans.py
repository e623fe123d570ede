import io
import logging

from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Dict, Iterable, List, Sequence

import pandas as pd

from src.consts import DEFAULT_MAX_PATHS, DEFAULT_SEPARATION_TOL
from src.doubling_graph.truncation import GraphTruncation
from src.doubling_graph.vertex import Point
from src.geodesy.balls import BallSpec
from src.measure.ball_measure import doubling_ratio_scan
from src.modulus.bad_box import DEFAULT_BAD_BOX_C0, bad_box_experiment, build_bad_box
from src.modulus.neck_range import neck_sum

logger = logging.getLogger(__name__)

POINCARE_SCAN_COLUMNS = ["P", "k", "pair_id", "lhs", "rhs_bound", "neck_sum"]
DOUBLING_SCAN_COLUMNS = ["center", "R", "mass", "mass_2R", "ratio"]
CSV_FLOAT_FORMAT = "%.12g"

DEFAULT_MAX_WORKERS = 4


def _bad_box_row(truncation: GraphTruncation, P: float, k: int, C0: float, tol: float, max_paths: int) -> Dict:
    bad = build_bad_box(truncation, k, C0)
    report = bad_box_experiment(truncation, k, P, C0, tol=tol, max_paths=max_paths, bad=bad)
    return {
        "P": P,
        "k": k,
        "pair_id": f"{bad.p0.key()}~{bad.p1.key()}",
        "lhs": report.lhs,
        "rhs_bound": report.rhs_bound,
        "neck_sum": neck_sum(k, P / (P - 1), truncation.params),
    }


def poincare_scan(truncation: GraphTruncation, P_grid: Sequence[float], k_range: Sequence[int],
                  C0: float = DEFAULT_BAD_BOX_C0, tol: float = DEFAULT_SEPARATION_TOL,
                  max_paths: int = DEFAULT_MAX_PATHS, max_workers: int = DEFAULT_MAX_WORKERS) -> pd.DataFrame:
    """One bad-box row per (P, k) cell, P-major, in the order of the grids."""
    if any(P <= 1 for P in P_grid):
        raise ValueError(f"scan exponents must exceed 1, got {list(P_grid)}")
    cells = [(P, k) for P in P_grid for k in k_range]
    with ThreadPoolExecutor(max_workers=max_workers) as executor:
        futures = [executor.submit(_bad_box_row, truncation, P, k, C0, tol, max_paths) for P, k in cells]
        rows = [future.result() for future in futures]
    logger.info(f"Poincare scan finished: {len(rows)} cells over P={list(P_grid)}, k={list(k_range)}")
    return pd.DataFrame(rows, columns=POINCARE_SCAN_COLUMNS)


def doubling_scan(truncation: GraphTruncation, sample: Iterable[BallSpec]) -> pd.DataFrame:
    report = doubling_ratio_scan(truncation, sample)
    rows = [{"center": row.center, "R": str(row.radius), "mass": str(row.mass),
             "mass_2R": str(row.mass_2r), "ratio": row.ratio} for row in report.rows]
    return pd.DataFrame(rows, columns=DOUBLING_SCAN_COLUMNS)


def doubling_sample(centers: Iterable[Point], radii: Iterable[int]) -> List[BallSpec]:
    radii = list(radii)
    return [BallSpec(center, Fraction(R)) for center in centers for R in radii]


def to_csv_bytes(frame: pd.DataFrame) -> bytes:
    text_buffer = io.StringIO()
    frame.to_csv(text_buffer, index=False, float_format=CSV_FLOAT_FORMAT)
    return text_buffer.getvalue().encode("utf-8")
