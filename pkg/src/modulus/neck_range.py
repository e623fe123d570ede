import math

from typing import List, Tuple

from src.graph_params.params import Params


def gluing_ratio(params: Params) -> float:
    """w_spade^-1 S1."""
    return float(params.weights.s1 / params.weights.spade)


def neck_range_threshold(params: Params) -> Tuple[float, float]:
    """Bracket for the smallest exponent of the neck range.

    For constant m both ends equal 1 + log_m(w_spade^-1 S1); otherwise the bracket
    runs from 1 + log_N to 1 + log_2 of the same ratio.
    """
    ratio = gluing_ratio(params)
    scales = params.scales
    if scales.constant or len(set(scales.m)) == 1:
        exact = 1 + math.log(ratio, scales.m[0])
        return exact, exact
    return 1 + math.log(ratio, scales.N), 1 + math.log(ratio, 2)


def neck_sum(k: int, Q: float, params: Params) -> float:
    """sum_{l=1}^k (w_spade^-1 S1)^(l(Q-1)) sigma_{k-l} / sigma_k."""
    if k < 1:
        raise ValueError(f"neck sums start at k=1, got {k}")
    ratio = gluing_ratio(params)
    sigma_k = params.scales.sigma(k)
    return sum(ratio ** (l * (Q - 1)) * params.scales.sigma(k - l) / sigma_k for l in range(1, k + 1))


def neck_sum_profile(P: float, params: Params, k_max: int) -> List[float]:
    Q = P / (P - 1)
    return [neck_sum(k, Q, params) for k in range(1, k_max + 1)]


def in_neck_range(P: float, params: Params) -> bool:
    """Exact membership for constant m; for varying m only the certain cases are decided."""
    lower, upper = neck_range_threshold(params)
    if P <= lower:
        return False
    if P > upper:
        return True
    if lower == upper:
        return P > lower
    raise ValueError(f"P={P} lies in the undecided bracket ({lower:.6g}, {upper:.6g}]")
