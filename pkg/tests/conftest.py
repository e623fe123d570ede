import json

from fractions import Fraction

import pytest

from src.graph_params.params import make_params
from src.graph_params.symbols import Label
from src.doubling_graph.truncation import GraphTruncation


@pytest.fixture
def params3():
    return make_params(depth=3)


@pytest.fixture
def params4():
    return make_params(depth=4)


@pytest.fixture
def t2():
    return GraphTruncation(make_params(depth=2))


@pytest.fixture
def t3(params3):
    return GraphTruncation(params3)


@pytest.fixture
def t4(params4):
    return GraphTruncation(params4)


@pytest.fixture(params=["1/2", "1", "2"], ids=["spade-half", "spade-one", "spade-two"])
def weighted_t3(request):
    return GraphTruncation(make_params(depth=3, weights={"SPADE": Fraction(request.param), "a": 2, "b": Fraction(1, 3)}))


@pytest.fixture
def L():
    """Label from dot-separated text, `-` for the empty label."""
    return Label.parse


@pytest.fixture
def params_file(tmp_path):
    def write(depth: int = 2, window=None, weights=None, **extra):
        half = 2 * 2 ** depth
        raw = {
            "N": 2,
            "m": {"constant": 2},
            "sigma1": ["END", "SPADE", "a"],
            "sigma2": ["END", "b"],
            "weights": weights or {"END": 1, "SPADE": 1, "a": 1, "b": 1},
            "depth": depth,
            "window": list(window or (-half, half)),
        }
        raw.update(extra)
        path = tmp_path / f"params_d{depth}.json"
        path.write_text(json.dumps(raw))
        return path
    return write
