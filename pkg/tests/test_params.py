import json

from fractions import Fraction

import pytest

from src.consts import EXAMPLE_PARAMS_JSON, PARAMS_DIR
from src.exceptions import ConfigError
from src.graph_params.params import make_params
from src.graph_params.scales import ScaleTable
from src.graph_params.symbols import Label, SymbolSets, label_le
from src.graph_params.weights import WeightTable, tail_weight
from src.params_reader.factory import ParamsReaderFactory, load_params
from src.params_reader.file_params_reader import JsonParamsReader, TomlParamsReader


def test_constant_scales():
    scales = ScaleTable.constant_m(2)
    assert [scales.sigma(k) for k in range(5)] == [1, 2, 4, 8, 16]
    assert scales.ord(0) == 0
    assert scales.ord(1) == 0
    assert scales.ord(12) == 2
    assert scales.ord(-8) == 3
    assert [scales.disc_log(p) for p in (0, 1, 2, 7, 8)] == [0, 0, 1, 2, 3]
    assert scales.disc_log(Fraction(5, 2)) == 1


def test_explicit_scales_repeat_last_entry():
    scales = ScaleTable(N=3, m=(2, 3))
    assert [scales.sigma(k) for k in range(4)] == [1, 2, 6, 18]
    assert scales.ord(6) == 2
    assert scales.ord(12) == 2
    assert scales.ord(18) == 3


def test_scale_bounds_rejected():
    with pytest.raises(ConfigError):
        ScaleTable(N=2, m=(3,))
    with pytest.raises(ConfigError):
        ScaleTable(N=1, m=(2,))


def test_max_order_in():
    scales = ScaleTable.constant_m(2)
    assert scales.max_order_in(1, 7) == (2, 4)
    assert scales.max_order_in(5, 7) == (1, 6)


def test_label_basics(L):
    lam = Label(["a", "END", "END"])
    assert lam == Label(["a"])
    assert lam.at(1) == "a"
    assert lam.at(5) == "END"
    assert lam.with_entry(3, "SPADE") == Label(["a", "END", "SPADE"])
    assert lam.with_entry(3, "SPADE").key() == "a.END.SPADE"
    assert L("-") == Label()
    assert L("SPADE.a").prefix(3) == ("SPADE", "a", "END")
    assert L("a.SPADE.a").agrees_beyond(L("SPADE.SPADE.a"), 2)
    assert L("a.SPADE.a").agrees_beyond(L("SPADE.SPADE.a"), 1)
    assert not L("a.SPADE.a").agrees_beyond(L("SPADE.a.a"), 1)
    assert L("a.a").with_prefix(["SPADE"]) == L("SPADE.a")


def test_label_order(L):
    assert label_le(L("SPADE.SPADE"), L("a.a"))
    assert not label_le(L("a.a"), L("SPADE.SPADE"))
    assert label_le(L("a"), L("a"))
    assert not label_le(L("SPADE.a.a"), L("a.a.SPADE"))


@pytest.mark.parametrize("sigma1,sigma2", [
    (("END", "a", "c"), ("END", "b")),
    (("END", "SPADE", "a"), ("END", "SPADE")),
    (("END", "SPADE"), ("END", "b")),
    (("END", "SPADE", "a.b"), ("END", "b")),
    (("END", "SPADE", "a"), ("END",)),
    (("SPADE", "a", "c"), ("END", "b")),
])
def test_symbol_sets_rejected(sigma1, sigma2):
    with pytest.raises(ConfigError):
        SymbolSets(sigma1, sigma2)


def test_weight_table():
    symbols = SymbolSets(("END", "SPADE", "a"), ("END", "b"))
    w = WeightTable.from_mapping({"END": 1, "SPADE": Fraction(1, 2), "a": 2, "b": 3}, symbols)
    assert w.s1 == Fraction(7, 2)
    assert w.s2 == 4
    assert w.spade == Fraction(1, 2)
    assert w.pair("a", "b") == 6
    assert tail_weight(Label(["a", "SPADE"]), Label(["b", "b"]), 1, w) == Fraction(3, 2)


def test_weight_positivity():
    symbols = SymbolSets(("END", "SPADE", "a"), ("END", "b"))
    with pytest.raises(ConfigError, match="positive"):
        WeightTable.from_mapping({"END": 1, "SPADE": 0, "a": 1, "b": 1}, symbols)
    with pytest.raises(ConfigError, match="END"):
        WeightTable.from_mapping({"END": 2, "SPADE": 1, "a": 1, "b": 1}, symbols)
    with pytest.raises(ConfigError, match="missing"):
        WeightTable.from_mapping({"END": 1, "SPADE": 1, "a": 1}, symbols)


def test_make_params_window():
    params = make_params(depth=3)
    assert params.window == (-16, 16)
    assert params.depth == 3
    with pytest.raises(ConfigError):
        make_params(depth=3, window=(-4, 4))


def test_digest_tracks_content():
    assert make_params(depth=3).digest() == make_params(depth=3).digest()
    assert make_params(depth=3).digest() != make_params(depth=3, weights={"SPADE": 2}).digest()
    assert make_params(depth=3).digest() != make_params(depth=3).with_constants(pair_measure_c=2).digest()


def test_load_example_json():
    params = load_params(EXAMPLE_PARAMS_JSON)
    assert params.depth == 4
    assert params.scales.constant
    assert params.weights.s1 == 3
    assert params.constants.pair_measure_c == 4
    assert params.constants.j_cut is None


def test_load_toml():
    params = load_params(PARAMS_DIR / "m2_spade_half.toml")
    assert params.scales.m == (2, 3, 2, 2)
    assert params.scales.sigma(2) == 6
    assert params.weights.spade == Fraction(1, 2)
    assert params.weights.s1 == Fraction(5, 2)
    assert params.weights.s2 == 3


def test_json_and_toml_agree(tmp_path):
    raw = JsonParamsReader(EXAMPLE_PARAMS_JSON).read_raw()
    toml_path = tmp_path / "same.toml"
    toml_path.write_text(
        'N = 2\nsigma1 = ["END", "SPADE", "a"]\nsigma2 = ["END", "b"]\ndepth = 4\nwindow = [-48, 48]\n'
        '[m]\nconstant = 2\n[weights]\nEND = 1\nSPADE = 1\na = 1\nb = 1\n'
        '[constants]\npair_measure_c = 4\n'
    )
    assert TomlParamsReader(toml_path).read_raw()["m"] == raw["m"]
    assert load_params(toml_path).digest() == load_params(EXAMPLE_PARAMS_JSON).digest()


def test_invalid_weight_cites_positivity(params_file):
    path = params_file(weights={"END": 1, "SPADE": 1, "a": -1, "b": 1})
    with pytest.raises(ConfigError, match="positive"):
        load_params(path)


def test_unknown_format(tmp_path):
    path = tmp_path / "params.yaml"
    path.write_text("N: 2\n")
    with pytest.raises(ConfigError, match="unsupported"):
        load_params(path)
    with pytest.raises(NotImplementedError):
        ParamsReaderFactory.get_params_reader("yaml", path)


def test_malformed_json(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    with pytest.raises(ConfigError, match="malformed"):
        load_params(path)


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError, match="no such"):
        load_params(tmp_path / "absent.json")


def test_to_dict_round_trips_through_schema(tmp_path):
    params = make_params(depth=2, weights={"SPADE": Fraction(1, 2)})
    path = tmp_path / "dumped.json"
    path.write_text(json.dumps(params.to_dict()))
    assert load_params(path) == params
