from fractions import Fraction

import pandas as pd
import pytest

from src.exceptions import ConfigError
from src.doubling_graph.vertex import EdgePoint
from src.experiments import scans
from src.experiments.calibration import sample_vertices
from src.experiments.config import ExperimentConfig, parse_float_list, parse_int_range, parse_point
from src.experiments.report_sink import FileReportSink, StoreReportSink
from src.experiments.scans import (DOUBLING_SCAN_COLUMNS, POINCARE_SCAN_COLUMNS, doubling_sample, doubling_scan,
                                   poincare_scan, to_csv_bytes)
from src.result_store.file_result_store import FileResultStore


def test_parse_point(t3, L):
    assert parse_point(t3, "4|a.a|b.b") == t3.normalize(4, L("a.a"), L("b.b"))
    assert parse_point(t3, " -3|-|- ") == t3.normalize(-3, L("-"), L("-"))
    p = parse_point(t3, "1|a|b+1/2")
    assert isinstance(p, EdgePoint)
    assert p == t3.point(Fraction(3, 2), L("a"), L("b"))
    for text in ("1|a", "x|-|-", "1|-|-+2", "1|c|-"):
        with pytest.raises(ConfigError):
            parse_point(t3, text)


def test_parse_lists():
    assert parse_float_list("2, 3.5,") == [2.0, 3.5]
    assert parse_int_range("2..5") == [2, 3, 4, 5]
    assert parse_int_range("2,3,7") == [2, 3, 7]
    with pytest.raises(ConfigError):
        parse_float_list("2,x")
    with pytest.raises(ConfigError):
        parse_int_range("2..x")


def test_experiment_config_digest(tmp_path):
    config = ExperimentConfig(command="dist", options={"x": "0|-|-"}, seed=3)
    same = ExperimentConfig(command="dist", options={"x": "0|-|-"}, seed=3)
    assert config.digest() == same.digest()
    assert config.digest() != ExperimentConfig(command="dist", options={"x": "1|-|-"}, seed=3).digest()
    data = config.to_dict()
    assert data["command"] == "dist"
    assert data["out"] is None
    assert isinstance(data["params_path"], str)


def test_sample_vertices(t3):
    sample = sample_vertices(t3, [0, 1, 2], 2)
    assert len(sample) == 6
    assert sample == sample_vertices(t3, [0, 1, 2], 2)
    assert {v.m for v in sample} == {0, 1, 2}


def test_poincare_scan_grid_order(t3, monkeypatch):
    def fake_row(truncation, P, k, C0, tol, max_paths):
        return {"P": P, "k": k, "pair_id": f"{P}/{k}", "lhs": P * k, "rhs_bound": 1.0, "neck_sum": 0.0}

    monkeypatch.setattr(scans, "_bad_box_row", fake_row)
    frame = poincare_scan(t3, [2.0, 3.5], [2, 3, 4], max_workers=3)
    assert list(frame.columns) == POINCARE_SCAN_COLUMNS
    assert len(frame) == 6
    assert list(zip(frame["P"], frame["k"])) == [(2.0, 2), (2.0, 3), (2.0, 4), (3.5, 2), (3.5, 3), (3.5, 4)]
    again = poincare_scan(t3, [2.0, 3.5], [2, 3, 4], max_workers=1)
    pd.testing.assert_frame_equal(frame, again)
    with pytest.raises(ValueError):
        poincare_scan(t3, [1.0, 2.0], [2])


def test_doubling_scan_csv(t2, L):
    sample = doubling_sample([t2.normalize(0, L("-"), L("-")), t2.normalize(1, L("a"), L("b"))], [1, 2])
    frame = doubling_scan(t2, sample)
    assert list(frame.columns) == DOUBLING_SCAN_COLUMNS
    assert len(frame) == 4
    assert list(frame["center"])[:2] == ["0|-|-", "0|-|-"]
    text = to_csv_bytes(frame).decode("utf-8")
    assert text.splitlines()[0] == ",".join(DOUBLING_SCAN_COLUMNS)
    assert len(text.splitlines()) == 5
    assert to_csv_bytes(doubling_scan(t2, sample)) == to_csv_bytes(frame)


def test_file_report_sink(tmp_path):
    sink = FileReportSink(tmp_path / "reports")
    sink.deliver(b"P,k\n2,3\n", "../scan.csv")
    assert (tmp_path / "reports" / "scan.csv").read_bytes() == b"P,k\n2,3\n"


def test_store_report_sink(tmp_path):
    store = FileResultStore(tmp_path)
    StoreReportSink(store).deliver(b"P,k\n", "scan.csv")
    assert store.get("report:scan.csv") == "P,k\n"
