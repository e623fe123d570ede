import json
import time

import pytest

from src.graph_params.params import make_params
from src.experiments.calibration import CachedCalibrator, ICalibrator
from src.result_store.factory import ResultStoreFactory
from src.result_store.file_result_store import FileResultStore


class CountingCalibrator(ICalibrator):
    def __init__(self):
        self.calls = 0

    def calibrate(self, params):
        self.calls += 1
        return {"digest": params.digest(), "calls": self.calls}


def test_file_store_roundtrip(tmp_path):
    store = FileResultStore(tmp_path)
    assert store.get("missing") is None
    assert store.set("calibration:abc", "payload")
    assert store.get("calibration:abc") == "payload"
    assert store.exists("calibration:abc")
    assert list(tmp_path.glob("*.json")) == [tmp_path / "calibration_abc.json"]
    assert store.delete("calibration:abc") == 1
    assert store.delete("calibration:abc") == 0
    assert not store.exists("calibration:abc")


def test_file_store_expiry(tmp_path):
    store = FileResultStore(tmp_path)
    store.set("old", "value", ex=60)
    entry = json.loads((tmp_path / "old.json").read_text())
    entry["expires"] = time.time() - 1
    (tmp_path / "old.json").write_text(json.dumps(entry))
    assert store.get("old") is None
    assert not (tmp_path / "old.json").exists()


def test_file_store_ignores_corrupt_entries(tmp_path):
    store = FileResultStore(tmp_path)
    (tmp_path / "broken.json").write_text("{not json")
    assert store.get("broken") is None


def test_store_factory(tmp_path, monkeypatch):
    monkeypatch.setenv("DOUBLING_GRAPH_RESULTS_DIR", str(tmp_path))
    store = ResultStoreFactory.get_result_store("file")
    assert isinstance(store, FileResultStore)
    assert store.directory == tmp_path
    with pytest.raises(NotImplementedError):
        ResultStoreFactory.get_result_store("postgres")


def test_cached_calibrator(tmp_path):
    store = FileResultStore(tmp_path)
    inner = CountingCalibrator()
    cached = CachedCalibrator(store, inner, ttl=3600)
    params = make_params(depth=2)
    first = cached.calibrate(params)
    second = cached.calibrate(params)
    assert first == second == {"digest": params.digest(), "calls": 1}
    assert inner.calls == 1
    assert store.exists(f"calibration:{params.digest()}")

    other = make_params(depth=3)
    assert cached.calibrate(other)["calls"] == 2


def test_cached_calibrator_recovers_from_garbage(tmp_path):
    store = FileResultStore(tmp_path)
    params = make_params(depth=2)
    store.set(f"calibration:{params.digest()}", "not json")
    inner = CountingCalibrator()
    assert CachedCalibrator(store, inner).calibrate(params)["calls"] == 1
    assert json.loads(store.get(f"calibration:{params.digest()}"))["calls"] == 1
