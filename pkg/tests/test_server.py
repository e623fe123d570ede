import pandas as pd
import pytest

from fastapi.testclient import TestClient

from src.experiments import experiments_server
from src.experiments.calibration import ICalibrator
from src.experiments.report_sink import IReportSink
from src.experiments.scans import POINCARE_SCAN_COLUMNS


class RecordingSink(IReportSink):
    def __init__(self):
        self.delivered = []

    def deliver(self, contents: bytes, filename: str) -> None:
        self.delivered.append((filename, contents))


@pytest.fixture
def client():
    return TestClient(experiments_server.app)


def test_health(client):
    response = client.get("/health")
    assert response.status_code == 200
    assert response.json() == {"status": "ok"}


def test_distance(client):
    response = client.get("/distance", params={"x": "0|-|-", "y": "5|-|-"})
    assert response.status_code == 200
    assert response.json()["d"] == "5"


def test_distance_rejects_bad_points(client):
    assert client.get("/distance", params={"x": "0|-|-", "y": "0|c|-"}).status_code == 422
    assert client.get("/distance", params={"x": "0|-|-", "y": "1|-|-", "params": "../pyproject.toml"}).status_code == 422
    assert client.get("/distance", params={"x": "0|-|-", "y": "1|-|-", "params": "missing.json"}).status_code == 422


def test_neck_range(client):
    response = client.get("/neck_range", params={"P": 3.0, "k_max": 4})
    assert response.status_code == 200
    body = response.json()
    assert body["in_neck_range"] is True
    assert body["threshold"][0] == pytest.approx(2.584962500721156)
    assert len(body["neck_sums"]) == 4
    assert client.get("/neck_range", params={"P": 1.0}).status_code == 422


def test_calibration_uses_injected_calibrator(client, monkeypatch):
    class FakeCalibrator(ICalibrator):
        def calibrate(self, params):
            return {"digest": params.digest()}

    monkeypatch.setattr(experiments_server, "get_calibrator", lambda: FakeCalibrator())
    response = client.get("/calibration")
    assert response.status_code == 200
    assert len(response.json()["digest"]) == 16


def test_poincare_scan_runs_in_background(client, monkeypatch):
    sink = RecordingSink()

    def fake_scan(truncation, P_grid, k_range, C0):
        rows = [{"P": P, "k": k, "pair_id": "x", "lhs": 1.0, "rhs_bound": 1.0, "neck_sum": 1.0}
                for P in P_grid for k in k_range]
        return pd.DataFrame(rows, columns=POINCARE_SCAN_COLUMNS)

    monkeypatch.setattr(experiments_server, "poincare_scan", fake_scan)
    monkeypatch.setattr(experiments_server, "get_report_sink", lambda: sink)
    response = client.post("/poincare_scan", json={"P_grid": [2.0, 3.5], "k_range": [2, 3]})
    assert response.status_code == 200
    assert response.json()["cells"] == 4
    assert len(sink.delivered) == 1
    filename, contents = sink.delivered[0]
    assert filename.startswith("poincare_scan_") and filename.endswith(".csv")
    assert contents.decode("utf-8").splitlines()[0] == ",".join(POINCARE_SCAN_COLUMNS)
    assert len(contents.decode("utf-8").splitlines()) == 5


def test_poincare_scan_validates_request(client):
    assert client.post("/poincare_scan", json={"P_grid": [], "k_range": [2]}).status_code == 422
    assert client.post("/poincare_scan", json={"P_grid": [2.0], "k_range": [2], "params": "nope.json"}).status_code == 422
