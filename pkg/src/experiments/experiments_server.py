import os
import logging

from functools import lru_cache
from typing import Dict, List

from fastapi import FastAPI, BackgroundTasks, HTTPException
from fastapi.params import Query
from pydantic import BaseModel, Field

from src.consts import EXAMPLE_PARAMS_JSON, PARAMS_DIR
from src.exceptions import ConfigError, DoublingGraphError
from src.params_reader.factory import load_params
from src.doubling_graph.truncation import GraphTruncation
from src.geodesy.distance import distance
from src.modulus.bad_box import DEFAULT_BAD_BOX_C0
from src.modulus.neck_range import in_neck_range, neck_range_threshold, neck_sum_profile
from src.result_store.factory import default_result_store
from src.experiments.calibration import CachedCalibrator, Calibrator, ICalibrator
from src.experiments.config import parse_point
from src.experiments.report_sink import FileReportSink, IReportSink, StoreReportSink
from src.experiments.scans import poincare_scan, to_csv_bytes


logger = logging.getLogger(__name__)
logging.basicConfig(format='%(asctime)s - %(name)s - %(levelname)s - %(message)s')
logger.setLevel(logging.DEBUG)


class ScanRequest(BaseModel):
    params: str = Field(EXAMPLE_PARAMS_JSON.name, description="Name of a params file in the params directory")
    P_grid: List[float] = Field(..., min_length=1)
    k_range: List[int] = Field(..., min_length=1)
    c0: float = DEFAULT_BAD_BOX_C0


@lru_cache(maxsize=8)
def get_truncation(params_name: str) -> GraphTruncation:
    path = PARAMS_DIR / params_name
    if path.parent != PARAMS_DIR:
        raise ConfigError(f"params must name a file in {PARAMS_DIR}, got {params_name!r}")
    return GraphTruncation(load_params(path))


def get_calibrator() -> ICalibrator:
    # Dependency injection setup
    return CachedCalibrator(store=default_result_store(), inner_calibrator=Calibrator())


def get_report_sink() -> IReportSink:
    if os.environ.get("DOUBLING_GRAPH_STORE", "file") == "file":
        return FileReportSink()
    return StoreReportSink(default_result_store())


def run_poincare_scan(request: ScanRequest, sink: IReportSink) -> None:
    try:
        truncation = get_truncation(request.params)
        frame = poincare_scan(truncation, request.P_grid, request.k_range, C0=request.c0)
        sink.deliver(contents=to_csv_bytes(frame),
                     filename=f"poincare_scan_{truncation.params.digest()}.csv")
    except Exception as e:
        logger.exception(f"Poincare scan failed: {e}")


app = FastAPI()

@app.get("/health")
async def health():
    return {"status": "ok"}

@app.get("/distance")
async def point_distance(
        x: str = Query(..., description="Point as m|lambda|theta[+offset]"),
        y: str = Query(..., description="Point as m|lambda|theta[+offset]"),
        params: str = Query(EXAMPLE_PARAMS_JSON.name, description="Name of a params file"),
):
    try:
        truncation = get_truncation(params)
        d = distance(truncation, parse_point(truncation, x), parse_point(truncation, y))
        return {"x": x, "y": y, "d": str(d)}
    except DoublingGraphError as e:
        raise HTTPException(status_code=422, detail=str(e))
    except Exception as e:
        raise HTTPException(status_code=500, detail=str(e))

@app.get("/neck_range")
async def neck_range(
        P: float = Query(..., gt=1, description="Exponent of the Poincare inequality"),
        k_max: int = Query(5, ge=1, le=64),
        params: str = Query(EXAMPLE_PARAMS_JSON.name, description="Name of a params file"),
):
    try:
        truncation = get_truncation(params)
        lower, upper = neck_range_threshold(truncation.params)
        try:
            inside = in_neck_range(P, truncation.params)
        except ValueError:
            inside = None
        return {"P": P, "threshold": [lower, upper], "in_neck_range": inside,
                "neck_sums": neck_sum_profile(P, truncation.params, k_max)}
    except DoublingGraphError as e:
        raise HTTPException(status_code=422, detail=str(e))
    except Exception as e:
        raise HTTPException(status_code=500, detail=str(e))

@app.get("/calibration")
def calibration(params: str = Query(EXAMPLE_PARAMS_JSON.name, description="Name of a params file")) -> Dict:
    try:
        return get_calibrator().calibrate(get_truncation(params).params)
    except DoublingGraphError as e:
        raise HTTPException(status_code=422, detail=str(e))
    except Exception as e:
        raise HTTPException(status_code=500, detail=str(e))

@app.post("/poincare_scan")
async def start_poincare_scan(request: ScanRequest, background_tasks: BackgroundTasks):
    try:
        get_truncation(request.params)
        background_tasks.add_task(run_poincare_scan, request, get_report_sink())
        return {"message": "Job has been started successfully",
                "cells": len(request.P_grid) * len(request.k_range)}
    except DoublingGraphError as e:
        raise HTTPException(status_code=422, detail=str(e))
    except Exception as e:
        raise HTTPException(status_code=500, detail=str(e))
