import json
import logging

from abc import ABC, abstractmethod
from itertools import combinations
from typing import Dict, Iterable, List, Optional, Sequence

from src.consts import DEFAULT_CALIBRATION_TTL
from src.exceptions import PreconditionError, WindowError
from src.graph_params.params import Params
from src.doubling_graph.truncation import GraphTruncation
from src.doubling_graph.vertex import VertexClass
from src.geodesy.boxes import ball_box_sandwich, calibrate_ball_box_constant
from src.geodesy.distance import distance
from src.walks.audits import good_walk_constants, max_lemma_constant
from src.walks.good_walks import good_walk
from src.walks.lemma_walks import descend_to_socket, first_of_order, gluing_walk
from src.walks.walk import straight_walk
from src.curves.compression import compression_curve
from src.curves.density_audits import (audit_compression_density, audit_expansion_density,
                                       audit_transport_density, spine_distance)
from src.curves.expansion import expansion_curve, minimum_expansion_jcut
from src.curves.transport import transport_curve
from src.result_store.abstractions import IResultStore

logger = logging.getLogger(__name__)


class ICalibrator(ABC):
    @abstractmethod
    def calibrate(self, params: Params) -> Dict:
        ...


def sample_vertices(truncation: GraphTruncation, positions: Iterable[int], per_position: int) -> List[VertexClass]:
    """Evenly strided classes at each position, in sort order."""
    sample = []
    for m in positions:
        classes = truncation.vertices_at(m)
        stride = max(1, len(classes) // per_position)
        sample.extend(classes[::stride][:per_position])
    return sample


def _merge_range(current: Optional[List[float]], lo: float, hi: float) -> List[float]:
    if current is None:
        return [lo, hi]
    return [min(current[0], lo), max(current[1], hi)]


class Calibrator(ICalibrator):
    """Measures the unnamed constants of the construction on a deterministic sample of the truncation."""

    def __init__(self, positions: Sequence[int] = (0, 1, 2, 3, 4, 5), per_position: int = 2):
        self.positions = tuple(positions)
        self.per_position = per_position

    def calibrate(self, params: Params) -> Dict:
        truncation = GraphTruncation(params)
        sample = sample_vertices(truncation, self.positions, self.per_position)
        plain = [v for v in sample if v.order == 0]
        report = {
            "digest": params.digest(),
            "depth": truncation.depth,
            "window": list(truncation.params.window),
            "sample_size": len(sample),
            "ball_box": self.ball_box(truncation, sample),
            "good_walks": self.good_walks(truncation, sample),
            "lemma_walks": self.lemma_walks(truncation, plain),
            "j_cut_min": self.j_cut_min(truncation),
            "densities": self.densities(truncation, plain),
        }
        logger.info(f"Calibrated {params.digest()}: ball/box C={report['ball_box']['C']}, "
                    f"good-walk gw1={report['good_walks']['gw1']}")
        return report

    def ball_box(self, truncation: GraphTruncation, sample: List[VertexClass]) -> Dict:
        radii = list(range(2, truncation.scales.sigma(2) + 1))
        C, outer = calibrate_ball_box_constant(truncation, sample, radii)
        report = {"C": C, "outer_failures": outer, "radii": radii}
        configured = truncation.params.constants.ball_box_c
        if configured is not None:
            report["configured"] = configured
            report["configured_holds"] = all(not ball_box_sandwich(truncation, x, R, configured).inner_failures
                                             for x in sample for R in radii)
        return report

    def good_walks(self, truncation: GraphTruncation, sample: List[VertexClass]) -> Dict:
        out = {"pairs": 0, "skipped": 0, "gw1": 0.0, "gw3": 0.0, "length_ratio": None}
        for x, y in combinations(sample, 2):
            if distance(truncation, x, y) <= 1:
                continue
            try:
                w = good_walk(truncation, x, y)
            except (PreconditionError, WindowError) as e:
                logger.debug(f"good walk {x.key()} ~ {y.key()} skipped: {e}")
                out["skipped"] += 1
                continue
            constants = good_walk_constants(truncation, w, x, y)
            out["pairs"] += 1
            out["gw1"] = max(out["gw1"], constants["gw1"])
            out["gw3"] = max(out["gw3"], constants["gw3"])
            out["length_ratio"] = _merge_range(out["length_ratio"], constants["length_ratio"], constants["length_ratio"])
        return out

    def lemma_walks(self, truncation: GraphTruncation, plain: List[VertexClass]) -> Dict:
        gluing, descent = 0.0, 0.0
        for k in range(1, truncation.depth):
            for p in plain:
                try:
                    gluing = max(gluing, max_lemma_constant(truncation, gluing_walk(truncation, p, k, 1, p.lam, p.theta), k))
                    w = descend_to_socket(truncation, p, k, 1, p.lam, p.theta)
                    descent = max(descent, max_lemma_constant(truncation, w, k))
                except (PreconditionError, WindowError) as e:
                    logger.debug(f"lemma walk from {p.key()} at k={k} skipped: {e}")
        return {"gluing": gluing, "descend": descent}

    def j_cut_min(self, truncation: GraphTruncation) -> Dict[str, Optional[int]]:
        out = {}
        for k in range(1, truncation.depth + 1):
            try:
                out[str(k)] = minimum_expansion_jcut(truncation, k)
            except PreconditionError:
                out[str(k)] = None
        return out

    def densities(self, truncation: GraphTruncation, plain: List[VertexClass]) -> Dict:
        scales = truncation.scales
        compression, radii, transport, expansion = {}, {}, {}, {}
        for k in range(1, truncation.depth):
            for p in plain:
                try:
                    w0 = descend_to_socket(truncation, p, k, 1, p.lam, p.theta)
                    curve = compression_curve(truncation, w0, 1, k=k)
                    lo, hi = audit_compression_density(truncation, curve, w0)
                    radius = spine_distance(truncation, curve, [w0]) / scales.sigma(k)
                    compression[str(k)] = _merge_range(compression.get(str(k)), lo, hi)
                    radii[str(k)] = max(radii.get(str(k), 0.0), radius)
                    w = straight_walk(truncation, p, p.lam, p.theta, first_of_order(scales, p.m, 1, 0, scales.sigma(k)))
                    lo, hi = audit_transport_density(truncation, transport_curve(truncation, w, k), k)
                    transport[str(k)] = _merge_range(transport.get(str(k)), lo, hi)
                except (PreconditionError, WindowError) as e:
                    logger.debug(f"density sample from {p.key()} at k={k} skipped: {e}")
        for k in range(1, truncation.depth + 1 if plain else 1):
            try:
                j_cut = minimum_expansion_jcut(truncation, k)
            except PreconditionError:
                continue
            start = truncation.normalize(1, plain[0].lam, plain[0].theta)
            target = first_of_order(scales, start.m + scales.sigma(k), -1, 0)
            try:
                w = straight_walk(truncation, start, start.lam, start.theta, target)
                ranges = audit_expansion_density(truncation, expansion_curve(truncation, w, j_cut), w)
            except (PreconditionError, WindowError) as e:
                logger.debug(f"expansion sample at k={k} skipped: {e}")
                continue
            expansion[str(k)] = {event: list(r) for event, r in ranges.items()}
        return {"compression": compression, "compression_support_radius": radii,
                "transport": transport, "expansion": expansion}


class CachedCalibrator(ICalibrator):
    def __init__(self, store: IResultStore, inner_calibrator: ICalibrator, ttl: int = DEFAULT_CALIBRATION_TTL):
        self.store = store
        self.inner_calibrator = inner_calibrator
        self.ttl = ttl

    def calibrate(self, params: Params) -> Dict:
        key = f"calibration:{params.digest()}"
        cached = self.store.get(key)
        if cached:
            try:
                logger.info(f"Cached calibration found for {params.digest()}")
                return json.loads(cached)
            except json.JSONDecodeError:
                pass  # cache miss
        report = self.inner_calibrator.calibrate(params)
        logger.info(f"Storing calibration {key}")
        self.store.set(key, json.dumps(report, sort_keys=True), ex=self.ttl)
        return report
