from fractions import Fraction

import pytest

from src.exceptions import DepthError, PreconditionError, WindowError
from src.graph_params.params import make_params
from src.doubling_graph.truncation import GraphTruncation
from src.geodesy.balls import BallSpec
from src.geodesy.boxes import Box
from src.measure.ball_measure import ball_mass, ball_measure, brute_force_ball_mass, doubling_ratio_scan
from src.measure.box_measure import box_measure, edge_sum_box_measure
from src.measure.edge_measure import EdgeMeasure, base_mass, base_measure
from src.measure.riesz import midpoint_distance, pair_measure, riesz_density

INTERVALS = [(0, 1), (-2, 3), (Fraction(1, 2), Fraction(7, 3)), (-5, 5)]


def _boxes(L):
    singles = [
        (L("-"), L("-")),
        (L("a.SPADE.a"), L("b.END.b")),
        (L("SPADE.a"), L("END.b")),
    ]
    pair = {(L("a.a.a"), L("b")), (L("SPADE.a.SPADE"), L("b.b.b"))}
    boxes = []
    for interval in INTERVALS:
        for k in range(4):
            boxes.extend(Box(interval, {labels}, k) for labels in singles)
            if k < 3:
                boxes.append(Box(interval, pair, k))
    return boxes


def test_box_measure_matches_edge_sum(weighted_t3, L):
    boxes = _boxes(L)
    assert len(boxes) == 60
    for box in boxes:
        assert box_measure(box, weighted_t3.params) == edge_sum_box_measure(weighted_t3, box), box


def test_box_measure_closed_form(t3, L):
    box = Box((0, 2), {(L("-"), L("-"))}, 1)
    assert box_measure(box, t3.params) == 2 * 3 * 2


def test_box_measure_needs_separation(t3, L):
    pair = {(L("a.a.a"), L("b")), (L("SPADE.a.SPADE"), L("b.b.b"))}
    with pytest.raises(PreconditionError):
        box_measure(Box((0, 1), pair, 3), t3.params)
    with pytest.raises(DepthError):
        edge_sum_box_measure(t3, Box((0, 1), {(L("-"), L("-"))}, 4))


def test_ball_mass_matches_brute_force(weighted_t3, L):
    t = weighted_t3
    centers = [
        t.normalize(0, L("-"), L("-")),
        t.normalize(4, L("a"), L("b")),
        t.point(Fraction(5, 2), L("SPADE.a"), L("b")),
    ]
    for center in centers:
        for radius in (Fraction(3, 4), Fraction(3, 2), 3):
            spec = BallSpec(center, radius)
            assert ball_mass(t, spec) == brute_force_ball_mass(t, spec), (center, radius)


def test_unit_ball_measure(t3, L):
    report = ball_measure(t3, BallSpec(t3.normalize(1, L("-"), L("-")), 1))
    assert report.mass == 2
    assert report.box_ratio == pytest.approx(2.0)
    assert report.power_ratio == pytest.approx(2.0)
    assert report.center == "1|-|-"


def test_doubling_ratios(t3):
    sample = [BallSpec(v, r) for v in t3.vertices_at(1)[::50] for r in (1, 2, 3)]
    report = doubling_ratio_scan(t3, sample)
    assert len(report.rows) == len(sample)
    for row in report.rows:
        assert row.mass_2r >= row.mass > 0
        assert row.ratio == pytest.approx(float(row.mass_2r / row.mass))
    assert report.max_ratio == max(row.ratio for row in report.rows)


def test_edge_measure_algebra(t3, L):
    e0, e1 = t3.edge(0, L("-"), L("-")), t3.edge(1, L("a"), L("b"))
    mu = base_measure([e0, e1], t3.weights)
    assert mu.total() == 2
    assert mu.support() == sorted([e0, e1])
    assert (mu + mu)[e0] == 2
    assert mu.scaled(Fraction(1, 2)).total() == 1
    assert len(mu.restricted([e1])) == 1
    assert mu.restricted([e1])[e0] == 0
    assert mu.to_dict() == {e0.key(): "1", e1.key(): "1"}
    with pytest.raises(ValueError):
        EdgeMeasure({e0: -1})


def test_weighted_base_mass(L):
    t = GraphTruncation(make_params(depth=2, weights={"SPADE": Fraction(1, 2), "a": 2, "b": 3}))
    assert base_mass(t.edge(0, L("SPADE.a"), L("b")), t.weights) == Fraction(1, 2) * 2 * 3


def test_riesz_density(t2, L):
    p = t2.normalize(0, L("-"), L("-"))
    rho = riesz_density(t2, p, 2)
    e0 = t2.edge(0, L("-"), L("-"))
    assert rho[e0] == pytest.approx(0.5)
    assert rho.covered[e0] == 1
    assert all(value > 0 for value in rho.density.values())
    with pytest.raises(WindowError):
        riesz_density(t2, t2.normalize(7, L("-"), L("-")), 2)


def test_pair_measure(t2, L):
    p = t2.normalize(0, L("-"), L("-"))
    q = t2.normalize(1, L("-"), L("-"))
    pm = pair_measure(t2, p, q, C=2)
    assert pm.d == 1
    assert pm.measure.total() > 0
    assert pm.full(t2.edge(0, L("-"), L("-")))
    assert pm.base.support() == pm.measure.support()
    assert set(pm.lengths) == set(pm.measure.support())
    assert all(0 < length <= 1 for length in pm.lengths.values())
    with pytest.raises(ValueError):
        pair_measure(t2, p, p)


def test_midpoint_distance_conventions(t2, L):
    center = t2.point(Fraction(1, 2), L("-"), L("-"))
    own = center.edge
    assert midpoint_distance(center, own, Fraction(1, 2), Fraction(1, 2)) == Fraction(1, 4)
    off = t2.point(Fraction(1, 4), L("-"), L("-"))
    assert midpoint_distance(off, own, Fraction(1, 4), Fraction(3, 4)) == Fraction(5, 16)
    other = t2.edge(1, L("-"), L("-"))
    assert midpoint_distance(center, other, Fraction(1, 2), Fraction(3, 2)) == 1
    v = t2.normalize(0, L("-"), L("-"))
    assert midpoint_distance(v, own, 0, 1) == Fraction(1, 2)
