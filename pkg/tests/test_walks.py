from fractions import Fraction
from itertools import combinations

import pytest

from src.exceptions import LiftError, PreconditionError, WindowError
from src.geodesy.distance import distance
from src.walks.audits import (audit_ascend, audit_descend, audit_good_walk, audit_gluing_walk, audit_gwa1,
                              audit_gwa3, good_walk_constants, max_lemma_constant)
from src.walks.good_walks import anchor_vertex, good_walk, gw_part1
from src.walks.lemma_walks import ascend_from_socket, descend_to_socket, first_of_order, gluing_walk
from src.walks.walk import Walk, concat, lift, reverse, straight_walk


def test_first_of_order(params3):
    scales = params3.scales
    assert first_of_order(scales, 1, 1, 2, 4) == 12
    assert first_of_order(scales, 1, -1, 2, 4) == -4
    assert first_of_order(scales, 3, 1, 0) == 3
    assert first_of_order(scales, 2, 1, 0) == 3
    assert first_of_order(scales, 1, 1, 1, 2) == 6


def test_gluing_walk(t3, L):
    p = t3.normalize(1, L("a"), L("b"))
    w = gluing_walk(t3, p, 2, 1, L("a"), L("b"))
    assert w.end.m == 12
    assert w.has_constant_labels() and w.is_monotone
    assert audit_gluing_walk(t3, w, p, 2, 1, L("a"), L("b")) == []
    back = gluing_walk(t3, p, 2, -1, L("a"), L("b"))
    assert back.end.m == -4
    assert audit_gluing_walk(t3, back, p, 2, -1, L("a"), L("b")) == []


def test_lemma_walks_need_positive_k(t3, L):
    p = t3.normalize(1, L("a"), L("b"))
    with pytest.raises(PreconditionError):
        gluing_walk(t3, p, 0, 1, L("a"), L("b"))
    with pytest.raises(PreconditionError):
        descend_to_socket(t3, p, 0, 1, L("a"), L("b"))


def test_descend_then_ascend(t4, L):
    p = t4.normalize(1, L("a.a"), L("b"))
    down = descend_to_socket(t4, p, 3, 1, L("a.a"), L("b"))
    assert down.end.m == 24
    assert down.tau_markers() == {2: 19, 1: 21}
    assert audit_descend(t4, down, p, 3, 1, L("a.a"), L("b")) == []
    assert max_lemma_constant(t4, down, 3) == pytest.approx(23 / 8)

    up = ascend_from_socket(t4, down.end, 3, -1, L("a.a"), L("b"))
    assert up.end.m == 15
    assert up.tau_markers() == {1: 2, 2: 4}
    assert audit_ascend(t4, up, down.end, 3, -1, L("a.a"), L("b")) == []
    assert max_lemma_constant(t4, up, 3, ascending=True) <= 3


def test_ascend_rejects_non_socket(t4, L):
    v = t4.normalize(1, L("a"), L("b"))
    with pytest.raises(PreconditionError):
        ascend_from_socket(t4, v, 1, 1, L("a"), L("b"))
    socket = t4.normalize(8, L("SPADE.SPADE"), L("b"))
    with pytest.raises(PreconditionError):
        ascend_from_socket(t4, socket, 3, 1, L("-"), L("-"))


@pytest.mark.parametrize("start", [1, -3])
def test_lemma_walks_on_a_sample(t4, start):
    for p in t4.vertices_at(start)[::97]:
        lam, theta = t4.fiber(p)[0]
        for k in (1, 2, 3):
            for direction in (1, -1):
                w = gluing_walk(t4, p, k, direction, lam, theta)
                assert audit_gluing_walk(t4, w, p, k, direction, lam, theta) == [], (p, k, direction)
                down = descend_to_socket(t4, p, k, direction, lam, theta)
                assert audit_descend(t4, down, p, k, direction, lam, theta) == [], (p, k, direction)
                assert max_lemma_constant(t4, down, k) <= 5
                up = ascend_from_socket(t4, down.end, k, -direction, lam, theta)
                assert audit_ascend(t4, up, down.end, k, -direction, lam, theta) == [], (p, k, direction)


@pytest.mark.parametrize("m, k", [(0, 2), (0, 3), (5, 2), (-7, 3)])
def test_descent_keeps_its_labels_before_rolling(t4, L, m, k):
    lam, theta = L("a.a.a"), L("b")
    p = t4.normalize(m, lam, theta)
    sigma = t4.scales.sigma(k)
    down = descend_to_socket(t4, p, k, 1, lam, theta)
    assert all((e.lam, e.theta) == (lam, theta) for e in down.edges[:3 * sigma // 2])
    assert down.tau_markers()[k - 1] >= 3 * sigma // 2
    lead = down.markers["lead_in"]
    assert 3 * sigma // 2 <= lead <= 2 * sigma
    assert t4.scales.ord(down.vertices[lead].m) == 0
    assert audit_descend(t4, down, p, k, 1, lam, theta) == []


def test_descent_from_the_origin(t4, L):
    p = t4.normalize(0, L("a.a.a"), L("b"))
    down = descend_to_socket(t4, p, 2, 1, L("a.a.a"), L("b"))
    assert down.markers["lead_in"] == 7
    assert down.end.m == 12
    assert down.tau_markers() == {1: 10}
    up = ascend_from_socket(t4, down.end, 2, 1, L("a.a.a"), L("b"))
    assert up.tau_markers() == {1: 2}
    assert audit_ascend(t4, up, down.end, 2, 1, L("a.a.a"), L("b")) == []


def test_good_walk_by_gluing(t3, L):
    x = t3.normalize(1, L("a"), L("-"))
    y = t3.normalize(7, L("-"), L("-"))
    w = good_walk(t3, x, y)
    assert w == gw_part1(t3, x, y)
    assert (w.start, w.end, w.length) == (x, y, 6)
    assert w.markers["s_1"] == 5
    assert w.pieces[0].kind == "glue"
    assert audit_good_walk(t3, w, x, y, C=3) == []
    assert audit_gwa1(t3, w, x, y) == []


def test_good_walk_through_a_neck(t3, L):
    x = t3.normalize(1, L("-"), L("b"))
    y = t3.normalize(7, L("-"), L("-"))
    w = good_walk(t3, x, y)
    assert w.length == 18
    assert w.markers["s_1"] == 9
    assert w.pieces[0].kind == "neck"
    assert audit_good_walk(t3, w, x, y, C=3) == []
    assert audit_gwa1(t3, w, x, y) == []
    constants = good_walk_constants(t3, w, x, y)
    assert constants["d"] == 6
    assert constants["gw1"] == pytest.approx(3.0)


def test_good_walk_through_distinguished_point(t3, L):
    x = t3.normalize(7, L("END.END.a"), L("-"))
    y = t3.normalize(9, L("-"), L("-"))
    w = good_walk(t3, x, y)
    assert w.length == 2
    assert w.markers["u_kmax"] == 1
    assert w.vertices[1].order == 3
    assert audit_gwa3(t3, w, x, y) == []
    assert audit_good_walk(t3, w, x, y, C=3) == []


def test_good_walk_reversed(t3, L):
    x = t3.normalize(1, L("a"), L("-"))
    y = t3.normalize(7, L("-"), L("-"))
    w = gw_part1(t3, y, x)
    assert w.start == y and w.end == x
    assert audit_gwa1(t3, w, y, x) == []


def test_good_walk_needs_distance(t3, L):
    x = t3.normalize(1, L("-"), L("-"))
    with pytest.raises(PreconditionError):
        good_walk(t3, x, t3.normalize(2, L("-"), L("-")))


def test_anchor_vertex(t3, L):
    p = t3.point(Fraction(3, 2), L("-"), L("-"))
    y = t3.normalize(7, L("-"), L("-"))
    assert anchor_vertex(p, y) == p.edge.right
    assert anchor_vertex(p, t3.normalize(-3, L("-"), L("-"))) == p.edge.left
    assert anchor_vertex(y, p) == y


def test_walk_algebra(t3, L):
    x = t3.normalize(0, L("-"), L("-"))
    w1 = straight_walk(t3, x, L("-"), L("-"), 3)
    w2 = straight_walk(t3, w1.end, L("-"), L("-"), 5)
    w = concat(w1, w2)
    assert w.positions == (0, 1, 2, 3, 4, 5)
    assert reverse(reverse(w)) == w
    assert reverse(w).direction == -1
    assert w.subwalk(1, 3).positions == (1, 2, 3)
    assert concat(Walk.single(x), w1) == w1
    assert w.to_dict()["length"] == 5
    with pytest.raises(ValueError):
        concat(w2, w1)
    with pytest.raises(ValueError):
        w.subwalk(2, 9)


def test_walk_builder_errors(t3, L):
    with pytest.raises(PreconditionError):
        straight_walk(t3, t3.normalize(1, L("a"), L("-")), L("-"), L("-"), 5)
    with pytest.raises(WindowError):
        straight_walk(t3, t3.normalize(15, L("-"), L("-")), L("-"), L("-"), 17)


def test_lift_replays_switches(t3, L):
    x = t3.normalize(1, L("a"), L("-"))
    w = gw_part1(t3, x, t3.normalize(7, L("-"), L("-")))
    lifted = lift(t3, w, t3.normalize(1, L("a.a"), L("-")))
    assert lifted.length == w.length
    assert lifted.positions == w.positions
    assert lifted.end == t3.normalize(7, L("END.a"), L("-"))
    assert lifted.markers == w.markers
    with pytest.raises(LiftError):
        lift(t3, w, t3.normalize(3, L("a.a"), L("-")))


@pytest.mark.slow
def test_good_walks_share_one_constant(t4):
    sample = []
    for m in range(-6, 10):
        classes = t4.vertices_at(m)
        sample.extend(classes[::max(1, len(classes) // 8)][:8])
    walks = []
    for x, y in combinations(sample, 2):
        if distance(t4, x, y) <= 1:
            continue
        try:
            walks.append((x, y, good_walk(t4, x, y)))
        except (PreconditionError, WindowError):
            continue
        if len(walks) == 150:
            break
    assert len(walks) >= 100
    constants = [good_walk_constants(t4, w, x, y) for x, y, w in walks]
    C = max(max(c["gw1"], c["gw3"]) for c in constants)
    assert 1 <= C < 20
    for x, y, w in walks:
        assert audit_good_walk(t4, w, x, y, C) == [], (x, y)
    ratios = [c["length_ratio"] for c in constants]
    assert 0 < min(ratios) <= max(ratios) < 20
