import io

from fractions import Fraction
from itertools import product

import pytest

from src.consts import SPADE
from src.exceptions import ConfigError, DepthError, WindowError
from src.graph_params.symbols import Label
from src.doubling_graph.graph_dump import dump_truncation, load_dump
from src.doubling_graph.truncation import order_separation_violations
from src.doubling_graph.vertex import EdgePoint, VertexKind, project


def _coordinates(truncation):
    return list(product(truncation.symbols.lam_labels(truncation.depth),
                        truncation.symbols.theta_labels(truncation.depth)))


def _agree_off(a: Label, b: Label, t: int) -> bool:
    return a.with_entry(t, "END") == b.with_entry(t, "END")


@pytest.mark.parametrize("m", [1, 3, -5, 2, 6, -2, 4, 12, -4, 8, -8])
def test_normalize_identifications(t3, m):
    t = t3.scales.ord(m)
    coords = _coordinates(t3)
    classes = [t3.normalize(m, lam, theta) for lam, theta in coords]
    for (c1, v1), (c2, v2) in product(zip(coords, classes), repeat=2):
        (lam1, theta1), (lam2, theta2) = c1, c2
        if t == 0:
            expected = c1 == c2
        else:
            socket = all(lam1.at(j) == SPADE for j in range(1, t))
            expected = _agree_off(lam1, lam2, t) and (
                theta1 == theta2 or (socket and _agree_off(theta1, theta2, t)))
        assert (v1 == v2) == expected, (m, c1, c2)


def test_kinds_and_orders(t3, L):
    assert t3.normalize(1, L("a"), L("b")).kind is VertexKind.PLAIN
    v = t3.normalize(2, L("a"), L("b"))
    assert (v.kind, v.order) == (VertexKind.SOCKET, 1)
    assert v == t3.normalize(2, L("-"), L("-"))
    g = t3.normalize(4, L("a.a"), L("b.b"))
    assert (g.kind, g.order) == (VertexKind.GLUING, 2)
    assert g == t3.normalize(4, L("a.SPADE"), L("b.b"))
    assert g != t3.normalize(4, L("a.a"), L("b"))
    s = t3.normalize(4, L("SPADE.a"), L("b.b"))
    assert (s.kind, s.order) == (VertexKind.SOCKET, 2)
    assert s == t3.normalize(4, L("SPADE"), L("b"))
    assert s.key() == "4|SPADE.*|b.*"


def test_valences(t3, L):
    assert t3.valence(t3.normalize(1, L("a.SPADE"), L("b"))) == 2
    assert t3.valence(t3.normalize(4, L("a"), L("-"))) == 2 * 3
    assert t3.valence(t3.normalize(2, L("-"), L("-"))) == 2 * 3 * 2
    assert t3.valence(t3.normalize(8, L("SPADE.SPADE"), L("-"))) == 2 * 3 * 2
    assert t3.valence(t3.normalize(8, L("a"), L("-"))) == 2 * 3


def test_neighbors_are_sorted_and_consistent(t3, L):
    v = t3.normalize(4, L("a"), L("b"))
    edges = t3.neighbors(v)
    assert list(edges) == sorted(edges)
    for e, w in t3.adjacent(v):
        assert v in (e.left, e.right)
        assert e.other(v) == w
        assert abs(w.m - v.m) == 1
        assert e in t3.neighbors(w)


def test_edge_other_rejects_stranger(t3, L):
    e = t3.edge(0, L("-"), L("-"))
    with pytest.raises(ValueError):
        e.other(t3.normalize(5, L("-"), L("-")))


def test_window_and_depth_errors(t3, L):
    with pytest.raises(WindowError):
        t3.normalize(17, L("-"), L("-"))
    with pytest.raises(DepthError):
        t3.normalize(1, L("a.a.a.a"), L("-"))
    with pytest.raises(ValueError):
        t3.normalize(1, L("c"), L("-"))


def test_edge_points(t3, L):
    p = t3.point(Fraction(3, 2), L("a"), L("b"))
    assert isinstance(p, EdgePoint)
    assert p.edge.m == 1
    assert p.offset == Fraction(1, 2)
    assert project(p) == Fraction(3, 2)
    assert p.key() == "1|a|b+1/2"
    assert t3.point(Fraction(3), L("a"), L("b")) == t3.normalize(3, L("a"), L("b"))
    with pytest.raises(ValueError):
        EdgePoint(p.edge, Fraction(1))


def test_class_counts(t2):
    assert len(t2.vertices_at(1)) == 36
    assert len(t2.vertices_at(2)) == 6
    assert len(t2.vertices_at(4)) == 10
    assert len(t2.vertices_at(8)) == 36


def test_freeze_and_dump(t2, tmp_path):
    t2.freeze()
    assert t2.frozen
    assert len(t2.known_vertices()) == 440
    assert len(t2.known_edges()) == 16 * 36
    buffer = io.StringIO()
    dump_truncation(t2, buffer)
    text = buffer.getvalue()
    assert text.splitlines()[0] == "# doubling-graph v1 depth=2 window=-8,8"
    path = tmp_path / "t2.dump"
    path.write_text(text)
    snapshot = load_dump(path)
    assert snapshot.depth == 2
    assert snapshot.window == (-8, 8)
    assert len(snapshot.vertices) == 440
    assert len(snapshot.edges) == 576
    again = io.StringIO()
    dump_truncation(t2, again)
    assert again.getvalue() == text


def test_load_dump_rejects_garbage(tmp_path):
    path = tmp_path / "bad.dump"
    path.write_text("hello\n")
    with pytest.raises(ConfigError):
        load_dump(path)
    path.write_text("# doubling-graph v1 depth=2 window=-8,8\nX\t1\n")
    with pytest.raises(ConfigError, match="malformed"):
        load_dump(path)


def test_order_separation(t3):
    sample = []
    for m in range(-8, 9):
        classes = t3.vertices_at(m)
        sample.extend(classes[::max(1, len(classes) // 6)])
    assert order_separation_violations(t3, sample) == []
