import math

from fractions import Fraction

import networkx as nx
import pytest

from src.exceptions import DisconnectedError, WindowError
from src.curves.assembly import pi_random_curve
from src.modulus.bad_box import bad_box_rhs, bad_box_scale, build_bad_box
from src.modulus.cutting_plane import CuttingPlaneSolver, p_modulus
from src.modulus.exhaustive import ExhaustiveSolver, exhaustive_modulus
from src.modulus.factory import ModulusSolverFactory
from src.modulus.kkt import separate
from src.modulus.neck_range import (gluing_ratio, in_neck_range, neck_range_threshold, neck_sum,
                                    neck_sum_profile)
from src.modulus.pi_conditions import holder_check, pi_condition, pi_condition_1
from src.modulus.problem import ModulusProblem, graph_problem, modulus_problem

RTOL = 1e-6


@pytest.mark.parametrize("n", [1, 2, 5])
@pytest.mark.parametrize("P", [1.0, 1.5, 2.0, 3.0])
def test_modulus_of_a_path(n, P):
    problem = graph_problem(nx.path_graph(n + 1), 0, n, P)
    cert = p_modulus(problem)
    assert cert.value == pytest.approx(n ** (1 - P), rel=RTOL)
    assert cert.lower <= cert.value
    assert cert.gap <= RTOL * cert.value


@pytest.mark.parametrize("P", [1.0, 2.0, 3.0])
def test_disjoint_paths_add(P):
    g = nx.Graph()
    for i in range(3):
        g.add_edge("s", f"m{i}")
        g.add_edge(f"m{i}", "t")
    cert = p_modulus(graph_problem(g, "s", "t", P))
    assert cert.value == pytest.approx(3 * 2 ** (1 - P), rel=RTOL)


def test_four_cycle():
    cycle = nx.cycle_graph(4)
    assert p_modulus(graph_problem(cycle, 0, 2, 2.0)).value == pytest.approx(1.0, rel=RTOL)
    assert p_modulus(graph_problem(cycle, 0, 2, 1.0)).value == pytest.approx(2.0, rel=RTOL)
    assert exhaustive_modulus(graph_problem(cycle, 0, 2, 2.0)).value == pytest.approx(1.0, rel=RTOL)


def test_weighted_series_edges():
    g = nx.Graph()
    g.add_edge(0, 1, nu=2.0)
    g.add_edge(1, 2, nu=3.0)
    cert = p_modulus(graph_problem(g, 0, 2, 2.0))
    assert cert.value == pytest.approx(6 / 5, rel=RTOL)
    assert cert.g((0, 1)) == pytest.approx(3 / 5, rel=1e-5)
    assert cert.g((1, 2)) == pytest.approx(2 / 5, rel=1e-5)


def test_two_modulus_is_effective_conductance():
    for graph in (nx.complete_graph(4), nx.petersen_graph(), nx.grid_2d_graph(3, 3)):
        nodes = sorted(graph.nodes)
        s, t = nodes[0], nodes[-1]
        cert = p_modulus(graph_problem(graph, s, t, 2.0))
        assert cert.value == pytest.approx(1 / nx.resistance_distance(graph, s, t), rel=1e-5)


def test_one_modulus_is_min_cut():
    for graph in (nx.complete_graph(5), nx.petersen_graph(), nx.grid_2d_graph(3, 4)):
        nodes = sorted(graph.nodes)
        s, t = nodes[0], nodes[-1]
        cert = p_modulus(graph_problem(graph, s, t, 1.0))
        assert cert.value == pytest.approx(nx.edge_connectivity(graph, s, t), rel=RTOL)


def test_certificate_is_admissible():
    problem = graph_problem(nx.petersen_graph(), 0, 7, 2.5)
    cert = p_modulus(problem)
    shortest, _ = separate(problem, cert.density)
    assert shortest == pytest.approx(1.0)
    for path in cert.paths:
        assert cert.path_length(problem, path) >= 1 - 1e-9
    assert cert.active_paths()
    summary = cert.to_dict()
    assert summary["paths"] == len(cert.paths)
    assert summary["value"] == cert.value
    assert set(summary["density"]) <= {str(var) for var in problem.variables}


def test_restricted_problem():
    problem = graph_problem(nx.cycle_graph(4), 0, 2, 2.0)
    restricted = problem.restricted(lambda var: var != (0, 1))
    assert restricted.size == 3
    assert p_modulus(restricted).value == pytest.approx(0.5, rel=RTOL)


def test_problem_validation():
    path = nx.path_graph(3)
    with pytest.raises(ValueError):
        graph_problem(path, 0, 2, 0.5)
    with pytest.raises(ValueError):
        graph_problem(path, 1, 1, 2.0)
    path.edges[0, 1]["nu"] = 0.0
    with pytest.raises(ValueError):
        graph_problem(path, 0, 2, 2.0)
    assert graph_problem(nx.path_graph(3), 0, 2, 1.0).Q == math.inf
    assert graph_problem(nx.path_graph(3), 0, 2, 3.0).Q == pytest.approx(1.5)


def test_disconnected_endpoints():
    g = nx.Graph()
    g.add_edge(0, 1)
    g.add_edge(2, 3)
    with pytest.raises(DisconnectedError):
        p_modulus(graph_problem(g, 0, 3, 2.0))
    with pytest.raises(DisconnectedError):
        exhaustive_modulus(graph_problem(g, 0, 3, 2.0))


def test_solver_factory():
    assert isinstance(ModulusSolverFactory.get_solver("cutting_plane"), CuttingPlaneSolver)
    assert isinstance(ModulusSolverFactory.get_solver("exhaustive", max_paths=10), ExhaustiveSolver)
    with pytest.raises(NotImplementedError):
        ModulusSolverFactory.get_solver("simplex")


@pytest.mark.slow
@pytest.mark.parametrize("P", [1.0, 1.5, 2.0, 3.0])
def test_cutting_plane_matches_exhaustive_on_the_atlas(P):
    checked = 0
    for graph in nx.graph_atlas_g()[20:400:9]:
        n = graph.number_of_nodes()
        if n < 3 or not nx.is_connected(graph):
            continue
        problem = graph_problem(graph, 0, n - 1, P)
        expected = exhaustive_modulus(problem).value
        assert p_modulus(problem).value == pytest.approx(expected, rel=1e-5, abs=1e-9), graph.edges
        checked += 1
    assert checked > 10


def test_neck_sums(params3):
    assert gluing_ratio(params3) == 3
    lower, upper = neck_range_threshold(params3)
    assert lower == upper == pytest.approx(1 + math.log2(3))
    assert neck_sum(5, 2.0, params3) == pytest.approx(1.5 + 2.25 + 3.375 + 5.0625 + 7.59375)
    profile = neck_sum_profile(3.5, params3, 12)
    assert len(profile) == 12
    assert max(profile) < 10
    assert neck_sum_profile(2.0, params3, 8)[-1] > 50
    with pytest.raises(ValueError):
        neck_sum(0, 2.0, params3)


def test_in_neck_range(params3):
    assert not in_neck_range(2.0, params3)
    assert not in_neck_range(1 + math.log2(3), params3)
    assert in_neck_range(3.0, params3)


def test_bad_box_bound(params3):
    assert bad_box_rhs(params3.scales, params3.weights, 3, 2.0) == pytest.approx(5 / 6)
    assert bad_box_rhs(params3.scales, params3.weights, 2, 3.0) == pytest.approx(4.0)
    with pytest.raises(ValueError):
        bad_box_rhs(params3.scales, params3.weights, 1, 2.0)
    assert bad_box_scale(params3.scales, 2) == 2
    assert bad_box_scale(params3.scales, 2, C0=Fraction(1, 4)) == 1


def test_build_bad_box(t3, t4, L):
    bad = build_bad_box(t4, 2)
    assert (bad.M, bad.m, bad.R) == (2, 16, 12)
    assert (bad.p0.m, bad.p1.m) == (12, 20)
    assert bad.theta1.at(4) == "b" and bad.theta0.at(4) == "END"
    box = bad.box(2)
    assert box.depth == 4
    assert box.contains_coordinates(Fraction(16), bad.lam, bad.theta0)
    with pytest.raises(WindowError, match="window too small"):
        build_bad_box(t3, 2)
    with pytest.raises(ValueError):
        build_bad_box(t4, 1)


def test_pi_condition_on_a_short_pair(t2, L):
    p = t2.normalize(0, L("-"), L("-"))
    q = t2.normalize(1, L("-"), L("-"))
    pi = pi_condition(t2, p, q, 2.0, C=2)
    assert pi.d == 1
    assert pi.value == pytest.approx(pi.certificate.value)
    assert 0 < pi.lower <= pi.value
    assert pi.certificate.gap <= 1e-4 * pi.value
    shortest, _ = separate(pi.problem, pi.certificate.density)
    assert shortest == pytest.approx(1.0)
    assert pi.to_dict()["edges"] == pi.problem.size
    assert pi_condition_1(t2, p, q, 2.0, C=2) == pytest.approx(pi.value, rel=RTOL)
    with pytest.raises(ValueError):
        pi_condition(t2, p, p, 2.0)


def test_pi_condition_scales_with_distance(t2, L):
    p = t2.normalize(0, L("-"), L("-"))
    q = t2.normalize(3, L("-"), L("-"))
    problem = modulus_problem(t2, p, q, 3.0, C=1)
    assert isinstance(problem, ModulusProblem)
    assert problem.d == 3
    pi = pi_condition(t2, p, q, 3.0, C=1)
    assert pi.value == pytest.approx(9 * pi.certificate.value)


def test_holder_check(t2, L):
    x = t2.normalize(0, L("-"), L("-"))
    y = t2.normalize(3, L("-"), L("-"))
    curve, _ = pi_random_curve(t2, x, y, P=3.0, C=1)
    problem = modulus_problem(t2, x, y, 3.0, C=1)
    cert = p_modulus(problem)
    report = holder_check(curve, cert, problem)
    assert report.expected_g_length >= 1 - 1e-6
    assert report.product >= report.expected_g_length * (1 - 1e-6)
