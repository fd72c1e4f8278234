import math
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import complete, cycle, graphs, path, star
from netobs import (MetricDomainError, exact_global_edge_obs, exact_global_node_obs, exact_local_edge_obs,
                    exact_local_node_obs, exact_node_obs_prob, from_edge_list, survival_ratio)
from netobs.exact import global_edge_auoc, local_edge_auoc, survival_ratios


def enumerate_global_edge(g, n_c):
    """Exact mean of |E_o|/|E| over every n_c-subset, in rationals."""
    total = Fraction(0)
    subs = list(combinations(range(g.n), n_c))
    for s in subs:
        s = set(s)
        seen = sum(1 for a, b in g.edges.tolist() if a in s or b in s)
        total += Fraction(seen, g.num_edges)
    return total / len(subs)


def test_survival_ratio_examples():
    assert survival_ratio(4, 1, 1) == pytest.approx(2 / 3)
    assert survival_ratio(4, 1, 3) == 0.0
    assert survival_ratio(9, 0, 5) == 1.0


@given(st.integers(1, 60).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, n - 1), st.integers(0, n - 1))))
def test_survival_ratio_matches_binomials(args):
    n, n_c, d = args
    expected = math.comb(n - 1 - d, n_c) / math.comb(n - 1, n_c) if n - 1 - d >= n_c else 0.0
    assert survival_ratio(n, n_c, d) == pytest.approx(expected, rel=1e-12, abs=1e-300)
    assert survival_ratios(n, n_c, [d])[0] == pytest.approx(expected, rel=1e-12, abs=1e-300)


@given(st.integers(2, 80).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, n - 2), st.integers(0, n - 2))))
def test_survival_ratio_non_increasing(args):
    n, n_c, d = args
    assert survival_ratio(n, n_c, d + 1) <= survival_ratio(n, n_c, d)
    assert survival_ratio(n, n_c + 1, d) <= survival_ratio(n, n_c, d)


def test_survival_ratio_huge_n_does_not_overflow():
    n = 10_000_000
    v = survival_ratio(n, 100_000, 50)
    # (1 - 0.01)^50 to first order
    assert v == pytest.approx(0.99 ** 50, rel=1e-4)
    assert 0.0 < survival_ratios(n, 100_000, [50, 5000])[1] < 1e-20


@pytest.mark.parametrize("args", [(4, 5, 1), (4, -1, 1), (4, 1, 4)])
def test_survival_ratio_domain(args):
    with pytest.raises(MetricDomainError):
        survival_ratio(*args)


def test_global_edge_example_by_enumeration():
    oracle = enumerate_global_edge(path(4), 2)
    assert oracle == Fraction(5, 6)
    assert exact_global_edge_obs(4, 2) == pytest.approx(float(oracle), abs=1e-15)


@pytest.mark.parametrize("n", [2, 5, 40])
def test_global_edge_endpoints(n):
    assert exact_global_edge_obs(n, 0) == 0.0
    assert exact_global_edge_obs(n, n) == 1.0


def test_local_edge_example_by_enumeration():
    # every size-2 compromised set of the 5-cycle; average observed share of each survivor's edges
    g = cycle(5)
    vals = []
    for s in combinations(range(5), 2):
        ratios = [sum(1 for v in g.neighbors(u) if v in s) / g.degree[u] for u in range(5) if u not in s]
        vals.append(sum(ratios) / len(ratios))
    assert sum(vals) / len(vals) == pytest.approx(0.5)
    assert exact_local_edge_obs(5, 2) == 0.5


def test_local_edge_endpoints_and_domain():
    assert exact_local_edge_obs(7, 0) == 0.0
    assert exact_local_edge_obs(7, 6) == 1.0
    with pytest.raises(MetricDomainError):
        exact_local_edge_obs(7, 7)


def test_node_obs_prob_star():
    g = star(4)
    assert exact_node_obs_prob(g, 0, 1) == 1.0
    assert exact_node_obs_prob(g, 1, 1) == pytest.approx(1 / 3)
    lonely = from_edge_list(3, [(0, 1)])
    assert exact_node_obs_prob(lonely, 2, 2) == 0.0


def test_local_node_examples():
    # star n=4, one compromised: centre compromised (1/4) -> all 3 leaves seen; leaf compromised -> 1 of 3 seen
    brute = (1 * 1.0 + 3 * (1 / 3)) / 4
    assert exact_local_node_obs(star(4), 1) == pytest.approx(brute) == pytest.approx(0.5)
    assert exact_local_node_obs(complete(6), 3) == pytest.approx(1.0)
    assert exact_local_node_obs(star(5), 0) == 0.0
    with pytest.raises(MetricDomainError):
        exact_local_node_obs(star(4), 4)


def test_global_node_examples():
    assert exact_global_node_obs(star(4), 1) == pytest.approx((1 + 3 * 0.5) / 4)
    assert exact_global_node_obs(complete(9), 1) == pytest.approx(1.0)
    assert exact_global_node_obs(star(4), 4) == 1.0


@given(graphs(min_n=2), st.data())
def test_local_global_identity(g, data):
    n_c = data.draw(st.integers(0, g.n - 1))
    lhs = exact_global_node_obs(g, n_c)
    rhs = n_c / g.n + (g.n - n_c) / g.n * exact_local_node_obs(g, n_c)
    assert abs(lhs - rhs) <= 1e-12


@pytest.mark.parametrize("n", [4, 6])
def test_edge_metric_ignores_structure(n):
    # rational enumeration over very different shapes gives the same value as the formula
    for n_c in range(n + 1):
        values = {enumerate_global_edge(g, n_c) for g in (path(n), star(n), cycle(n), complete(n))}
        assert len(values) == 1
        assert float(values.pop()) == pytest.approx(exact_global_edge_obs(n, n_c), abs=1e-15)


def test_degree_sequence_is_sufficient():
    hexagon = cycle(6)
    two_triangles = from_edge_list(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
    for n_c in range(6):
        assert exact_local_node_obs(hexagon, n_c) == exact_local_node_obs(two_triangles, n_c)
        assert exact_global_node_obs(hexagon, n_c) == exact_global_node_obs(two_triangles, n_c)


def test_auoc_constants():
    assert global_edge_auoc(4) == pytest.approx((8 / 3 - 0.5) / 3)
    assert local_edge_auoc(4) == pytest.approx(4 / 6)
