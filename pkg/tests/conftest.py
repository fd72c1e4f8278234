import networkx as nx
import numpy as np
import pytest
from hypothesis import strategies as st

from netobs import from_edge_list, gen_er


def path(n):
    return from_edge_list(n, [(i, i + 1) for i in range(n - 1)])


def star(n):
    return from_edge_list(n, [(0, i) for i in range(1, n)])


def cycle(n):
    return from_edge_list(n, [(i, (i + 1) % n) for i in range(n)])


def complete(n):
    return from_edge_list(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def to_nx(g):
    G = nx.Graph()
    G.add_nodes_from(range(g.n))
    G.add_edges_from(map(tuple, g.edges.tolist()))
    return G


def er_without_isolated(count, n_range=(4, 10), p=0.45, start_seed=1000):
    """First ``count`` ER draws (cycling n over n_range) that have no isolated node."""
    out, seed = [], start_seed
    sizes = list(range(n_range[0], n_range[1] + 1))
    while len(out) < count:
        n = sizes[len(out) % len(sizes)]
        g = gen_er(n, p, seed)
        seed += 1
        if g.num_edges and (g.degree > 0).all():
            out.append(g)
    return out


def small_fixtures():
    """Paths, stars, cycles and complete graphs on 3..10 nodes plus 20 ER draws."""
    gs = []
    for n in range(3, 11):
        gs += [("path", path(n)), ("star", star(n)), ("complete", complete(n))]
        if n >= 3:
            gs.append(("cycle", cycle(n)))
    gs += [(f"er{i}", g) for i, g in enumerate(er_without_isolated(20))]
    return gs


@st.composite
def graphs(draw, min_n=1, max_n=12):
    n = draw(st.integers(min_n, max_n))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return from_edge_list(n, chosen)


@pytest.fixture
def p3():
    return path(3)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
