import csv
import io
import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import cycle, path, star
from netobs import (CurvePoint, InputError, ObservabilityCurve, Scope, auoc, brute_force_metric, build_curve, gen_ba,
                    gen_er)
from netobs.curves import auoc_stderr, curve_to_csv, curve_to_dict, default_grid, full_grid, linear_curve
from netobs.exact import global_edge_auoc, local_edge_auoc


def line(xs, ys, se=None):
    se = se if se is not None else [0.0] * len(xs)
    return ObservabilityCurve([CurvePoint(x, y, s) for x, y, s in zip(xs, ys, se)])


def test_global_edge_three_point_grid():
    n = 20
    c = build_curve(cycle(n), Scope("edge", "global"), grid=[0, n // 2, n])
    mid = 1 - 0.5 * ((n / 2 - 1) / (n - 1))
    assert c.values.tolist() == pytest.approx([0.0, mid, 1.0])
    assert c.x.tolist() == [0.0, 0.5, 1.0]
    assert c.method == "closed-form" and (c.stderrs == 0).all()


def test_star_local_node_small_grid():
    c = build_curve(star(4), Scope("node", "local"), grid=[0, 1], method="exact")
    assert c.values.tolist() == pytest.approx([0.0, 0.5])


def test_single_point_curve_has_no_auoc():
    c = build_curve(path(5), Scope("edge", "global"), grid=[2])
    assert len(c.points) == 1
    with pytest.raises(InputError):
        auoc(c)


def test_exact_method_needs_one_hop():
    with pytest.raises(InputError):
        build_curve(path(5), Scope("node", "global", 2), method="exact")


def test_grid_must_increase():
    with pytest.raises(InputError):
        build_curve(path(5), Scope(), grid=[0, 3, 3])


def test_default_grid():
    assert default_grid(20) == list(range(21))
    assert default_grid(10) == list(range(11))
    g = default_grid(250)
    assert g[:3] == [0, 1, 13] and g[-1] == 250 and len(g) == 22
    local = default_grid(250, local=True)
    assert 249 in local and local[-1] == 250


@pytest.mark.parametrize("xs, ys, expected", [([0, 0.5, 1], [0, 0.5, 1], 0.5), ([0, 1], [1, 1], 1.0),
                                             ([0.2, 0.6], [0.2, 0.6], 0.4)])
def test_auoc_examples(xs, ys, expected):
    assert auoc(line(xs, ys)) == pytest.approx(expected, abs=1e-12)


def test_linear_baseline():
    assert linear_curve().auoc() == pytest.approx(0.5, abs=1e-12)


def test_auoc_not_clamped():
    # points below the diagonal are kept as they are
    assert auoc(line([0, 0.5, 1], [0, 0.0, 1])) == pytest.approx(0.25)


def test_curve_rejects_unsorted_x():
    with pytest.raises(InputError):
        line([0, 0.5, 0.5], [0, 0, 0])


def test_global_edge_auoc_full_grid_at_250():
    c = build_curve(cycle(250), Scope("edge", "global"), grid=full_grid(250))
    assert global_edge_auoc(250) == pytest.approx(0.66733, abs=1e-5)
    assert abs(c.auoc() - global_edge_auoc(250)) <= 1e-4


@pytest.mark.parametrize("n", [50, 250, 1000])
def test_global_edge_auoc_default_grid(n):
    c = build_curve(cycle(n), Scope("edge", "global"))
    assert abs(c.auoc() - global_edge_auoc(n)) <= 1e-3


@pytest.mark.parametrize("n", [50, 250, 1000])
def test_local_edge_auoc_full_grid(n):
    c = build_curve(cycle(n), Scope("edge", "local"), grid=full_grid(n))
    assert abs(c.auoc() - local_edge_auoc(n)) <= 1e-3
    # the closing point (1, 1) leaves exactly this gap to the discrete-sum constant
    assert local_edge_auoc(n) - c.auoc() == pytest.approx(1 / (2 * n * (n - 1)), rel=1e-6)


@given(st.lists(st.floats(0, 1), min_size=2, max_size=15), st.data())
def test_auoc_monotone_under_domination(ys, data):
    xs = np.linspace(0, 1, len(ys))
    bumps = data.draw(st.lists(st.floats(0, 1), min_size=len(ys), max_size=len(ys)))
    hi = [min(1.0, y + b) for y, b in zip(ys, bumps)]
    assert auoc(line(xs, hi)) >= auoc(line(xs, ys)) - 1e-12


def test_auoc_stderr_propagation():
    c = line([0, 0.5, 1], [0, 0.5, 1], se=[0.0, 0.1, 0.0])
    # middle weight is 1/2
    assert auoc_stderr(c) == pytest.approx(0.05)


@pytest.mark.parametrize("g", [path(7), star(7), cycle(8)], ids=repr)
def test_brute_force_global_curves_non_decreasing(g):
    for target in ("edge", "node"):
        vals = [brute_force_metric(g, Scope(target, "global", 2), c) for c in range(g.n + 1)]
        assert np.all(np.diff(vals) >= -1e-12)


def test_hop_ordering_with_shared_seeds():
    g = gen_er(150, 0.02, seed=6)
    for target in ("edge", "node"):
        curves = [build_curve(g, Scope(target, "global", k), trials=100, seed=3, method="mc") for k in (1, 2, 3)]
        for lo, hi in zip(curves, curves[1:]):
            assert np.all(hi.values >= lo.values - 1e-12)


def test_mc_curve_is_deterministic():
    g = gen_ba(120, 2, seed=1)
    a = build_curve(g, Scope("node", "local", 2), trials=60, seed=9)
    b = build_curve(g, Scope("node", "local", 2), trials=60, seed=9)
    assert curve_to_csv(a) == curve_to_csv(b)
    assert a.method == "monte-carlo" and a.points[-1].value == 1.0


def test_csv_format():
    c = build_curve(path(4), Scope("edge", "global"), grid=[0, 2, 4])
    rows = list(csv.reader(io.StringIO(curve_to_csv(c))))
    assert rows[0] == ["x", "value", "stderr"]
    assert rows[2] == ["0.5", "0.833333", "0"]


def test_json_document():
    c = build_curve(path(4), Scope("edge", "global"), grid=[0, 2, 4], label="p4")
    doc = json.loads(json.dumps(curve_to_dict(c)))
    assert doc["label"] == "p4" and doc["scope"] == {"target": "edge", "level": "global", "hops": 1}
    assert doc["auoc"] == pytest.approx(auoc(c))
    assert [p["n_c"] for p in doc["points"]] == [0, 2, 4]


def test_curve_grid_avoids_undefined_local_edge_counts():
    from netobs import from_edge_list
    from netobs.curves import curve_grid
    g = from_edge_list(20, [(0, 1), (1, 2), (2, 3)])  # 16 isolated nodes
    grid = curve_grid(g, Scope("edge", "local"))
    assert grid[-2:] == [3, 20]
    c = build_curve(g, Scope("edge", "local", 2), trials=50, seed=1)
    assert c.x[-1] == 1.0 and c.values[-1] == 1.0
    assert curve_grid(g, Scope("node", "local")) == default_grid(20, local=True)
