"""Closed-form observability next to brute force and sampling.

Run with ``python3 demos/closed_forms.py``.
"""
import numpy as np

from netobs import (Scope, brute_force_metric, exact_global_edge_obs, exact_global_node_obs,
                    exact_local_node_obs, from_edge_list, gen_ba, mc_estimate)
from netobs.exact import global_edge_auoc, local_edge_auoc

# A 6-node "house": a square with a roof, plus a chimney node hanging off the top.
house = from_edge_list(6, [(0, 1), (1, 2), (2, 3), (3, 0), (2, 4), (3, 4), (4, 5)])

print("n_c  global-edge        global-node        local-node")
for n_c in range(house.n):
    ge = exact_global_edge_obs(house.n, n_c)
    gn = exact_global_node_obs(house, n_c)
    ln = exact_local_node_obs(house, n_c)
    bf = brute_force_metric(house, Scope("node", "global"), n_c)
    print(f"{n_c:>3}  {ge:.4f}             {gn:.4f} (bf {bf:.4f})  {ln:.4f}")

# Edge observability only depends on n, so a scale-free graph gives the same number.
g = gen_ba(2000, 3, seed=1)
est = mc_estimate(g, Scope("edge", "global"), 40, trials=2000, seed=7)
print(f"\nBA n=2000, 40 compromised: sampled {est.mean:.4f} +- {est.stderr:.4f}, "
      f"formula {exact_global_edge_obs(2000, 40):.4f}")

# Node observability is driven by the degree sequence; hubs are seen by many attackers.
deg = np.sort(g.degree)[::-1]
print(f"top-5 degrees {deg[:5].tolist()}, median {int(np.median(deg))}")

for n in (10, 100, 1000, 10_000):
    print(f"n={n:>6}: global-edge AUOC {global_edge_auoc(n):.5f}, local-edge AUOC {local_edge_auoc(n):.5f}")
