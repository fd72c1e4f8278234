"""Complete, ER, BA and WS graphs at matched density, 1 to 3 hops.

Prints one AUOC table per metric. Takes about a minute with the defaults.
"""
from netobs import Scope, build_curve, density
from netobs.generators import params_for_density

N, D, TRIALS = 250, 4 / 249, 200

graphs = {fam: params_for_density(fam, N, D, seed=3).build() for fam in ("er", "ba", "ws")}
for fam, g in graphs.items():
    print(f"{fam}: {g.num_edges} edges, density {density(g):.4f}, isolated {(g.degree == 0).sum()}")

for target in ("edge", "node"):
    for level in ("global", "local"):
        print(f"\n{level} {target}-observability AUOC")
        print("hops " + "".join(f"{fam:>9}" for fam in graphs))
        for k in (1, 2, 3):
            row = [build_curve(g, Scope(target, level, k), trials=TRIALS, seed=11).auoc() for g in graphs.values()]
            print(f"{k:>4} " + "".join(f"{v:>9.4f}" for v in row))
