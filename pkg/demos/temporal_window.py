"""How observability grows as a contact log is watched for longer.

A BA backbone emits contacts as independent Poisson processes. Windows
are nested, all starting at the first contact.
"""
from netobs import Scope, gen_ba, poisson_events, temporal_sweep
from netobs.graph import avg_clustering
from netobs.ingest import DAY, EventTable

backbone = gen_ba(1500, 2, seed=21)
table = EventTable.build(poisson_events(backbone, 28 * DAY, 1 / (12 * DAY), seed=22))
print(f"{table.time.size} contacts among {len(table.idmap)} people")

windows = [1 * DAY, 7 * DAY, 14 * DAY, 28 * DAY]
for d in windows:
    g = table.window(table.start, d)
    print(f"{d / DAY:>4.0f}d window: {g.num_edges} edges, clustering {avg_clustering(g):.4f}")

# at one hop the global edge ratio stays put: it never depends on the graph
for name in ("global-edge@1", "global-edge@2", "local-edge@2", "global-node@2"):
    rows = temporal_sweep(table, windows, Scope.parse(name), 0.01, trials=300, seed=5, curve_trials=40)
    cells = "  ".join(f"{r.estimate.mean:.3f} (auoc {r.auoc:.3f})" for r in rows)
    print(f"{name:<14} {cells}")
