"""Observability of networks under random node compromise."""

from .city import (CityProfile, city_sweep, estimate_city_exponential, exponential_integral,
                   lno_approx, local_node_obs_city)
from .curves import (CurvePoint, ObservabilityCurve, auoc, auoc_stderr, build_curve, curve_grid,
                     default_grid, full_grid)
from .errors import BudgetError, InputError, MetricDomainError, NetobsError
from .exact import (exact_global_edge_obs, exact_global_node_obs, exact_local_edge_obs,
                    exact_local_node_obs, exact_node_obs_prob, survival_ratio)
from .generators import GeneratorSpec, gen_ba, gen_complete, gen_er, gen_ws, params_for_density
from .graph import (Graph, avg_clustering, density, from_edge_list, khop_nodes, observed_edges,
                    read_edge_list, write_edge_list)
from .ingest import (EventRecord, IdMap, SightingRecord, colocation_graphs, parse_events,
                     parse_sightings, poisson_events, temporal_sweep, window_graph)
from .montecarlo import (McEstimate, Scope, brute_force_metric, mc_estimate, realized_metric,
                         sample_compromised)

__version__ = "0.1.0"
