"""Subgraph matching with partial fused Gromov-Wasserstein optimal transport."""

from .errors import *  # noqa: F401,F403
from .graph import (Graph, SubgraphView, feature_cost_matrix, k_hop_neighborhood,
                    query_radius, structure_matrix)
from .transport import (Marginals, TransportPlan, partial_wasserstein_value,
                        solve_transport_lp)
from .fgw import (FgwProblem, SolveReport, frank_wolfe, gradient, line_search,
                  objective, objective_terms, tensor_product_apply)
from .matcher import (MatchConfig, MatchResult, SsotConfig, build_sot_problem,
                      candidate_filter, extract_matching, sot_match, ssot_match)
from .bench import BenchRecord, ErConfig, generate_er_instance, run_benchmark
from .graphio import load_graph, load_result, save_graph, save_result

__version__ = "0.1.0"
