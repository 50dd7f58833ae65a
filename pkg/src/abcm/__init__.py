"""Adaptive bounded-confidence opinion models: simulation and analysis."""

from .graphs import (Graph, SbmSpec, generate_complete, generate_er, generate_sbm,
                     largest_connected_component, load_edge_list, write_edge_list)
from .models import (DW, HK, ModelParams, SimState, StepRecord, baseline_dw_step,
                     baseline_hk_step, baseline_step, confidence_update, dw_step,
                     hk_step, init_state)
from .metrics import (ClusterProfile, classify_clusters, cluster_spreads, converged,
                      effective_edges, opinion_clusters, shannon_entropy,
                      weighted_edge_fraction)
from .harness import (GraphSpec, RunConfig, RunResult, SweepConfig, initial_opinions,
                      mix_seed, run_single, run_sweep, run_traced_dw, run_traced_hk,
                      summarize, sweep_plan)
from .properties import (ConfidenceTrace, EffectiveGraphHistory, LimitClass,
                         classify_confidence_limit, cross_cluster_edge_check,
                         effective_graph_fixation, eventual_monotonicity_onset)

__version__ = "0.1.0"
