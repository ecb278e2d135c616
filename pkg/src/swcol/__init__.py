"""Graph colouring on small-world graphs built by rewiring regular lattices."""

__version__ = "0.1.0"

from .experiment import ExperimentConfig, SummaryRow, TrialRecord, cost_stats, run_sweep, wilson_interval
from .graph import Graph, is_valid_colouring, new_graph, read_dimacs, write_dimacs
from .lattice import Family, LatticeSpec, coordinate_map, generate
from .rewire import RewireParams, random_graph, rewire
from .rng import derive_trial_rng, make_rng
from .scaling import CollapseFitter, Curve, collapse_metric, find_best_exponent, rescale
from .solver import DsaturColourer, SolveBudget, SolveOutcome, Status, brute_force_colourable, solve

__all__ = [
    "CollapseFitter", "Curve", "DsaturColourer", "ExperimentConfig", "Family", "Graph",
    "LatticeSpec", "RewireParams", "SolveBudget", "SolveOutcome", "Status", "SummaryRow",
    "TrialRecord", "brute_force_colourable", "collapse_metric", "coordinate_map", "cost_stats",
    "derive_trial_rng", "find_best_exponent", "generate", "is_valid_colouring", "make_rng",
    "new_graph", "random_graph", "read_dimacs", "rescale", "rewire", "run_sweep", "solve",
    "wilson_interval", "write_dimacs",
]
