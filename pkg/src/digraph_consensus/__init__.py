"""Digraph Laplacians, spanning in-forests and consensus dynamics.

Every quantity is computed by at least two independent routes so that
the combinatorial, spectral and dynamical views can be checked against
each other.
"""

from digraph_consensus.digraph import Digraph, EdgeListError, laplacian, parse_edge_list
from digraph_consensus.components import (
    ComponentDecomposition,
    decompose,
    forest_dimension_structural,
    has_spanning_converging_tree,
)
from digraph_consensus.forests import (
    EnumerationLimitError,
    ForestFamily,
    InForest,
    enumerate_maximal_in_forests,
    forest_matrix,
)
from digraph_consensus.spectral import (
    SpectralReport,
    check_rank_law,
    check_spectrum_localization,
    eigenprojector_resolvent,
    spectrum,
)
from digraph_consensus.dynamics import (
    ConvergenceError,
    PerronMatrix,
    TrajectoryRecord,
    long_run_matrix,
    perron,
    primitive_limit,
    simulate_continuous,
    simulate_discrete,
)

__version__ = "0.1.0"

__all__ = [
    "ComponentDecomposition",
    "ConvergenceError",
    "Digraph",
    "EdgeListError",
    "EnumerationLimitError",
    "ForestFamily",
    "InForest",
    "PerronMatrix",
    "SpectralReport",
    "TrajectoryRecord",
    "check_rank_law",
    "check_spectrum_localization",
    "decompose",
    "eigenprojector_resolvent",
    "enumerate_maximal_in_forests",
    "forest_dimension_structural",
    "forest_matrix",
    "has_spanning_converging_tree",
    "laplacian",
    "long_run_matrix",
    "parse_edge_list",
    "perron",
    "primitive_limit",
    "simulate_continuous",
    "simulate_discrete",
    "spectrum",
]
