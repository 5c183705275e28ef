"""Community detection with the Diffusion Entropy Reducer."""

from .der import DerState, Partition, run
from .diffusion import DiffusionSet, SparseMeasure, walk_measures
from .ensemble import CoOccurrence, run_repeats
from .estimator import DiffusionEntropyReducer
from .graph import Graph, from_edge_list, read_edge_list, stationary
from .metrics import misclassified, nmi

__all__ = [
    "CoOccurrence",
    "DerState",
    "DiffusionEntropyReducer",
    "DiffusionSet",
    "Graph",
    "Partition",
    "SparseMeasure",
    "from_edge_list",
    "misclassified",
    "nmi",
    "read_edge_list",
    "run",
    "run_repeats",
    "stationary",
    "walk_measures",
]

__version__ = "0.1.0"
