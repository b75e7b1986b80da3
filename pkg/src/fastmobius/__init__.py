"""Möbius transforms of graphs, fast transforms on powersets, and Dempster-Shafer calculus."""

from .counters import OpCounter
from .cost import analytic_costs, cost_of_graph, cost_of_malgorithm, run_benchmark
from .evidence import (
    CombinationResult,
    combine_to_plausibility,
    dempster_fast,
    dempster_naive,
    normalize,
)
from .graph import (
    FiniteSet,
    Graph,
    MAlgorithm,
    WeightedGraph,
    apply_malgorithm,
    compose,
    count_paths,
    hasse_graph,
    mobius_function,
    mobius_transform,
    mobius_transform_weighted,
    product_weighted,
    verify_decomposition,
    zeta,
)
from .setfun import Frame, Kind, SetFunction, decode_subset, encode_subset, validate_bba
from .transforms import (
    TransformKind,
    fmt_bel_to_mass,
    fmt_mass_to_bel,
    fmt_mass_to_q,
    fmt_q_to_mass,
    hasse_sequence,
    naive_transform,
    q_to_pl,
)

__version__ = "0.1.0"

__all__ = [
    "CombinationResult",
    "FiniteSet",
    "Frame",
    "Graph",
    "Kind",
    "MAlgorithm",
    "OpCounter",
    "SetFunction",
    "TransformKind",
    "WeightedGraph",
    "analytic_costs",
    "apply_malgorithm",
    "combine_to_plausibility",
    "compose",
    "cost_of_graph",
    "cost_of_malgorithm",
    "count_paths",
    "decode_subset",
    "dempster_fast",
    "dempster_naive",
    "encode_subset",
    "fmt_bel_to_mass",
    "fmt_mass_to_bel",
    "fmt_mass_to_q",
    "fmt_q_to_mass",
    "hasse_graph",
    "hasse_sequence",
    "mobius_function",
    "mobius_transform",
    "mobius_transform_weighted",
    "naive_transform",
    "normalize",
    "product_weighted",
    "q_to_pl",
    "run_benchmark",
    "validate_bba",
    "verify_decomposition",
    "zeta",
]
