"""Weighted plane trees: exact counting, exact and approximate sampling.

The package treats a weight sequence (one nonnegative rational per arity)
as the single source of truth and derives everything else from it: exact
counting series for planted and unrooted plane trees, exhaustive
enumeration oracles at small sizes, exact samplers realizing the symmetry
decomposition of the unrooted law, fast approximate samplers through
size-split pairs of conditioned Galton-Watson trees, and the summary
statistics used to probe scaling limits numerically.
"""

from .enumeration import (
    EnumerationError,
    ExactLaw,
    PLANTED_CAP,
    UNROOTED_CAP,
    enumerate_planted,
    enumerate_unrooted,
    exact_law_approx,
    exact_law_planted,
    exact_law_unrooted,
    split_independence_report,
    split_size_law,
    tv_distance,
)
from .sampling import (
    RetryBudgetError,
    RngStream,
    SamplingError,
    boltzmann_planted_law,
    sample_conditioned_gw,
    sample_conditioned_gw_batch,
    sample_pair_split,
    sample_planted,
    sample_unrooted_approx,
    sample_unrooted_exact,
    sample_unrooted_exact_counts,
)
from .series import (
    SeriesError,
    SeriesTable,
    composition_asymptotic_check,
    labelled_series,
    planted_series,
    planted_series_float,
    shifted_series,
    subexp_diagnostics,
    symmetry_probability,
    symmetry_probability_curve,
    symmetry_series_edge,
    symmetry_series_vertex,
    unrooted_series,
)
from .stats import (
    DegreeCltReport,
    DiameterTailReport,
    MaxDegreeReport,
    NeighborhoodCensusReport,
    SampleReport,
    StatsError,
    ball_code,
    batch_degree_count,
    batch_max_two_degrees,
    degree_clt_report,
    diameter_tail_report,
    diameters_of_codes,
    empirical_tv,
    max_degree_report,
    measure,
    neighborhood_census_report,
)
from .trees import (
    PlantedTree,
    TreeError,
    UnrootedPlaneTree,
    canonicalize,
    center_classify,
    corner_root,
    degree_weight,
    join_at_root,
    split_at_root,
    tree_weight,
)
from .weights import (
    OffspringDistribution,
    WeightError,
    WeightSequence,
    admissible_sizes,
    offspring_distribution,
    sampling_offspring,
    tilt,
    weights_from_json,
    weights_to_json,
    load_weights,
)

__version__ = "0.1.0"

__all__ = [
    "EnumerationError",
    "ExactLaw",
    "PLANTED_CAP",
    "UNROOTED_CAP",
    "enumerate_planted",
    "enumerate_unrooted",
    "exact_law_approx",
    "exact_law_planted",
    "exact_law_unrooted",
    "split_independence_report",
    "split_size_law",
    "tv_distance",
    "RetryBudgetError",
    "RngStream",
    "SamplingError",
    "boltzmann_planted_law",
    "sample_conditioned_gw",
    "sample_conditioned_gw_batch",
    "sample_pair_split",
    "sample_planted",
    "sample_unrooted_approx",
    "sample_unrooted_exact",
    "sample_unrooted_exact_counts",
    "SeriesError",
    "SeriesTable",
    "composition_asymptotic_check",
    "labelled_series",
    "planted_series",
    "planted_series_float",
    "shifted_series",
    "subexp_diagnostics",
    "symmetry_probability",
    "symmetry_probability_curve",
    "symmetry_series_edge",
    "symmetry_series_vertex",
    "unrooted_series",
    "DegreeCltReport",
    "DiameterTailReport",
    "MaxDegreeReport",
    "NeighborhoodCensusReport",
    "SampleReport",
    "StatsError",
    "ball_code",
    "batch_degree_count",
    "batch_max_two_degrees",
    "degree_clt_report",
    "diameter_tail_report",
    "diameters_of_codes",
    "empirical_tv",
    "max_degree_report",
    "measure",
    "neighborhood_census_report",
    "PlantedTree",
    "TreeError",
    "UnrootedPlaneTree",
    "canonicalize",
    "center_classify",
    "corner_root",
    "degree_weight",
    "join_at_root",
    "split_at_root",
    "tree_weight",
    "OffspringDistribution",
    "WeightError",
    "WeightSequence",
    "admissible_sizes",
    "offspring_distribution",
    "sampling_offspring",
    "tilt",
    "weights_from_json",
    "weights_to_json",
    "load_weights",
    "__version__",
]
