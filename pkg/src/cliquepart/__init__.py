"""Clique partition sums of weighted graphs, with certified series estimates.

The package turns a graph into pair weights close to 1, estimates the log of
the clique partition sum by a truncated series along the segment from the
all-ones matrix (with a rigorous additive error bound), and builds on that a
density functional, a sound two-sided decision rule for the existence of
dense m-subsets, and greedy extraction of a near-average-dense subset.
Exact brute-force oracles and a numerical zero-freeness audit back every
estimate.
"""

from .density import (
    DECISION_FACTOR,
    MAX_DECIDE_CERTIFICATE,
    DensityVerdict,
    Verdict,
    classify_density_estimate,
    decide_density,
    density_functional_estimate,
    extract_dense_subset,
)
from .errors import (
    CapExceededError,
    CliquePartError,
    DecideRefusedError,
    DegenerateSystemError,
    DomainError,
    ParameterError,
    ParseError,
    RegimeError,
)
from .graph_io import load_graph, parse_dimacs, parse_edge_list, parse_graph_text
from .model import (
    AlgorithmParams,
    Graph,
    Mode,
    Regime,
    WeightMatrix,
    as_fraction,
    binomial,
    float_log,
    log_weight_curve,
    weight_curve,
    weights_from_graph,
)
from .oracle import (
    DEFAULT_ORACLE_CAP,
    DensityHistogram,
    complex_partition_function,
    density_histogram,
    exact_g_of_t,
    exact_partition_function,
    exact_restricted_pf,
)
from .taylor import (
    ApproxLog,
    CompensatedSum,
    DerivativeVector,
    TruncationPlan,
    f_from_g,
    g_derivatives,
    order_for_target,
    taylor_log_estimate,
    truncation_error_bound,
)
from .zerofree import (
    AuditResult,
    ComplexWeightMatrix,
    ZeroFreeConstants,
    angle_sum_check,
    audit_min_modulus,
    large_gap_theta_root,
    line_matrix,
    sample_polydisc,
    standard_fixed_point_gap,
)

__version__ = "0.1.0"

__all__ = [
    "AlgorithmParams",
    "ApproxLog",
    "AuditResult",
    "CapExceededError",
    "CliquePartError",
    "ComplexWeightMatrix",
    "CompensatedSum",
    "DECISION_FACTOR",
    "DEFAULT_ORACLE_CAP",
    "DecideRefusedError",
    "DegenerateSystemError",
    "DensityHistogram",
    "DensityVerdict",
    "DerivativeVector",
    "DomainError",
    "Graph",
    "MAX_DECIDE_CERTIFICATE",
    "Mode",
    "ParameterError",
    "ParseError",
    "Regime",
    "RegimeError",
    "TruncationPlan",
    "Verdict",
    "WeightMatrix",
    "ZeroFreeConstants",
    "angle_sum_check",
    "as_fraction",
    "audit_min_modulus",
    "binomial",
    "classify_density_estimate",
    "complex_partition_function",
    "decide_density",
    "density_functional_estimate",
    "density_histogram",
    "exact_g_of_t",
    "exact_partition_function",
    "exact_restricted_pf",
    "extract_dense_subset",
    "f_from_g",
    "float_log",
    "g_derivatives",
    "large_gap_theta_root",
    "line_matrix",
    "load_graph",
    "log_weight_curve",
    "order_for_target",
    "parse_dimacs",
    "parse_edge_list",
    "parse_graph_text",
    "sample_polydisc",
    "standard_fixed_point_gap",
    "taylor_log_estimate",
    "truncation_error_bound",
    "weight_curve",
    "weights_from_graph",
]
