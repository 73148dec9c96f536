"""Exact extremal set-family computations with a smoothed-counting optimizer."""

from .exactmath import binom
from .formulas import (
    EqualityReport,
    IntersectParams,
    MatchingParams,
    a_sweep_matching,
    erdos_value,
    intersect_term,
    intersect_value,
    lemma2_check,
    matching_formula_value,
    matching_term,
    section3_bound,
    step_dominance_check,
)
from .families import (
    HalfspaceSpec,
    KSet,
    SetFamily,
    WeightVector,
    all_ksets,
    build_intersect_extremal,
    build_matching_extremal,
    canonical_matching_witness,
    canonical_swise_witness,
    dump_family,
    halfspace_family,
    has_l_matching,
    is_left_compressed,
    is_swise_t_intersecting,
    left_compress,
    load_family,
    weight_to_beta,
)
from .oracle import Budget, OracleResult, audit, max_no_matching, max_swise_t_intersecting
from .smoothing import (
    KktReport,
    SmoothingConfig,
    admissible_count,
    gamma_threshold,
    gaussian_cdf,
    grad_smoothed_count,
    kkt_check,
    maximize,
    project_monotone_simplex,
    psi_threshold,
    smoothed_count,
    smoothed_membership,
    witness_penalty,
)

__version__ = "0.1.0"
