"""Numerical toolkit for woven finite frames in R^n.

Decide and certify whether two frames (or frame sequences) are woven, compute
optimal and universal frame bounds, canonical duals, spark properties and
derived families, measure gaps and angles between subspaces, and evaluate
sufficient conditions with their guaranteed bounds. A deterministic CLI
(`frameweave`) exposes everything on JSON frame files.
"""

from .errors import (
    BadDimensions,
    DimensionMismatch,
    EmptyList,
    EnumerationLimitExceeded,
    FrameweaveError,
    NonSquare,
    NonSymmetric,
    NotAFrame,
    NotFinite,
    NotWovenPremise,
    ShapeMismatch,
    TooFewVectors,
    TrivialSubset,
    ZeroCoefficient,
    ZeroFamily,
)
from .frames import (
    Closure,
    Frame,
    FrameBounds,
    LinearMapProfile,
    Scope,
    apply_frame_operator,
    apply_operator,
    canonical_dual,
    difference_family,
    frame_operator,
    is_frame,
    is_full_spark,
    is_weak_full_spark,
    linear_comb_family,
    optimal_bounds,
    profile_operator,
    synthesis,
)
from .geometry import (
    GapAngleReport,
    angle_cos,
    directed_gap,
    gap,
    gap_angle_report,
    min_angle_cos,
    weaving_span_geometry,
)
from .linalg import (
    DEFAULT_TOLERANCE,
    Subspace,
    Tolerance,
    numerical_rank,
    operator_norm,
    orthonormal_basis,
    projection,
    pseudo_inverse,
    subspace_intersection,
    sym_extremal_eigs,
)
from .weaving import (
    ConditionReport,
    Counterexample,
    DEFAULT_ENUMERATION_LIMIT,
    ExplorationReport,
    IndexSubset,
    Problem,
    SubsetPolicy,
    WovenReport,
    bessel_sum_bound,
    certify_woven,
    certify_woven_sequences,
    check_corollary,
    check_norm_sum,
    check_perturbation,
    explore_problem,
    surjectivity_check,
    synthesis_norm_bound,
    weaving_family,
    weaving_operator,
)

__version__ = "0.1.0"

__all__ = [
    "FrameweaveError",
    "NotFinite",
    "NonSymmetric",
    "NonSquare",
    "DimensionMismatch",
    "ShapeMismatch",
    "NotAFrame",
    "TooFewVectors",
    "ZeroCoefficient",
    "ZeroFamily",
    "EmptyList",
    "EnumerationLimitExceeded",
    "NotWovenPremise",
    "BadDimensions",
    "TrivialSubset",
    "Tolerance",
    "DEFAULT_TOLERANCE",
    "Subspace",
    "sym_extremal_eigs",
    "numerical_rank",
    "operator_norm",
    "pseudo_inverse",
    "orthonormal_basis",
    "projection",
    "subspace_intersection",
    "Frame",
    "FrameBounds",
    "LinearMapProfile",
    "Scope",
    "Closure",
    "synthesis",
    "frame_operator",
    "apply_frame_operator",
    "optimal_bounds",
    "is_frame",
    "canonical_dual",
    "is_full_spark",
    "is_weak_full_spark",
    "difference_family",
    "linear_comb_family",
    "apply_operator",
    "profile_operator",
    "GapAngleReport",
    "directed_gap",
    "gap",
    "min_angle_cos",
    "angle_cos",
    "gap_angle_report",
    "weaving_span_geometry",
    "IndexSubset",
    "SubsetPolicy",
    "WovenReport",
    "ConditionReport",
    "Problem",
    "Counterexample",
    "ExplorationReport",
    "DEFAULT_ENUMERATION_LIMIT",
    "weaving_family",
    "weaving_operator",
    "certify_woven",
    "certify_woven_sequences",
    "bessel_sum_bound",
    "synthesis_norm_bound",
    "surjectivity_check",
    "check_perturbation",
    "check_corollary",
    "check_norm_sum",
    "explore_problem",
]
