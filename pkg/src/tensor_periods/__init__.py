"""Deligne-period monomials for tensor products of pure motives, with an exact randomized oracle."""

from .combinatorics import (
    ACounts,
    ExponentLedger,
    NotCritical,
    PeriodExpression,
    PeriodSymbol,
    UnsupportedRank,
    compute_counts,
    exponent_ledger,
    period_formula,
    ratio_relation,
    signed_counts,
)
from .hodge import (
    BettiSplit,
    CriticalityResult,
    FiltrationProfile,
    HodgeData,
    InvalidHodgeData,
    betti_split,
    criticality,
    filtration_profile,
    tensor_betti_split,
    tensor_profile,
    validate,
)
from .invariants import (
    AdmissibilityType,
    InvariantPolynomial,
    check_equivariance,
    construct_invariant,
    corner_minor,
    evaluate,
    multiply_types,
    type_of_corner,
    type_of_cp,
    type_of_det,
)
from .linalg import RationalMatrix
from .oracle import (
    adjudicate_variants,
    discover_exponents,
    invariant_values,
    random_realization,
    tensor_realization,
    verify_ratio_relation,
    verify_theorem,
)

__version__ = "0.1.0"
