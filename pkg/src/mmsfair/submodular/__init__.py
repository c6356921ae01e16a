"""Submodular side of the package: valuation oracles, the threshold round
robin with its self-calibrating wrapper, and the multilinear extension."""

from .allocate import ThresholdState, alg_sub, round_robin
from .multilinear import (
    ONE_MINUS_INV_E_UPPER,
    FractionalAllocation,
    ProportionalityReport,
    expected_ordered_marginal,
    multilinear_exact,
    multilinear_mc,
    proportionality_check,
)
from .valuations import (
    BudgetAdditive,
    ExplicitTable,
    MarginalValuation,
    SubmodularityReport,
    SubmodularValuation,
    WeightedCoverage,
    detect_positive_mms,
    goods_of,
    mask_of,
    verify_submodular,
)

__all__ = [
    "BudgetAdditive",
    "ExplicitTable",
    "FractionalAllocation",
    "MarginalValuation",
    "ONE_MINUS_INV_E_UPPER",
    "ProportionalityReport",
    "SubmodularityReport",
    "SubmodularValuation",
    "ThresholdState",
    "WeightedCoverage",
    "alg_sub",
    "detect_positive_mms",
    "expected_ordered_marginal",
    "goods_of",
    "mask_of",
    "multilinear_exact",
    "multilinear_mc",
    "proportionality_check",
    "round_robin",
    "verify_submodular",
]
