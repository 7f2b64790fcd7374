"""Lebesgue-preserving expanding circle maps.

Build the unique missing branch of a full branch map, check invariance of
Lebesgue measure through the transfer operator, measure distortion over
cylinder partitions, and perturb maps with non-Dini moduli of continuity.
"""

from .branches import (
    AffineBranch,
    ExtendedBranch,
    Interval,
    PerturbedBranch,
    SinePerturbedBranch,
    TabulatedBranch,
    branch_deriv,
    branch_eval,
    branch_inverse,
)
from .distortion import (
    CylinderSet,
    DistortionReport,
    birkhoff_log_deriv,
    cylinders,
    distortion_level,
    distortion_profile,
)
from .estimators import (
    DistortionProfile,
    LebesguePerturbation,
    MissingBranchExtension,
    TransferOperator,
    UnboundedDistortionDemo,
)
from .exceptions import BudgetExceededError, LebmapsError, DomainError, NumericError, PreconditionError
from .extension import (
    MatchingReport,
    PartialMapSpec,
    assemble_circle_map,
    c1_matching_report,
    condition_one_margin,
    extend_missing_branch,
)
from .maps import FullBranchMap, ValidationReport, certify, map_eval, validate_full_branch_map
from .modulus import Modulus, dini_tail, modulus_eval
from .perturbation import (
    LowerBoundParams,
    PerturbationConfig,
    build_perturbed_branch,
    c1_distance,
    perturb_map,
    predicted_lower_bound,
    unbounded_demo,
)
from .transfer import DensityGrid, invariance_defect, pullback_measure_defect, transfer_apply

__version__ = "0.1.0"

__all__ = [
    "AffineBranch",
    "BudgetExceededError",
    "CylinderSet",
    "DensityGrid",
    "DistortionProfile",
    "DistortionReport",
    "DomainError",
    "ExtendedBranch",
    "FullBranchMap",
    "Interval",
    "LebesguePerturbation",
    "LebmapsError",
    "LowerBoundParams",
    "MatchingReport",
    "MissingBranchExtension",
    "Modulus",
    "NumericError",
    "PartialMapSpec",
    "PerturbationConfig",
    "PerturbedBranch",
    "PreconditionError",
    "SinePerturbedBranch",
    "TabulatedBranch",
    "TransferOperator",
    "UnboundedDistortionDemo",
    "ValidationReport",
    "assemble_circle_map",
    "birkhoff_log_deriv",
    "branch_deriv",
    "branch_eval",
    "branch_inverse",
    "build_perturbed_branch",
    "c1_distance",
    "c1_matching_report",
    "certify",
    "condition_one_margin",
    "cylinders",
    "dini_tail",
    "distortion_level",
    "distortion_profile",
    "extend_missing_branch",
    "invariance_defect",
    "map_eval",
    "modulus_eval",
    "perturb_map",
    "predicted_lower_bound",
    "pullback_measure_defect",
    "transfer_apply",
    "unbounded_demo",
    "validate_full_branch_map",
]
