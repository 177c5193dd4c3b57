"""Derived sequences of overring families on executable domain models.

The package builds three kinds of executable models: ordinals in Cantor
normal form, presented compact zero-dimensional spaces, and domains
described by valuation vectors or spectral descriptors.  On top of them
it classifies families of flat overrings, runs the transfinite derived
sequence to compute Jaffard degrees with a sharp/dull verdict, and
factors stable operations through families, each theorem backed by a
brute-force check wherever the model is finite enough to quantify.
"""

from .ordinal import (
    OMEGA,
    ONE,
    ZERO,
    NotDivisible,
    Ordinal,
    OrdinalDepthError,
    PointKind,
    compare,
    omega_quotient,
    omega_times,
    parse_ordinal,
)
from .space import (
    Cantor,
    Discrete,
    FinitePoset,
    OrdinalInterval,
    PresentedSpace,
    SetDescriptor,
    Topology,
    UnrepresentableResult,
    cb_derivative,
    cb_iterate,
    cb_rank,
    finite_isolated_points,
    has_finite_horizon,
    is_scattered,
    omega_limit,
)
from .domain import (
    BOT,
    TOP,
    IdealSketch,
    Overring,
    SemilocalPrufer,
    SequenceDomain,
    ValuationVector,
    ideal_survives,
    sigma_Sigma,
)
from .family import (
    AlreadyJaffard,
    Classification,
    ConditionDisagreement,
    DerivedSequence,
    Family,
    FamilyReport,
    NotCompactPart,
    NotPreJaffard,
    OverlappingParts,
    StepBudgetExceeded,
    Verdict,
    check_family,
    degree_translation,
    derived_sequence,
    derived_step,
    extend_family,
    hausdorff_check,
    is_jaffard_overring,
    jaffard_part,
    merge_compact_subsets,
)
from .semistar import (
    EnumerationMismatch,
    HypothesisViolation,
    NotStablePreserving,
    OpLattice,
    StableOp,
    apply,
    enumerate_stable,
    extend_op,
    factorization_iso,
    is_stable_preserving,
    restrict_op,
    roundtrip_check,
    verify_axioms,
)

__all__ = [
    "OMEGA",
    "ONE",
    "ZERO",
    "BOT",
    "TOP",
    "NotDivisible",
    "Ordinal",
    "OrdinalDepthError",
    "PointKind",
    "compare",
    "omega_quotient",
    "omega_times",
    "parse_ordinal",
    "Cantor",
    "Discrete",
    "FinitePoset",
    "OrdinalInterval",
    "PresentedSpace",
    "SetDescriptor",
    "Topology",
    "UnrepresentableResult",
    "cb_derivative",
    "cb_iterate",
    "cb_rank",
    "finite_isolated_points",
    "has_finite_horizon",
    "is_scattered",
    "omega_limit",
    "IdealSketch",
    "Overring",
    "SemilocalPrufer",
    "SequenceDomain",
    "ValuationVector",
    "ideal_survives",
    "sigma_Sigma",
    "AlreadyJaffard",
    "Classification",
    "ConditionDisagreement",
    "DerivedSequence",
    "Family",
    "FamilyReport",
    "NotCompactPart",
    "NotPreJaffard",
    "OverlappingParts",
    "StepBudgetExceeded",
    "Verdict",
    "check_family",
    "degree_translation",
    "derived_sequence",
    "derived_step",
    "extend_family",
    "hausdorff_check",
    "is_jaffard_overring",
    "jaffard_part",
    "merge_compact_subsets",
    "EnumerationMismatch",
    "HypothesisViolation",
    "NotStablePreserving",
    "OpLattice",
    "StableOp",
    "apply",
    "enumerate_stable",
    "extend_op",
    "factorization_iso",
    "is_stable_preserving",
    "restrict_op",
    "roundtrip_check",
    "verify_axioms",
]

__version__ = "0.1.0"
