"""Rainbow common independent sets in matroid intersections.

Given two matroids on one ground set and a family of common independent
n-sets, the solver grows a rainbow set of size n by colorful alternating
trails; the lab modules certify the bound and its tightness by brute force.
"""

from .matroids import (
    GraphicMatroid,
    LinearMatroid,
    MatroidOracle,
    MatroidSpecError,
    ParallelLiftMatroid,
    PartitionMatroid,
    PreconditionError,
    UniformMatroid,
    build_matroid,
)
from .solver import (
    Augment,
    NewReachable,
    RainbowAssignment,
    RainbowInstance,
    SolveResult,
    Stalled,
    SweepState,
    TheoremViolationError,
    Trail,
    TrailStep,
    TrailStructureError,
    apply_trail,
    close_round,
    greedy_seed,
    solve,
    sweep_round,
    validate_trail,
)
from .fileio import (
    InstanceFormatError,
    default_names,
    dumps_doc,
    instance_to_doc,
    parse_instance,
    parse_instance_doc,
    result_to_doc,
)
from .lab import (
    LatinArray,
    VerificationReport,
    brute_force_rainbow,
    check_lemma3,
    drisko_instance,
    encode_array,
    max_common_independent,
    random_instance,
    verify_instance,
)

__all__ = [
    "Augment",
    "GraphicMatroid",
    "InstanceFormatError",
    "LatinArray",
    "LinearMatroid",
    "MatroidOracle",
    "MatroidSpecError",
    "NewReachable",
    "ParallelLiftMatroid",
    "PartitionMatroid",
    "PreconditionError",
    "RainbowAssignment",
    "RainbowInstance",
    "SolveResult",
    "Stalled",
    "SweepState",
    "TheoremViolationError",
    "Trail",
    "TrailStep",
    "TrailStructureError",
    "UniformMatroid",
    "VerificationReport",
    "apply_trail",
    "brute_force_rainbow",
    "build_matroid",
    "check_lemma3",
    "close_round",
    "default_names",
    "drisko_instance",
    "dumps_doc",
    "encode_array",
    "greedy_seed",
    "instance_to_doc",
    "max_common_independent",
    "parse_instance",
    "parse_instance_doc",
    "random_instance",
    "result_to_doc",
    "solve",
    "sweep_round",
    "validate_trail",
    "verify_instance",
]
