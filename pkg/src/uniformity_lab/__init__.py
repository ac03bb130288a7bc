"""Desk-scale lab for Gowers uniformity norms, W-tricked prime weights,
multiple recurrence along shifted primes, and prime-indexed ergodic
averages on simulated measure-preserving systems."""

from .arith import (
    ArithTables,
    build_tables,
    lambda_prime,
    lambda_tilde,
    restrict_to_zn,
    vm_gap_check,
    w_of,
)
from .combinat import ApHit, IntSet, density_scan, find_3ap_shifted_prime
from .config import DEFAULT_CONFIG, RunConfig
from .dynamics import (
    CircleRotation,
    FiniteMPS,
    IntervalSet,
    TrigPoly,
    ergodic_gvn_check,
    l2_norm,
    transport,
    triple_intersection,
)
from .errors import (
    InternalCheckError,
    PreconditionError,
    ResourceError,
    UniformityLabError,
    UsageError,
)
from .experiments import (
    cauchy_profile,
    double_average_prime,
    gt_uniformity_table,
    log_ladder,
    nearest_prime,
    prime_shift_recurrence,
    prime_vs_weighted,
    totally_ergodic_compare,
    w_tricked_recurrence,
)
from .report import ExperimentReport
from .znz import GvnResult, NormResult, ZnSeq, expectation, gowers_norm, gvn_check

__version__ = "0.1.0"

__all__ = [
    "ApHit",
    "ArithTables",
    "CircleRotation",
    "DEFAULT_CONFIG",
    "ExperimentReport",
    "FiniteMPS",
    "GvnResult",
    "IntSet",
    "IntervalSet",
    "InternalCheckError",
    "NormResult",
    "PreconditionError",
    "ResourceError",
    "RunConfig",
    "TrigPoly",
    "UniformityLabError",
    "UsageError",
    "ZnSeq",
    "build_tables",
    "cauchy_profile",
    "density_scan",
    "double_average_prime",
    "ergodic_gvn_check",
    "expectation",
    "find_3ap_shifted_prime",
    "gowers_norm",
    "gt_uniformity_table",
    "gvn_check",
    "l2_norm",
    "lambda_prime",
    "lambda_tilde",
    "log_ladder",
    "nearest_prime",
    "prime_shift_recurrence",
    "prime_vs_weighted",
    "restrict_to_zn",
    "totally_ergodic_compare",
    "transport",
    "triple_intersection",
    "vm_gap_check",
    "w_of",
    "w_tricked_recurrence",
]
