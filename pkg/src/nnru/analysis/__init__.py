"""Experiments: norm law, failure rate, security counts, attacks, benchmarks."""
from ..params import predict_b_norm
from .attacks import MTAResult, multiple_transmission_attack
from .bench import BenchReport, benchmark_compare, strassen_mul_count
from .failure import FailureReport, FailureTrial, measure_failure_rate
from .lattice import (
    MembershipReport,
    MembershipTrial,
    membership_experiment,
    shift_module_solution,
    uniform_baseline,
)
from .norms import GammaReport, estimate_gamma
from .security import (
    BruteForceResult,
    SecurityReport,
    brute_force_attack,
    key_security,
    message_security,
    security_report,
    ternary_count,
)

__all__ = [
    "BenchReport",
    "BruteForceResult",
    "FailureReport",
    "FailureTrial",
    "GammaReport",
    "MTAResult",
    "MembershipReport",
    "MembershipTrial",
    "SecurityReport",
    "benchmark_compare",
    "brute_force_attack",
    "estimate_gamma",
    "key_security",
    "measure_failure_rate",
    "membership_experiment",
    "message_security",
    "multiple_transmission_attack",
    "predict_b_norm",
    "security_report",
    "shift_module_solution",
    "strassen_mul_count",
    "ternary_count",
    "uniform_baseline",
]
