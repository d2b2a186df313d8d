"""Explicit bounds for small prime nonresidues of Dirichlet characters.

The package has four layers:

  bounds      closed-form constants g(n, p), validity conditions, the
              frozen-constant table and its monotonicity
  characters  exact character arithmetic mod a prime: primitive roots,
              root-of-unity values, kernel tests, smallest prime
              nonresidues
  lemmas      exact brute-force oracles for every inequality the bound
              rests on, with directed-rounding certificates
  scan        deterministic, checkpointable verification of the frozen
              bound over prime ranges

See the demos/ directory for narrative walkthroughs and the `nonres` CLI
for machine-readable output.
"""

from .bounds import (
    BurgessParameters,
    ConstantsResult,
    burgess_params,
    compute_bound,
    compute_g,
    compute_g_highprec,
    compute_xstar,
    reference_validity,
    make_table,
    monotonicity_scan,
    totient_factor_f,
)
from .characters import (
    CharacterSpec,
    CharacterValue,
    char_value,
    find_primitive_root,
    is_kernel,
    mod_pow,
    prime_nonresidues,
)
from .lemmas import (
    FareyInterval,
    HypothesisError,
    NonresidueFactorization,
    SumStats,
    check_S_upper,
    check_convexity_bound,
    check_interval_disjointness,
    check_proposition_lower,
    check_shifted_sum_lower,
    check_stirling_ratio,
    check_totient_inequality,
    exact_sum_S,
    farey_interval,
    nonresidue_factorization,
    run_verification,
    sandwich_report,
)
from .scan import Aggregate, OrderPolicy, ScanRecord, ScanTask, run_scan, scan_records

__version__ = "0.1.0"

__all__ = [
    "Aggregate",
    "BurgessParameters",
    "CharacterSpec",
    "CharacterValue",
    "ConstantsResult",
    "FareyInterval",
    "HypothesisError",
    "NonresidueFactorization",
    "OrderPolicy",
    "ScanRecord",
    "ScanTask",
    "SumStats",
    "burgess_params",
    "char_value",
    "check_S_upper",
    "check_convexity_bound",
    "check_interval_disjointness",
    "check_proposition_lower",
    "check_shifted_sum_lower",
    "check_stirling_ratio",
    "check_totient_inequality",
    "compute_bound",
    "compute_g",
    "compute_g_highprec",
    "compute_xstar",
    "reference_validity",
    "exact_sum_S",
    "farey_interval",
    "find_primitive_root",
    "is_kernel",
    "make_table",
    "mod_pow",
    "monotonicity_scan",
    "nonresidue_factorization",
    "prime_nonresidues",
    "run_scan",
    "run_verification",
    "sandwich_report",
    "scan_records",
    "totient_factor_f",
]
