"""Verification and metrization workbench for b-metric, F-metric and
theta-metric spaces.

The heavy lifting lives in the compiled extension; this package re-exports
its operations. Results come back as plain dicts with the same shapes the
command-line tool prints as JSON.
"""

from ._core import (
    DistanceSpace,
    EvalError,
    FormulaParseError,
    InputError,
    SearchError,
    __version__,
    chain_metric,
    check_b,
    check_b_action,
    check_distance_axioms,
    check_f1_monotone,
    check_f2_limit,
    check_f_metric,
    check_iiiB,
    check_theta_metric,
    delta_theta_at_origin,
    exact_metric_check,
    f_upper_bound,
    locally_regular_phi,
    min_b_constant,
    min_chain_sums,
    phi_from_f,
    r_for_b,
    r_from_f,
    run_job,
    snowflake_exponent,
    space_from_matrix,
    space_from_points,
    uniform_phi,
    verify_iiiC,
)

__all__ = [
    "DistanceSpace",
    "EvalError",
    "FormulaParseError",
    "InputError",
    "SearchError",
    "__version__",
    "chain_metric",
    "check_b",
    "check_b_action",
    "check_distance_axioms",
    "check_f1_monotone",
    "check_f2_limit",
    "check_f_metric",
    "check_iiiB",
    "check_theta_metric",
    "delta_theta_at_origin",
    "exact_metric_check",
    "f_upper_bound",
    "locally_regular_phi",
    "min_b_constant",
    "min_chain_sums",
    "phi_from_f",
    "r_for_b",
    "r_from_f",
    "run_job",
    "snowflake_exponent",
    "space_from_matrix",
    "space_from_points",
    "uniform_phi",
    "verify_iiiC",
]
