"""Quantitative unique continuation toolkit: Python bindings for the C++ core."""

from ._ucp import (
    CertificationError,
    ConstantGamma,
    ValidationError,
    alpha_step,
    beta_exponent,
    evaluate_window,
    fit_vanishing_order,
    fnv1a64,
    fundamental_solution,
    iterate_exponents,
    landis_certificate,
    manifest_hash,
    minimal_admissible_S,
    multiplier,
    n0_bound,
    quasi_circle,
    radii_schedule,
    run_cli,
    scenario,
    scenario_names,
    scenario_parameters,
    vanishing,
    verify_operator,
)

__all__ = [
    "CertificationError",
    "ConstantGamma",
    "ValidationError",
    "alpha_step",
    "beta_exponent",
    "evaluate_window",
    "fit_vanishing_order",
    "fnv1a64",
    "fundamental_solution",
    "iterate_exponents",
    "landis_certificate",
    "manifest_hash",
    "minimal_admissible_S",
    "multiplier",
    "n0_bound",
    "quasi_circle",
    "radii_schedule",
    "run_cli",
    "scenario",
    "scenario_names",
    "scenario_parameters",
    "vanishing",
    "verify_operator",
]
