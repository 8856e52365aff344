"""Exact and approximate optimal error probabilities for asymmetric binary
hypothesis testing between finite-alphabet distributions."""

from .bounds import (
    BoundQuery,
    BoundReport,
    Invalid,
    achievability_constant,
    approximations,
    be2_bound,
    converse_constant,
    one_shot_converse_rhs,
    stein_achievability,
    stein_converse,
)
from .dist import (
    FiniteDistribution,
    LLRMoments,
    TiltedFamily,
    chernoff_information,
    hellinger_sq,
    kl_divergence,
    llr_moments,
    tilt,
    z_alpha,
    z_alpha_derivatives,
)
from .errors import DegenerateFamily, DeltaOutOfRange, DomainError, SupportMismatch, TooLarge
from .exponent import (
    ExponentSolution,
    ExtremalMoments,
    exponent_derivatives,
    extremal_moments,
    g_alpha,
    solve_alpha_star,
)
from .gaussian import phi_cdf, phi_inv, phi_pdf
from .oracle import E1_star, LLRAtomTable, OracleResult, build_atom_table, e1_star, lp_cross_check

__version__ = "0.1.0"

__all__ = [
    "BoundQuery",
    "BoundReport",
    "Invalid",
    "achievability_constant",
    "approximations",
    "be2_bound",
    "converse_constant",
    "one_shot_converse_rhs",
    "stein_achievability",
    "stein_converse",
    "FiniteDistribution",
    "LLRMoments",
    "TiltedFamily",
    "chernoff_information",
    "hellinger_sq",
    "kl_divergence",
    "llr_moments",
    "tilt",
    "z_alpha",
    "z_alpha_derivatives",
    "DegenerateFamily",
    "DeltaOutOfRange",
    "DomainError",
    "SupportMismatch",
    "TooLarge",
    "ExponentSolution",
    "ExtremalMoments",
    "exponent_derivatives",
    "extremal_moments",
    "g_alpha",
    "solve_alpha_star",
    "phi_cdf",
    "phi_inv",
    "phi_pdf",
    "E1_star",
    "LLRAtomTable",
    "OracleResult",
    "build_atom_table",
    "e1_star",
    "lp_cross_check",
]
