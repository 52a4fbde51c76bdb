"""Counting and density of complex algebraic numbers."""

from ._algdist import (  # noqa: F401
    CountResult,
    DensityEstimate,
    RandomPolySummary,
    count,
    estimate_EN,
    integrate_psi,
    is_prime_polynomial,
    lambda_star,
    mobius,
    predicted_count,
    psi,
    psi_n2,
    repulsion_constant,
    roots,
    zeta,
)

__version__ = "0.3.0"
