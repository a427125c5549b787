"""Majorana operators, covariance matrices and Gaussian states."""

from .operators import bilinear, jw_majorana, majorana_pairs
from .covariance import (
    CovarianceMatrix,
    covariance,
    covariance_weight,
    distance_bounds,
    faf1_termwise,
    faf_k,
    gaussian_purity,
    witness,
)
from .gaussian import GaussianParams, gaussian_mixed, gaussian_pure, random_generator, thermal_product_state
from .distance import eps_g_bruteforce

__all__ = [
    "bilinear",
    "jw_majorana",
    "majorana_pairs",
    "CovarianceMatrix",
    "covariance",
    "covariance_weight",
    "distance_bounds",
    "faf1_termwise",
    "faf_k",
    "gaussian_purity",
    "witness",
    "GaussianParams",
    "gaussian_mixed",
    "gaussian_pure",
    "random_generator",
    "thermal_product_state",
    "eps_g_bruteforce",
]
