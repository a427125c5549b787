"""Closed-form reference values for FAF_1, purity and the witness."""

import math
from typing import Dict

import numpy as np

from utils.errors import ContractViolationError


def cat_faf1(n: int, eps2: float) -> float:
    """FAF_1 of sqrt(1 - eps^2)|0^n> + eps|1^n> for even n >= 4."""
    return 4 * n * eps2 * (1 - eps2)


DEFECT_FAF1 = 4.0


def depol_predictions(r_psi: float, p: float, n: int) -> Dict[str, float]:
    """
    Predictions for (1 - p)|psi><psi| + p I / 2^n.

    The covariance scales by (1 - p), so every quadratic quantity picks up
    x = (1 - p)^2.

    Args:
        r_psi: Sum of squared singular values of the pure state's covariance
        p: Depolarizing strength in [0, 1]
        n: Number of modes

    Returns:
        Dict with faf1, purity, witness and witness_lower
    """
    if not 0.0 <= p <= 1.0:
        raise ContractViolationError(f"p must lie in [0, 1], got {p}")
    x = (1 - p) ** 2
    growth = 1 + (2 ** n - 1) * x
    return {
        "faf1": n - x * r_psi,
        "purity": growth / 2 ** n,
        "witness": n * growth ** (1.0 / n) - n - x * r_psi,
        "witness_lower": x * (n - r_psi),
    }


def haar_faf_mean(n: int) -> float:
    """Haar average of FAF_1: n - n(2n - 1)/(2^n + 1)."""
    return n - n * (2 * n - 1) / (2 ** n + 1)


def subset_phase_faf_lower(n: int, q: int) -> float:
    """Lower bound n - n(2n - 1)/2^q on the mean FAF_1 of random subset-phase states."""
    if q > n:
        raise ContractViolationError(f"q={q} exceeds n={n}")
    return n - n * (2 * n - 1) / 2 ** q


def nongaussian_gate_lower_bound(faf1_target: float, m: int) -> int:
    """Minimum count of m-mode gates reaching ``faf1_target`` from a Gaussian state."""
    if m < 1:
        raise ContractViolationError("m must be at least 1")
    if faf1_target <= 0:
        return 0
    return math.ceil(faf1_target / (4 * m) - 1e-12)


def theta_sweep_prediction(theta: float, p: float = 0.0) -> Dict[str, float]:
    """
    Closed form for the four-qubit theta-sweep fixture under local
    depolarizing noise p after every two-qubit gate (t = 1 - p).
    """
    t = 1 - p
    c2, s2 = math.cos(theta) ** 2, math.sin(theta) ** 2
    faf1 = 4 - 4 * t ** 6 * c2
    purity = (
        1
        + 2 * t ** 6
        + 4 * t ** 4 * (t ** 2 * c2 + t ** 4 * s2)
        + t ** 12
        + 4 * t ** 8 * (t ** 4 * c2 + t ** 2 * s2)
        + 4 * t ** 12
    ) / 16
    return {
        "faf1": faf1,
        "purity": purity,
        "witness": faf1 - 8 * (1 - purity ** 0.25),
    }


def r_from_faf1(faf1: float, n: int) -> float:
    return float(np.clip(n - faf1, 0.0, n))
