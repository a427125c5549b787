"""Majorana covariance matrices and the measures built on them."""

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence, Tuple, Union

import numpy as np

from config import get_config
from majorana.operators import bilinear, majorana_pairs
from qstate.states import PureState, State, expectation, purity
from utils.errors import ContractViolationError

logger = logging.getLogger(__name__)

_ANTISYMMETRY_TOL = 1e-9
_SV_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class CovarianceMatrix:
    """
    Real antisymmetric 2n x 2n matrix Gamma_ab = <B_ab>.

    ``sv`` holds the n singular values nu_1 >= ... >= nu_n; each appears
    twice in the full singular spectrum of ``gamma``.
    """

    n_modes: int
    gamma: np.ndarray

    def __post_init__(self):
        gamma = np.array(self.gamma, dtype=float, copy=True)
        if gamma.shape != (2 * self.n_modes, 2 * self.n_modes):
            raise ContractViolationError(
                f"Covariance matrix must be {2 * self.n_modes}x{2 * self.n_modes}, got {gamma.shape}"
            )
        if np.max(np.abs(gamma + gamma.T), initial=0.0) > _ANTISYMMETRY_TOL:
            raise ContractViolationError("Covariance matrix is not antisymmetric")
        gamma.setflags(write=False)
        object.__setattr__(self, "gamma", gamma)
        if self.sv.size and self.sv[0] > 1.0 + _SV_TOL:
            raise ContractViolationError(f"Singular value {self.sv[0]:.12g} exceeds 1")

    @cached_property
    def squared_spectrum(self) -> np.ndarray:
        """Eigenvalues of -Gamma^2 (all 2n of them), descending, clamped at 0."""
        values = np.linalg.eigvalsh(-self.gamma @ self.gamma)
        if values.size and values.min() < -get_config().simulation.psd_tol:
            raise ContractViolationError(f"-Gamma^2 has eigenvalue {values.min():.3e} < 0")
        return np.sort(np.clip(values, 0.0, None))[::-1]

    @cached_property
    def sv(self) -> np.ndarray:
        return np.sqrt(self.squared_spectrum[::2])

    def is_pure_gaussian(self, tol: float = 1e-8) -> bool:
        """Gamma^2 = -I within ``tol``."""
        square = self.gamma @ self.gamma
        return bool(np.max(np.abs(square + np.eye(2 * self.n_modes))) <= tol)


def covariance(state: State) -> CovarianceMatrix:
    """
    Covariance matrix of a state, filled from the upper triangle.

    Args:
        state: Pure or mixed state on n qubits

    Returns:
        CovarianceMatrix with Gamma_ab = <B_ab> for a < b
    """
    n = state.n_qubits
    gamma = np.zeros((2 * n, 2 * n))
    for a, b in majorana_pairs(n):
        value = expectation(state, bilinear(a, b, n))
        gamma[a - 1, b - 1] = value
        gamma[b - 1, a - 1] = -value
    return CovarianceMatrix(n, gamma)


def _as_covariance(source: Union[State, CovarianceMatrix]) -> CovarianceMatrix:
    return source if isinstance(source, CovarianceMatrix) else covariance(source)


def faf_k(source: Union[State, CovarianceMatrix], k: int = 1) -> float:
    """
    Order-k fermionic antiflatness, n - sum_j nu_j^(2k).

    Args:
        source: State or its covariance matrix
        k: Order, k >= 1

    Returns:
        Value in [0, n]
    """
    if int(k) < 1:
        raise ContractViolationError(f"FAF order must be >= 1, got {k}")
    cov = _as_covariance(source)
    return float(cov.n_modes - 0.5 * np.sum(cov.squared_spectrum ** int(k)))


def faf1_termwise(state: State) -> float:
    """n - sum_{a<b} <B_ab>^2, evaluated bilinear by bilinear."""
    n = state.n_qubits
    total = sum(expectation(state, bilinear(a, b, n)) ** 2 for a, b in majorana_pairs(n))
    return float(n - total)


def witness_from_values(faf1: float, purity_value: float, n: int) -> float:
    """W = FAF_1 - 2n (1 - P^(1/n))."""
    return float(faf1 - 2 * n * (1.0 - purity_value ** (1.0 / n)))


def witness(state: State) -> float:
    """
    Purity-corrected non-Gaussianity witness.

    Positive values certify that the state is not a (mixed) Gaussian state.
    A PureState enters with purity exactly 1.
    """
    value = 1.0 if isinstance(state, PureState) else purity(state)
    return witness_from_values(faf_k(state, 1), value, state.n_qubits)


def distance_bounds(faf1: float, n: int) -> Tuple[float, float]:
    """
    Bounds on the squared distance to the nearest pure Gaussian state.

    Returns:
        (faf1 / 4n, faf1 / 2), each clamped to [0, 1]
    """
    if n < 1:
        raise ContractViolationError("n must be positive")
    lower = min(max(faf1 / (4 * n), 0.0), 1.0)
    upper = min(max(faf1 / 2, 0.0), 1.0)
    return lower, upper


def gaussian_purity(source: Union[State, CovarianceMatrix]) -> float:
    """prod_j (1 + nu_j^2) / 2, the purity of the Gaussian state with this covariance."""
    cov = _as_covariance(source)
    return float(np.prod((1.0 + cov.sv ** 2) / 2.0))


def covariance_weight(gamma: Union[np.ndarray, CovarianceMatrix], modes: Sequence[int]) -> float:
    """
    S_A = 1/2 |Gamma_AA|_F^2 + |Gamma_AB|_F^2 over the Majoranas of ``modes``.

    ``modes`` are 0-based qubit indices; B is the complement. Since
    FAF_1 = n - S_A - 1/2 |Gamma_BB|_F^2 and S_A <= 2m for m modes, a
    parity-preserving gate on A moves FAF_1 by at most 2m.
    """
    if isinstance(gamma, CovarianceMatrix):
        gamma = gamma.gamma
    gamma = np.asarray(gamma, dtype=float)
    size = gamma.shape[0]
    inside = sorted({m for q in modes for m in (2 * q, 2 * q + 1)})
    for m in inside:
        if m >= size:
            raise ContractViolationError(f"Mode {m // 2} out of range")
    outside = [m for m in range(size) if m not in inside]
    block_aa = gamma[np.ix_(inside, inside)]
    block_ab = gamma[np.ix_(inside, outside)]
    return float(0.5 * np.sum(block_aa ** 2) + np.sum(block_ab ** 2))
