"""Constructors for pure and mixed fermionic Gaussian states."""

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.linalg import expm

from majorana.operators import quadratic_hamiltonian
from qstate.states import MixedState, PureState
from utils.errors import ContractViolationError

logger = logging.getLogger(__name__)

_GENERATOR_TOL = 1e-12

GENERATOR_KINDS = ("unitary", "mixed")
PARITIES = ("even", "odd")


@dataclass(frozen=True, eq=False)
class GaussianParams:
    """
    Generator of a Gaussian state.

    Attributes:
        kind: ``unitary`` (h, applied to a reference state) or ``mixed`` (K, a Gibbs exponent)
        generator: Real antisymmetric 2n x 2n matrix
        parity_reference: ``even`` starts from |0^n>, ``odd`` from |10^(n-1)>
    """

    kind: str
    generator: np.ndarray
    parity_reference: str = "even"

    def __post_init__(self):
        if self.kind not in GENERATOR_KINDS:
            raise ContractViolationError(f"Generator kind must be one of {GENERATOR_KINDS}")
        if self.parity_reference not in PARITIES:
            raise ContractViolationError(f"Parity reference must be one of {PARITIES}")
        generator = np.array(self.generator, dtype=float, copy=True)
        if generator.ndim != 2 or generator.shape[0] != generator.shape[1] or generator.shape[0] % 2:
            raise ContractViolationError(f"Generator must be 2n x 2n, got {generator.shape}")
        if np.max(np.abs(generator + generator.T), initial=0.0) > _GENERATOR_TOL:
            raise ContractViolationError("Generator is not antisymmetric")
        generator.setflags(write=False)
        object.__setattr__(self, "generator", generator)

    @property
    def n_modes(self) -> int:
        return self.generator.shape[0] // 2


def random_generator(n: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    """Random real antisymmetric 2n x 2n matrix with N(0, scale^2) upper entries."""
    upper = np.triu(rng.normal(0.0, scale, size=(2 * n, 2 * n)), k=1)
    return upper - upper.T


def reference_state(n: int, parity: str = "even") -> PureState:
    """|0^n> for even parity, |10^(n-1)> for odd."""
    if parity not in PARITIES:
        raise ContractViolationError(f"Parity reference must be one of {PARITIES}")
    index = 0 if parity == "even" else 1 << (n - 1)
    return PureState.basis(index, n)


def free_unitary(h: np.ndarray, n: int) -> np.ndarray:
    """exp(-(i/2) sum_{a<b} h_ab B_ab), i.e. exp(-1/4 sum_ab h_ab gamma_a gamma_b)."""
    return expm(-0.5j * quadratic_hamiltonian(h, n))


def gaussian_pure(params: GaussianParams) -> PureState:
    """
    Pure Gaussian state from a unitary generator.

    Args:
        params: GaussianParams with kind ``unitary``

    Returns:
        Free-fermion unitary applied to the parity reference state
    """
    if params.kind != "unitary":
        raise ContractViolationError("gaussian_pure needs a unitary generator")
    n = params.n_modes
    reference = reference_state(n, params.parity_reference)
    if not np.any(params.generator):
        return reference
    vector = free_unitary(params.generator, n) @ reference.amplitudes
    return PureState(n, vector / np.linalg.norm(vector))


def gaussian_mixed(params: GaussianParams) -> MixedState:
    """
    Mixed Gaussian state proportional to exp(1/2 sum_{a<b} K_ab B_ab).

    The exponent is Hermitian, so the exponential is taken through its
    eigendecomposition with the largest eigenvalue shifted to zero.
    """
    if params.kind != "mixed":
        raise ContractViolationError("gaussian_mixed needs a mixed generator")
    n = params.n_modes
    exponent = 0.5 * quadratic_hamiltonian(params.generator, n)
    values, vectors = np.linalg.eigh(exponent)
    weights = np.exp(values - values.max())
    rho = (vectors * weights) @ vectors.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return MixedState(n, rho / np.trace(rho).real)


def thermal_product_state(nus: Sequence[float]) -> MixedState:
    """
    Product of single-mode Gaussian states with <Z_j> = nu_j.

    Its covariance is block diagonal with blocks [[0, nu_j], [-nu_j, 0]].
    """
    rho = np.array([[1.0 + 0j]])
    for nu in nus:
        if not -1.0 <= nu <= 1.0:
            raise ContractViolationError(f"Mode polarization {nu} outside [-1, 1]")
        rho = np.kron(rho, np.diag([(1 + nu) / 2, (1 - nu) / 2]).astype(np.complex128))
    return MixedState(len(nus), rho)
