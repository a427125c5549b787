"""Dense pure and mixed quantum states.

States are frozen dataclasses holding read-only numpy arrays. Every
operation returns a new state; nothing mutates its input.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.stats import unitary_group

from config import get_config
from qstate.paulis import (
    PauliString,
    apply_pauli_rows,
    apply_pauli_vector,
    check_dense_size,
    pauli_expectation_matrix,
    pauli_expectation_vector,
)
from utils.errors import ContractViolationError

logger = logging.getLogger(__name__)


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=np.complex128, copy=True)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class PureState:
    """A normalized state vector; basis index bit ``n-1-q`` is qubit ``q``."""

    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ContractViolationError("n_qubits must be positive")
        check_dense_size(self.n_qubits)
        amplitudes = _frozen(np.ravel(self.amplitudes))
        if amplitudes.shape[0] != 1 << self.n_qubits:
            raise ContractViolationError(
                f"Expected {1 << self.n_qubits} amplitudes, got {amplitudes.shape[0]}"
            )
        norm = float(np.vdot(amplitudes, amplitudes).real)
        if abs(norm - 1.0) > get_config().simulation.unitary_tol:
            raise ContractViolationError(f"State is not normalized (squared norm {norm:.3e})")
        object.__setattr__(self, "amplitudes", amplitudes)

    @classmethod
    def normalized(cls, amplitudes: Sequence[complex]) -> "PureState":
        """Build a state from an unnormalized amplitude vector."""
        vector = np.asarray(amplitudes, dtype=np.complex128)
        norm = np.linalg.norm(vector)
        if norm == 0:
            raise ContractViolationError("Cannot normalize the zero vector")
        n = int(round(np.log2(vector.shape[0])))
        return cls(n, vector / norm)

    @classmethod
    def basis(cls, bits: Union[str, int], n_qubits: Optional[int] = None) -> "PureState":
        """Computational basis state from a bit string (qubit 0 first) or an index."""
        if isinstance(bits, str):
            n_qubits = len(bits)
            index = int(bits, 2)
        else:
            if n_qubits is None:
                raise ContractViolationError("n_qubits is required for an integer basis index")
            index = int(bits)
        if not 0 <= index < (1 << n_qubits):
            raise ContractViolationError(f"Basis index {index} out of range for {n_qubits} qubits")
        vector = np.zeros(1 << n_qubits, dtype=np.complex128)
        vector[index] = 1.0
        return cls(n_qubits, vector)

    @property
    def dim(self) -> int:
        return 1 << self.n_qubits

    def density_matrix(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


@dataclass(frozen=True, eq=False)
class MixedState:
    """A density matrix with unit trace, Hermitian within tolerance."""

    n_qubits: int
    matrix: np.ndarray

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ContractViolationError("n_qubits must be positive")
        check_dense_size(self.n_qubits, mixed=True)
        matrix = _frozen(self.matrix)
        dim = 1 << self.n_qubits
        if matrix.shape != (dim, dim):
            raise ContractViolationError(f"Expected a {dim}x{dim} matrix, got {matrix.shape}")
        tol = get_config().simulation.hermitian_tol
        if np.max(np.abs(matrix - matrix.conj().T)) > tol:
            raise ContractViolationError("Density matrix is not Hermitian")
        trace = complex(np.trace(matrix))
        if abs(trace - 1.0) > tol:
            raise ContractViolationError(f"Density matrix trace is {trace.real:.12g}, not 1")
        object.__setattr__(self, "matrix", matrix)

    @classmethod
    def from_matrix(cls, matrix: np.ndarray) -> "MixedState":
        """Build and fully validate (including positivity) a density matrix."""
        matrix = np.asarray(matrix, dtype=np.complex128)
        n = int(round(np.log2(matrix.shape[0])))
        state = cls(n, matrix)
        state.validate()
        return state

    @classmethod
    def from_pure(cls, psi: PureState) -> "MixedState":
        return cls(psi.n_qubits, psi.density_matrix())

    @classmethod
    def maximally_mixed(cls, n_qubits: int) -> "MixedState":
        dim = 1 << n_qubits
        return cls(n_qubits, np.eye(dim, dtype=np.complex128) / dim)

    @property
    def dim(self) -> int:
        return 1 << self.n_qubits

    def density_matrix(self) -> np.ndarray:
        return np.array(self.matrix)

    def probabilities(self) -> np.ndarray:
        return np.clip(np.real(np.diag(self.matrix)), 0.0, None)

    def validate(self) -> None:
        """Check positivity and the purity window; raise on violation."""
        tol = get_config().simulation.psd_tol
        smallest = float(np.min(np.linalg.eigvalsh(self.matrix)))
        if smallest < -tol:
            raise ContractViolationError(f"Density matrix has eigenvalue {smallest:.3e} < 0")
        value = purity(self)
        if not (1.0 / self.dim - tol <= value <= 1.0 + tol):
            raise ContractViolationError(f"Purity {value:.12g} outside [2^-n, 1]")


State = Union[PureState, MixedState]


def as_mixed(state: State) -> MixedState:
    """Return ``state`` as a density matrix."""
    if isinstance(state, MixedState):
        return state
    return MixedState.from_pure(state)


def _check_pauli(state: State, p: PauliString) -> None:
    if p.n_qubits != state.n_qubits:
        raise ContractViolationError(
            f"Pauli string acts on {p.n_qubits} qubits, state has {state.n_qubits}"
        )


def expectation(state: State, p: PauliString) -> float:
    """
    Expectation value of a Hermitian Pauli string.

    Args:
        state: Pure or mixed state
        p: Hermitian Pauli string on the same number of qubits

    Returns:
        Real value in [-1, 1]
    """
    _check_pauli(state, p)
    if not p.is_hermitian:
        raise ContractViolationError(f"Pauli string {p} is not Hermitian")
    if isinstance(state, PureState):
        value = pauli_expectation_vector(p, state.amplitudes)
    else:
        value = pauli_expectation_matrix(p, state.matrix)
    return float(value.real)


def apply_pauli(state: State, p: PauliString) -> State:
    """Conjugate by a Pauli string: ``P|psi>`` or ``P rho P^dagger``."""
    _check_pauli(state, p)
    if isinstance(state, PureState):
        return PureState(state.n_qubits, apply_pauli_vector(p, state.amplitudes))
    left = apply_pauli_rows(p, state.matrix)
    both = apply_pauli_rows(p, left.conj().T).conj().T
    return MixedState(state.n_qubits, both)


def apply_on_axes(tensor: np.ndarray, gate: np.ndarray, axes: Sequence[int]) -> np.ndarray:
    k = len(axes)
    block = gate.reshape((2,) * (2 * k))
    out = np.tensordot(block, tensor, axes=(list(range(k, 2 * k)), list(axes)))
    return np.moveaxis(out, list(range(k)), list(axes))


def check_unitary(U: np.ndarray, n_targets: int) -> np.ndarray:
    """Validate a dense gate on ``n_targets`` qubits and return it as a complex array."""
    U = np.asarray(U, dtype=np.complex128)
    dim = 1 << n_targets
    if U.shape != (dim, dim):
        raise ContractViolationError(f"Gate shape {U.shape} does not match {n_targets} targets")
    deviation = np.max(np.abs(U.conj().T @ U - np.eye(dim)))
    if deviation > get_config().simulation.unitary_tol:
        raise ContractViolationError(f"Gate is not unitary (deviation {deviation:.3e})")
    return U


def check_targets(targets: Sequence[int], n_qubits: int) -> List[int]:
    targets = [int(t) for t in targets]
    if len(set(targets)) != len(targets):
        raise ContractViolationError(f"Repeated target qubits: {targets}")
    for t in targets:
        if not 0 <= t < n_qubits:
            raise ContractViolationError(f"Target qubit {t} out of range for {n_qubits} qubits")
    return targets


def apply_unitary(state: State, U: np.ndarray, targets: Sequence[int]) -> State:
    """
    Apply a unitary acting on the listed target qubits.

    The first target is the most significant qubit of ``U``'s block.

    Args:
        state: Input state
        U: 2^k x 2^k unitary
        targets: k distinct qubit indices

    Returns:
        Transformed state of the same kind
    """
    targets = check_targets(targets, state.n_qubits)
    U = check_unitary(U, len(targets))
    n = state.n_qubits

    if isinstance(state, PureState):
        tensor = state.amplitudes.reshape((2,) * n)
        out = apply_on_axes(tensor, U, targets)
        return PureState(n, out.reshape(-1))

    tensor = state.matrix.reshape((2,) * (2 * n))
    tensor = apply_on_axes(tensor, U, targets)
    tensor = apply_on_axes(tensor, U.conj(), [n + t for t in targets])
    return MixedState(n, tensor.reshape(1 << n, 1 << n))


def apply_full_unitary(state: State, U: np.ndarray) -> State:
    """Apply a unitary on the full register."""
    return apply_unitary(state, U, range(state.n_qubits))


def purity(state: State) -> float:
    """tr(rho^2); exactly 1 for a PureState."""
    if isinstance(state, PureState):
        return 1.0
    return float(np.sum(np.abs(state.matrix) ** 2))


def tensor(a: State, b: State) -> State:
    """Tensor product with ``a`` on the leading qubits."""
    n = a.n_qubits + b.n_qubits
    if isinstance(a, PureState) and isinstance(b, PureState):
        return PureState(n, np.kron(a.amplitudes, b.amplitudes))
    check_dense_size(n, mixed=True)
    return MixedState(n, np.kron(as_mixed(a).matrix, as_mixed(b).matrix))


def spectral_weights(state: State) -> Tuple[np.ndarray, np.ndarray]:
    """
    Eigen-weights and eigenvectors used for sampling.

    Eigenvalues below the clamp threshold are set to zero and the rest
    renormalized. Zero-weight components are dropped.

    Returns:
        (weights, vectors) with ``vectors[:, i]`` the i-th eigenvector
    """
    if isinstance(state, PureState):
        return np.ones(1), state.amplitudes.reshape(-1, 1)

    values, vectors = np.linalg.eigh(state.matrix)
    clamp = get_config().simulation.eig_clamp
    clipped = np.where(values < clamp, 0.0, values)
    if np.any(values < -clamp):
        logger.debug(f"Clamped negative eigenvalues down to {values.min():.3e}")
    keep = clipped > 0
    weights = clipped[keep]
    weights = weights / weights.sum()
    order = np.argsort(weights)[::-1]
    return weights[order], vectors[:, keep][:, order]


def eig_decompose(state: State) -> List[Tuple[float, PureState]]:
    """Spectral decomposition as ``(probability, eigenvector)`` pairs."""
    weights, vectors = spectral_weights(state)
    return [
        (float(w), PureState(state.n_qubits, vectors[:, i] / np.linalg.norm(vectors[:, i])))
        for i, w in enumerate(weights)
    ]


def reduced_density_matrix(state: State, keep: Sequence[int]) -> MixedState:
    """Partial trace onto the ``keep`` qubits, in the order listed."""
    n = state.n_qubits
    keep = check_targets(keep, n)
    rest = [q for q in range(n) if q not in keep]
    dk, dr = 1 << len(keep), 1 << len(rest)

    if isinstance(state, PureState):
        psi = np.transpose(state.amplitudes.reshape((2,) * n), keep + rest).reshape(dk, dr)
        return MixedState(len(keep), psi @ psi.conj().T)

    rho = state.matrix.reshape((2,) * (2 * n))
    perm = keep + rest + [n + q for q in keep] + [n + q for q in rest]
    rho = np.transpose(rho, perm).reshape(dk, dr, dk, dr)
    return MixedState(len(keep), np.einsum("ajbj->ab", rho))


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary of the given dimension."""
    return unitary_group.rvs(dim, random_state=rng)


def haar_state(n_qubits: int, rng: np.random.Generator) -> PureState:
    """Normalized complex-Gaussian amplitude vector."""
    dim = 1 << n_qubits
    vector = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return PureState.normalized(vector)
