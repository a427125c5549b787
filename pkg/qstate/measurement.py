"""Projective Pauli measurement and computational-basis sampling."""

import logging
from typing import Optional, Tuple

import numpy as np

from qstate.paulis import PauliString, apply_pauli_rows, apply_pauli_vector
from qstate.states import MixedState, PureState, State, expectation
from utils.errors import ContractViolationError, InternalSimulationError

logger = logging.getLogger(__name__)

_BRANCH_FLOOR = 1e-14


def project(state: State, p: PauliString, outcome: int) -> Tuple[float, Optional[State]]:
    """
    Project onto the ``outcome`` eigenspace of a Hermitian Pauli string.

    Args:
        state: Pure or mixed state
        p: Hermitian Pauli string
        outcome: +1 or -1

    Returns:
        Tuple of (branch probability, renormalized post-measurement state). The
        state is ``None`` when the branch probability is below the floor.
    """
    if outcome not in (1, -1):
        raise ContractViolationError(f"Outcome must be +1 or -1, got {outcome}")
    probability = min(max((1.0 + outcome * expectation(state, p)) / 2.0, 0.0), 1.0)
    if probability < _BRANCH_FLOOR:
        return probability, None

    if isinstance(state, PureState):
        vector = (state.amplitudes + outcome * apply_pauli_vector(p, state.amplitudes)) / 2.0
        norm = np.linalg.norm(vector)
        if norm ** 2 < _BRANCH_FLOOR:
            raise InternalSimulationError(f"Projected norm {norm:.3e} vanished for {p}")
        return probability, PureState(state.n_qubits, vector / norm)

    rho = state.matrix
    p_rho = apply_pauli_rows(p, rho)
    p_rho_p = apply_pauli_rows(p, p_rho.conj().T).conj().T
    projected = (rho + outcome * (p_rho + p_rho.conj().T) + p_rho_p) / 4.0
    trace = float(np.trace(projected).real)
    if trace < _BRANCH_FLOOR:
        raise InternalSimulationError(f"Projected trace {trace:.3e} vanished for {p}")
    return probability, MixedState(state.n_qubits, projected / trace)


def measure_pauli(state: State, p: PauliString, rng: np.random.Generator) -> Tuple[int, State]:
    """
    Projectively measure a Hermitian Pauli string.

    Args:
        state: Pure or mixed state
        p: Hermitian Pauli string with phase +1 or -1
        rng: Random generator

    Returns:
        Tuple of (outcome in {+1, -1}, collapsed state)
    """
    prob_plus = min(max((1.0 + expectation(state, p)) / 2.0, 0.0), 1.0)
    outcome = 1 if rng.random() < prob_plus else -1
    probability, collapsed = project(state, p, outcome)
    if collapsed is None:
        raise InternalSimulationError(
            f"Sampled outcome {outcome} of {p} has probability {probability:.3e}"
        )
    return outcome, collapsed


def bits_of(index: int, n_qubits: int) -> str:
    """Bit string of a basis index with qubit 0 first."""
    return format(int(index), f"0{n_qubits}b")


def sample_computational_batch(state: State, shots: int, rng: np.random.Generator) -> np.ndarray:
    """
    Draw basis indices with probability |<x|psi>|^2 (or <x|rho|x>).

    Returns:
        Integer array of length ``shots``
    """
    probs = state.probabilities()
    probs = probs / probs.sum()
    return rng.choice(probs.shape[0], size=shots, p=probs)


def sample_computational(state: State, rng: np.random.Generator) -> str:
    """Sample one computational-basis readout as a bit string."""
    index = sample_computational_batch(state, 1, rng)[0]
    return bits_of(index, state.n_qubits)
