"""Single-qubit Kraus channels."""

import logging
from dataclasses import dataclass
from typing import List, Sequence

import numpy as np

from qstate.paulis import SINGLE_QUBIT
from qstate.states import MixedState, State, apply_on_axes, check_targets, as_mixed
from utils.errors import ContractViolationError

logger = logging.getLogger(__name__)

CHANNEL_KINDS = ("depolarizing", "amplitude_damping", "dephasing", "bit_flip")


@dataclass(frozen=True)
class NoiseChannel:
    """
    A single-qubit noise channel.

    Conventions for ``strength``:
        depolarizing: rho -> (1 - p) rho + p I/2
        dephasing: off-diagonal elements scaled by (1 - p)
        bit_flip: X applied with probability p
        amplitude_damping: |1> decays to |0> with probability gamma
    """

    kind: str
    strength: float

    def __post_init__(self):
        if self.kind not in CHANNEL_KINDS:
            raise ContractViolationError(
                f"Unknown channel kind '{self.kind}', expected one of {', '.join(CHANNEL_KINDS)}"
            )
        if not 0.0 <= self.strength <= 1.0:
            raise ContractViolationError(f"Channel strength must lie in [0, 1], got {self.strength}")

    @property
    def kraus(self) -> List[np.ndarray]:
        p = self.strength
        if self.kind == "depolarizing":
            return [
                np.sqrt(1 - 3 * p / 4) * SINGLE_QUBIT["I"],
                np.sqrt(p / 4) * SINGLE_QUBIT["X"],
                np.sqrt(p / 4) * SINGLE_QUBIT["Y"],
                np.sqrt(p / 4) * SINGLE_QUBIT["Z"],
            ]
        if self.kind == "dephasing":
            return [np.sqrt(1 - p / 2) * SINGLE_QUBIT["I"], np.sqrt(p / 2) * SINGLE_QUBIT["Z"]]
        if self.kind == "bit_flip":
            return [np.sqrt(1 - p) * SINGLE_QUBIT["I"], np.sqrt(p) * SINGLE_QUBIT["X"]]
        return [
            np.array([[1, 0], [0, np.sqrt(1 - p)]], dtype=np.complex128),
            np.array([[0, np.sqrt(p)], [0, 0]], dtype=np.complex128),
        ]

    def completeness_error(self) -> float:
        """max |sum_k K_k^dagger K_k - I|."""
        total = sum(K.conj().T @ K for K in self.kraus)
        return float(np.max(np.abs(total - np.eye(2))))

    def apply_to_matrix(self, rho: np.ndarray) -> np.ndarray:
        """Apply the channel to a 2x2 density matrix."""
        rho = np.asarray(rho, dtype=np.complex128)
        return sum(K @ rho @ K.conj().T for K in self.kraus)

    def compose(self, other: "NoiseChannel") -> "NoiseChannel":
        """
        Channel equal to applying ``self`` then ``other``.

        Only same-kind channels compose into a channel of that kind; the
        contraction factor of each family multiplies.
        """
        if other.kind != self.kind:
            raise ContractViolationError(f"Cannot compose {self.kind} with {other.kind}")
        if self.kind == "bit_flip":
            factor = (1 - 2 * self.strength) * (1 - 2 * other.strength)
            return NoiseChannel(self.kind, (1 - factor) / 2)
        factor = (1 - self.strength) * (1 - other.strength)
        return NoiseChannel(self.kind, 1 - factor)


def apply_channel(state: State, ch: NoiseChannel, qubit: int) -> MixedState:
    """
    Apply ``ch`` to one qubit: rho -> sum_k K_k rho K_k^dagger.

    Pure inputs are promoted to density matrices.
    """
    rho = as_mixed(state)
    n = rho.n_qubits
    (qubit,) = check_targets([qubit], n)

    tensor = rho.matrix.reshape((2,) * (2 * n))
    out = np.zeros_like(tensor)
    for K in ch.kraus:
        term = apply_on_axes(tensor, K, [qubit])
        out = out + apply_on_axes(term, K.conj(), [n + qubit])
    return MixedState(n, out.reshape(1 << n, 1 << n))


def apply_channel_to_qubits(state: State, ch: NoiseChannel, qubits: Sequence[int]) -> MixedState:
    """Apply ``ch`` independently to each listed qubit."""
    rho = as_mixed(state)
    for q in qubits:
        rho = apply_channel(rho, ch, q)
    return rho


def global_depolarize_matrix(rho: np.ndarray, p: float) -> np.ndarray:
    """(1 - p) rho + p I / d."""
    dim = rho.shape[0]
    return (1 - p) * rho + p * np.eye(dim, dtype=np.complex128) / dim
