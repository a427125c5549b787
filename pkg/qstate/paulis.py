"""Signed Pauli strings and their action on dense states.

Qubit 0 is the most significant bit of a basis index everywhere in the
package: qubit ``q`` of an ``n``-qubit register is bit ``n - 1 - q``.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Tuple

import numpy as np

from config import get_config
from utils.errors import ContractViolationError, SizeLimitError

PHASES: Tuple[complex, ...] = (1, 1j, -1, -1j)  # i^0 .. i^3

SINGLE_QUBIT: Dict[str, np.ndarray] = {
    "I": np.array([[1, 0], [0, 1]], dtype=np.complex128),
    "X": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "Z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}

# (left, right) -> (power of i, product letter)
_PRODUCT: Dict[Tuple[str, str], Tuple[int, str]] = {
    ("X", "Y"): (1, "Z"),
    ("Y", "X"): (3, "Z"),
    ("Y", "Z"): (1, "X"),
    ("Z", "Y"): (3, "X"),
    ("Z", "X"): (1, "Y"),
    ("X", "Z"): (3, "Y"),
}


def _phase_power(phase: complex) -> int:
    for power, value in enumerate(PHASES):
        if abs(complex(phase) - value) < 1e-12:
            return power
    raise ContractViolationError(f"Pauli phase must be one of +1, -1, +i, -i, got {phase}")


@dataclass(frozen=True)
class PauliString:
    """A phase in {+1, -1, +i, -i} times a tensor product of I/X/Y/Z letters."""

    phase: complex
    letters: str

    def __post_init__(self):
        power = _phase_power(self.phase)
        object.__setattr__(self, "phase", PHASES[power])
        letters = "".join(self.letters).upper()
        if not letters or any(ch not in "IXYZ" for ch in letters):
            raise ContractViolationError(f"Invalid Pauli letters: {self.letters!r}")
        object.__setattr__(self, "letters", letters)

    @classmethod
    def from_label(cls, label: str) -> "PauliString":
        """Parse labels like ``"XZ"``, ``"-YI"``, ``"+iZ"`` or ``"-iXX"``."""
        sign = 1
        if label.startswith(("+", "-")):
            sign = -1 if label[0] == "-" else 1
            label = label[1:]
        if label.startswith("i"):
            return cls(sign * 1j, label[1:])
        return cls(sign, label)

    @classmethod
    def identity(cls, n: int) -> "PauliString":
        return cls(1, "I" * n)

    @property
    def n_qubits(self) -> int:
        return len(self.letters)

    @property
    def power(self) -> int:
        return _phase_power(self.phase)

    @property
    def is_hermitian(self) -> bool:
        # Letters are Hermitian matrices, so only the phase can spoil it.
        return self.power in (0, 2)

    @property
    def x_mask(self) -> int:
        mask = 0
        for q, ch in enumerate(self.letters):
            if ch in "XY":
                mask |= 1 << (self.n_qubits - 1 - q)
        return mask

    @property
    def z_mask(self) -> int:
        mask = 0
        for q, ch in enumerate(self.letters):
            if ch in "ZY":
                mask |= 1 << (self.n_qubits - 1 - q)
        return mask

    @property
    def weight(self) -> int:
        return sum(ch != "I" for ch in self.letters)

    def is_identity(self) -> bool:
        return self.weight == 0

    def __mul__(self, other: "PauliString") -> "PauliString":
        if not isinstance(other, PauliString):
            return NotImplemented
        if other.n_qubits != self.n_qubits:
            raise ContractViolationError("Pauli strings act on different qubit counts")
        power = self.power + other.power
        letters = []
        for left, right in zip(self.letters, other.letters):
            if left == "I":
                letters.append(right)
            elif right == "I":
                letters.append(left)
            elif left == right:
                letters.append("I")
            else:
                extra, letter = _PRODUCT[(left, right)]
                power += extra
                letters.append(letter)
        return PauliString(PHASES[power % 4], "".join(letters))

    def __neg__(self) -> "PauliString":
        return PauliString(-self.phase, self.letters)

    def scaled(self, power: int) -> "PauliString":
        """Multiply the phase by ``i**power``."""
        return PauliString(PHASES[(self.power + power) % 4], self.letters)

    def commutes_with(self, other: "PauliString") -> bool:
        clashes = sum(
            1
            for left, right in zip(self.letters, other.letters)
            if left != "I" and right != "I" and left != right
        )
        return clashes % 2 == 0

    def label(self) -> str:
        prefix = {0: "+", 1: "+i", 2: "-", 3: "-i"}[self.power]
        return prefix + self.letters

    def __str__(self) -> str:
        return self.label()


def check_dense_size(n_qubits: int, mixed: bool = False) -> None:
    """Raise ``SizeLimitError`` when ``n_qubits`` exceeds the dense cap."""
    sim = get_config().simulation
    cap = sim.max_mixed_qubits if mixed else sim.max_pure_qubits
    if n_qubits > cap:
        kind = "mixed" if mixed else "pure"
        raise SizeLimitError(f"{n_qubits} qubits exceeds the dense {kind}-state limit of {cap}")


def pauli_to_matrix(p: PauliString) -> np.ndarray:
    """
    Dense matrix of a Pauli string.

    Args:
        p: Pauli string on n qubits

    Returns:
        2^n x 2^n complex matrix, phase times the Kronecker product in qubit order
    """
    check_dense_size(p.n_qubits)
    matrix = np.array([[1.0 + 0j]])
    for ch in p.letters:
        matrix = np.kron(matrix, SINGLE_QUBIT[ch])
    return p.phase * matrix


def bit_parity(values: np.ndarray, n_bits: int) -> np.ndarray:
    """Parity (0/1) of the set bits of each integer in ``values``."""
    values = np.asarray(values, dtype=np.int64)
    parity = np.zeros_like(values)
    for bit in range(n_bits):
        parity ^= (values >> bit) & 1
    return parity


@lru_cache(maxsize=4096)
def _basis_action(p: PauliString) -> Tuple[np.ndarray, int]:
    n = p.n_qubits
    index = np.arange(1 << n, dtype=np.int64)
    n_y = p.letters.count("Y")
    signs = (1.0 - 2.0 * bit_parity(index & p.z_mask, n)).astype(np.complex128)
    signs *= p.phase * (1j ** n_y)
    signs.setflags(write=False)
    return signs, p.x_mask


def basis_action(p: PauliString) -> Tuple[np.ndarray, int]:
    """
    Return ``(signs, x_mask)`` with ``P|b> = signs[b] |b ^ x_mask>``.
    """
    return _basis_action(p)


def apply_pauli_vector(p: PauliString, vector: np.ndarray) -> np.ndarray:
    """Compute ``P @ vector`` without building the dense matrix."""
    signs, x_mask = basis_action(p)
    index = np.arange(vector.shape[0], dtype=np.int64)
    source = index ^ x_mask
    return signs[source] * vector[source]


def apply_pauli_rows(p: PauliString, matrix: np.ndarray) -> np.ndarray:
    """Compute ``P @ matrix`` for a dense operator."""
    signs, x_mask = basis_action(p)
    index = np.arange(matrix.shape[0], dtype=np.int64)
    source = index ^ x_mask
    return signs[source][:, None] * matrix[source, :]


def pauli_expectation_vector(p: PauliString, vector: np.ndarray) -> complex:
    """<psi|P|psi> for a state vector."""
    return complex(np.vdot(vector, apply_pauli_vector(p, vector)))


def pauli_expectation_matrix(p: PauliString, matrix: np.ndarray) -> complex:
    """tr(rho P) for a density matrix."""
    signs, x_mask = basis_action(p)
    index = np.arange(matrix.shape[0], dtype=np.int64)
    return complex(np.sum(signs * matrix[index, index ^ x_mask]))
