"""Jordan-Wigner Majorana operators and their bilinears.

Majorana indices are 1-based: mode ``j`` (1..n) carries
``gamma_{2j-1} = Z..Z X_j`` and ``gamma_{2j} = Z..Z Y_j``.
"""

from functools import lru_cache
from typing import List, Tuple

import numpy as np

from qstate.paulis import PauliString, check_dense_size, pauli_to_matrix
from utils.errors import ContractViolationError


def check_majorana_index(a: int, n: int) -> int:
    """Return ``a`` if it is a valid Majorana index for ``n`` modes."""
    if not 1 <= int(a) <= 2 * n:
        raise ContractViolationError(f"Majorana index {a} out of range 1..{2 * n}")
    return int(a)


def mode_of(a: int) -> int:
    """0-based qubit carrying Majorana ``a``."""
    return (a - 1) // 2


def jw_majorana(a: int, n: int) -> PauliString:
    """
    Jordan-Wigner image of Majorana operator ``gamma_a``.

    Args:
        a: Majorana index in 1..2n
        n: Number of modes (qubits)

    Returns:
        Hermitian Pauli string squaring to the identity
    """
    a = check_majorana_index(a, n)
    q = mode_of(a)
    letter = "X" if a % 2 == 1 else "Y"
    return PauliString(1, "Z" * q + letter + "I" * (n - q - 1))


def bilinear(a: int, b: int, n: int) -> PauliString:
    """B_ab = -i gamma_a gamma_b."""
    if a == b:
        raise ContractViolationError(f"Bilinear needs distinct indices, got ({a}, {b})")
    return (jw_majorana(a, n) * jw_majorana(b, n)).scaled(3)


def majorana_pairs(n: int) -> List[Tuple[int, int]]:
    """All ordered pairs (a, b) with a < b, row-major."""
    return [(a, b) for a in range(1, 2 * n + 1) for b in range(a + 1, 2 * n + 1)]


@lru_cache(maxsize=16)
def _bilinear_stack(n: int) -> np.ndarray:
    stack = np.array([pauli_to_matrix(bilinear(a, b, n)) for a, b in majorana_pairs(n)])
    stack.setflags(write=False)
    return stack


def bilinear_stack(n: int) -> np.ndarray:
    """
    Dense matrices of every B_ab (a < b), stacked in ``majorana_pairs`` order.

    Returns:
        Read-only array of shape (n(2n-1), 2^n, 2^n)
    """
    check_dense_size(n)
    return _bilinear_stack(n)


def quadratic_hamiltonian(coefficients: np.ndarray, n: int) -> np.ndarray:
    """
    Dense sum_{a<b} c_ab B_ab.

    Args:
        coefficients: Either an antisymmetric 2n x 2n matrix (upper triangle used)
            or a flat vector ordered like ``majorana_pairs``
        n: Number of modes

    Returns:
        Hermitian 2^n x 2^n matrix
    """
    coefficients = np.asarray(coefficients, dtype=float)
    if coefficients.ndim == 2:
        upper = np.triu_indices(2 * n, k=1)
        coefficients = coefficients[upper]
    if n <= 4:
        return np.tensordot(coefficients, bilinear_stack(n), axes=1)

    check_dense_size(n)
    hamiltonian = np.zeros((1 << n, 1 << n), dtype=np.complex128)
    for c, (a, b) in zip(coefficients, majorana_pairs(n)):
        if c != 0.0:
            hamiltonian += c * pauli_to_matrix(bilinear(a, b, n))
    return hamiltonian
