"""Gate-level circuits: matchgate brickworks and the theta-sweep fixture.

Matchgates are built as dense exponentials over the whole register, so a
wrap-around pair (n-1, 0) whose Jordan-Wigner strings are nonlocal takes
the same path as an adjacent one.
"""

import logging
import math
from typing import Callable, List, Optional, Tuple

import numpy as np
from scipy.linalg import expm

from majorana.operators import quadratic_hamiltonian
from qstate.channels import NoiseChannel, apply_channel_to_qubits
from qstate.paulis import check_dense_size
from qstate.states import MixedState, State, apply_full_unitary, apply_unitary, as_mixed
from statelib.specs import CircuitOp, CircuitSpec, MatchgateOp, NoiseSpec, RxxOp, RzOp, RzzOp
from utils.errors import ContractViolationError

logger = logging.getLogger(__name__)

LayerCallback = Callable[[int, State], None]


def rxx_matrix(angle: float) -> np.ndarray:
    """exp(-i angle/2 X X)."""
    xx = np.fliplr(np.eye(4)).astype(np.complex128)
    return math.cos(angle / 2) * np.eye(4, dtype=np.complex128) - 1j * math.sin(angle / 2) * xx


def rz_matrix(angle: float) -> np.ndarray:
    return np.diag([np.exp(-0.5j * angle), np.exp(0.5j * angle)])


def rzz_matrix(angle: float) -> np.ndarray:
    """exp(-i angle/2 Z Z)."""
    phase = np.exp(-0.5j * angle)
    return np.diag([phase, phase.conjugate(), phase.conjugate(), phase])


def matchgate_majoranas(pair: Tuple[int, int]) -> List[int]:
    """The four 1-based Majorana indices of qubits i and j, sorted."""
    i, j = pair
    return sorted([2 * i + 1, 2 * i + 2, 2 * j + 1, 2 * j + 2])


def matchgate_generator(op: MatchgateOp, n: int) -> np.ndarray:
    """Antisymmetric coefficient matrix of (g/sqrt(6)) sum theta_ab B_ab."""
    indices = matchgate_majoranas(op.pair)
    pairs = [(a, b) for k, a in enumerate(indices) for b in indices[k + 1:]]
    scale = op.strength / math.sqrt(6)
    h = np.zeros((2 * n, 2 * n))
    for theta, (a, b) in zip(op.angles, pairs):
        h[a - 1, b - 1] = scale * theta
        h[b - 1, a - 1] = -scale * theta
    return h


def matchgate_unitary(op: MatchgateOp, n: int) -> np.ndarray:
    """exp(-i H) on the full 2^n space."""
    check_dense_size(n)
    return expm(-1j * quadratic_hamiltonian(matchgate_generator(op, n), n))


def _two_qubit_targets(op: CircuitOp) -> Optional[Tuple[int, int]]:
    return None if isinstance(op, RzOp) else tuple(op.pair)


def apply_op(state: State, op: CircuitOp, n: int) -> State:
    """Apply one gate to ``state``."""
    if isinstance(op, MatchgateOp):
        return apply_full_unitary(state, matchgate_unitary(op, n))
    if isinstance(op, RxxOp):
        return apply_unitary(state, rxx_matrix(op.angle), op.pair)
    if isinstance(op, RzzOp):
        return apply_unitary(state, rzz_matrix(op.angle), op.pair)
    if isinstance(op, RzOp):
        return apply_unitary(state, rz_matrix(op.angle), [op.qubit])
    raise ContractViolationError(f"Unknown op {op!r}")


def run_circuit(
    spec: CircuitSpec, initial: State, on_layer: Optional[LayerCallback] = None
) -> MixedState:
    """
    Run a circuit spec on a state.

    Args:
        spec: Circuit spec
        initial: Input state on ``spec.n_qubits`` qubits
        on_layer: Called as ``on_layer(layer_index, state)`` after each layer,
            noise included

    Returns:
        Output density matrix
    """
    if initial.n_qubits != spec.n_qubits:
        raise ContractViolationError(
            f"Circuit acts on {spec.n_qubits} qubits, state has {initial.n_qubits}"
        )
    n = spec.n_qubits
    channel = NoiseChannel(spec.noise.kind, spec.noise.strength) if spec.noise else None
    if channel is not None:
        check_dense_size(n, mixed=True)
    per_gate = channel is not None and spec.noise.placement == "after_gate"
    per_layer = channel is not None and spec.noise.placement == "after_layer"

    groups = spec.layers() if (spec.ops or spec.layer_boundaries) else []
    state: State = initial
    for index, group in enumerate(groups):
        for op in group:
            state = apply_op(state, op, n)
            targets = _two_qubit_targets(op)
            if per_gate and targets is not None:
                state = apply_channel_to_qubits(state, channel, targets)
        if per_layer:
            state = apply_channel_to_qubits(state, channel, range(n))
        if on_layer is not None:
            on_layer(index, state)
    logger.debug(f"Ran {len(spec.ops)} ops in {len(groups)} layers on {n} qubits")
    return as_mixed(state)


def brickwork_pairs(n: int, layer: int) -> List[Tuple[int, int]]:
    """(0,1),(2,3),... on even layers; (1,2),...,(n-1,0) on odd layers."""
    start = layer % 2
    return [((start + 2 * k) % n, (start + 2 * k + 1) % n) for k in range(n // 2)]


def brickwork_matchgate(
    n: int,
    depth: int,
    g: float,
    rng: np.random.Generator,
    noise: Optional[NoiseSpec] = None,
    seed: Optional[int] = None,
) -> CircuitSpec:
    """
    Random nearest-neighbour matchgate brickwork with periodic boundaries.

    Every gate carries six i.i.d. standard normal angles; its Hamiltonian is
    (g/sqrt(6)) sum theta_ab B_ab over the four Majoranas of the pair.

    Args:
        n: Even number of qubits
        depth: Number of layers, >= 0
        g: Gate strength
        rng: Random generator for the angles
        noise: Optional noise; ``after_layer`` placement gives per-layer noise on every qubit
        seed: Seed recorded on the returned CircuitSpec

    Returns:
        CircuitSpec with one boundary per layer
    """
    if n < 2 or n % 2:
        raise ContractViolationError(f"Brickwork needs an even number of qubits, got {n}")
    if depth < 0:
        raise ContractViolationError("depth must be non-negative")
    ops: List[MatchgateOp] = []
    boundaries: List[int] = []
    for layer in range(depth):
        for pair in brickwork_pairs(n, layer):
            ops.append(MatchgateOp(pair=pair, angles=rng.standard_normal(6).tolist(), strength=g))
        boundaries.append(len(ops))
    return CircuitSpec(n_qubits=n, ops=ops, noise=noise, layer_boundaries=boundaries, seed=seed)


def theta_sweep_circuit(theta: float, noise: Optional[NoiseSpec] = None) -> CircuitSpec:
    """
    Four-qubit theta-sweep circuit.

    R_z(pi/2) on every qubit, R_xx(pi/2) on (0,1) and (2,3), R_zz(theta) on
    (1,2), then R_z(pi/2) on every qubit. theta = 0 is a matchgate circuit
    with Gaussian output; theta = pi/2 reaches witness 4.
    """
    quarter = math.pi / 2
    ops: List[CircuitOp] = [RzOp(qubit=q, angle=quarter) for q in range(4)]
    ops += [RxxOp(pair=(0, 1), angle=quarter), RxxOp(pair=(2, 3), angle=quarter)]
    ops.append(RzzOp(pair=(1, 2), angle=theta))
    ops += [RzOp(qubit=q, angle=quarter) for q in range(4)]
    return CircuitSpec(n_qubits=4, ops=ops, noise=noise, layer_boundaries=[4, 6, 7, 11])
