"""Two-copy Bell-basis protocol.

Copy 1 occupies qubits 0..n-1 and copy 2 qubits n..2n-1. For every mode j
a CNOT runs from copy-1 qubit j to copy-2 qubit j, then a Hadamard hits
copy-1 qubit j, and both registers are read out: ``u`` from copy 1, ``v``
from copy 2. Readouts are stored as basis indices (qubit 0 most
significant).

Sampling never builds the 2n-qubit state. Given eigenvectors e, e' of the
two copies, ``v`` is distributed as ``x ^ y`` with x ~ |e|^2 and
y ~ |e'|^2, and given ``v`` the first readout follows
|WHT(f_v)(u)|^2 / 2^n with f_v(x) = e(x) e'(x ^ v).
"""

import logging
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from config import get_config
from majorana.covariance import witness_from_values
from protocols.estimators import (
    EstimateReport,
    TestVerdict,
    batch_means,
    check_delta,
    check_epsilon,
    median_of_means,
    mom_batches,
    sample_mean,
    spread_error,
)
from qstate.paulis import check_dense_size
from qstate.rng import seed_of
from qstate.states import MixedState, PureState, State, apply_unitary, as_mixed, spectral_weights
from utils.errors import ContractViolationError

logger = logging.getLogger(__name__)

DEFAULT_DELTA = 0.05

_HADAMARD = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2)
_CNOT = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=np.complex128
)


def index_bits(values: np.ndarray, n: int) -> np.ndarray:
    """Integer basis indices to an (S, n) 0/1 matrix, qubit 0 first."""
    values = np.asarray(values, dtype=np.int64).reshape(-1)
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    return ((values[:, None] >> shifts[None, :]) & 1).astype(np.int8)


def bits_to_g(u: Sequence[int], v: Sequence[int]) -> np.ndarray:
    """
    Majorana signs of a Bell readout.

    g_{2j-1} = (-1)^(u_j + sum_{k<j} v_k) and
    g_{2j} = -(-1)^(u_j + v_j + sum_{k<j} v_k). Accepts single bit vectors
    or (S, n) stacks.

    Returns:
        Array of +-1 with the Majorana index as the last axis (length 2n)
    """
    u = np.asarray(u, dtype=np.int64)
    v = np.asarray(v, dtype=np.int64)
    if u.shape != v.shape:
        raise ContractViolationError(f"Readouts have different shapes {u.shape} and {v.shape}")
    prefix = np.cumsum(v, axis=-1) - v
    odd = 1 - 2 * ((u + prefix) % 2)
    even = -(1 - 2 * ((u + v + prefix) % 2))
    g = np.empty(u.shape[:-1] + (2 * u.shape[-1],), dtype=np.int64)
    g[..., 0::2] = odd
    g[..., 1::2] = even
    return g


def walsh_hadamard(f: np.ndarray, n: int) -> np.ndarray:
    """Unnormalized transform sum_x (-1)^(u.x) f(x) along the last axis."""
    lead = f.shape[:-1]
    t = f.reshape(lead + (2,) * n)
    for axis in range(len(lead), len(lead) + n):
        a = np.take(t, 0, axis=axis)
        b = np.take(t, 1, axis=axis)
        t = np.stack([a + b, a - b], axis=axis)
    return t.reshape(lead + (1 << n,))


@dataclass(frozen=True)
class BellSample:
    """One Bell shot with its derived quantities."""

    n_qubits: int
    u: Tuple[int, ...]
    v: Tuple[int, ...]
    g: Tuple[int, ...]

    def __post_init__(self):
        if len(self.u) != self.n_qubits or len(self.v) != self.n_qubits:
            raise ContractViolationError("Readout length does not match n_qubits")
        if tuple(int(x) for x in bits_to_g(self.u, self.v)) != tuple(self.g):
            raise ContractViolationError("Stored signs do not match the readout")

    @classmethod
    def from_bits(cls, u: Sequence[int], v: Sequence[int]) -> "BellSample":
        u, v = tuple(int(b) for b in u), tuple(int(b) for b in v)
        return cls(len(u), u, v, tuple(int(x) for x in bits_to_g(u, v)))

    @property
    def q(self) -> int:
        return sum(self.g) // 2

    @property
    def lam(self) -> int:
        return 2 * self.q ** 2

    @property
    def swap(self) -> int:
        return -1 if sum(a & b for a, b in zip(self.u, self.v)) % 2 else 1

    @property
    def v_is_zero(self) -> bool:
        return not any(self.v)


@dataclass(frozen=True, eq=False)
class BellRecord:
    """Many Bell shots as integer readouts, with vectorized derived columns."""

    n_qubits: int
    u: np.ndarray
    v: np.ndarray
    seed: Optional[int] = None

    def __len__(self) -> int:
        return int(self.u.shape[0])

    @cached_property
    def g(self) -> np.ndarray:
        return bits_to_g(index_bits(self.u, self.n_qubits), index_bits(self.v, self.n_qubits))

    @cached_property
    def q(self) -> np.ndarray:
        return self.g.sum(axis=1) // 2

    @cached_property
    def lam(self) -> np.ndarray:
        return 2 * self.q ** 2

    @cached_property
    def swap(self) -> np.ndarray:
        overlap = index_bits(self.u & self.v, self.n_qubits).sum(axis=1)
        return 1 - 2 * (overlap % 2)

    @cached_property
    def v_is_zero(self) -> np.ndarray:
        return self.v == 0

    def sample(self, shot: int) -> BellSample:
        bits_u = index_bits(self.u[shot], self.n_qubits)[0]
        bits_v = index_bits(self.v[shot], self.n_qubits)[0]
        return BellSample.from_bits(bits_u, bits_v)

    def row(self, shot: int) -> Dict[str, Any]:
        """One serialized shot: seed, shot, u, v (hex), lambda, swap."""
        width = max(1, (self.n_qubits + 3) // 4)
        return {
            "seed": self.seed,
            "shot": shot,
            "u": format(int(self.u[shot]), f"0{width}x"),
            "v": format(int(self.v[shot]), f"0{width}x"),
            "lambda": int(self.lam[shot]),
            "swap": int(self.swap[shot]),
        }

    def to_records(self) -> List[Dict[str, Any]]:
        return [self.row(shot) for shot in range(len(self))]

    def concat(self, other: "BellRecord") -> "BellRecord":
        return BellRecord(
            self.n_qubits, np.concatenate([self.u, other.u]), np.concatenate([self.v, other.v]), self.seed
        )


def _conditional_u(e1: np.ndarray, e2: np.ndarray, v_values: np.ndarray, n: int) -> np.ndarray:
    """Rows of Pr[u | v] (unnormalized) for each v in ``v_values``."""
    index = np.arange(1 << n, dtype=np.int64)
    f = e1[None, :] * e2[index[None, :] ^ v_values[:, None]]
    return np.abs(walsh_hadamard(f, n)) ** 2 / (1 << n)


def _chunk_rows(n: int) -> int:
    # keep each transform batch near the configured chunk of complex entries
    return max(1, get_config().estimator.chunk_size * 64 // (1 << n))


def _sample_pair(
    e1: np.ndarray, e2: np.ndarray, shots: int, n: int, rng: np.random.Generator
) -> Tuple[np.ndarray, np.ndarray]:
    p1 = np.abs(e1) ** 2
    p2 = np.abs(e2) ** 2
    x = rng.choice(1 << n, size=shots, p=p1 / p1.sum())
    y = rng.choice(1 << n, size=shots, p=p2 / p2.sum())
    v = x ^ y
    u = np.empty(shots, dtype=np.int64)

    v_values, inverse, counts = np.unique(v, return_inverse=True, return_counts=True)
    groups = _group_positions(np.asarray(inverse).reshape(-1), counts)
    rows = _chunk_rows(n)
    for start in range(0, v_values.shape[0], rows):
        block = v_values[start:start + rows]
        conditional = _conditional_u(e1, e2, block, n)
        for offset in range(block.shape[0]):
            slot = start + offset
            probs = conditional[offset]
            u[groups[slot]] = rng.choice(1 << n, size=counts[slot], p=probs / probs.sum())
    return u, v


def _group_positions(inverse: np.ndarray, counts: np.ndarray) -> List[np.ndarray]:
    order = np.argsort(inverse, kind="stable")
    bounds = np.concatenate([[0], np.cumsum(counts)])
    return [order[bounds[i]:bounds[i + 1]] for i in range(counts.shape[0])]


def sample_bell_record(state: State, n_shots: int, rng: np.random.Generator) -> BellRecord:
    """
    Draw ``n_shots`` Bell readouts of two copies of ``state``.

    Mixed states pick independent eigenvectors for the two copies per shot.

    Args:
        state: Pure or mixed state
        n_shots: Number of shots
        rng: Random generator

    Returns:
        BellRecord
    """
    n = state.n_qubits
    weights, vectors = spectral_weights(state)

    if weights.shape[0] == 1:
        u, v = _sample_pair(vectors[:, 0], vectors[:, 0], n_shots, n, rng)
        return BellRecord(n, u, v, seed_of(rng))

    first = rng.choice(weights.shape[0], size=n_shots, p=weights)
    second = rng.choice(weights.shape[0], size=n_shots, p=weights)
    u = np.empty(n_shots, dtype=np.int64)
    v = np.empty(n_shots, dtype=np.int64)
    pairs, inverse, counts = np.unique(
        np.stack([first, second], axis=1), axis=0, return_inverse=True, return_counts=True
    )
    groups = _group_positions(np.asarray(inverse).reshape(-1), counts)
    for slot, (i, j) in enumerate(pairs):
        positions = groups[slot]
        u[positions], v[positions] = _sample_pair(vectors[:, i], vectors[:, j], positions.shape[0], n, rng)
    return BellRecord(n, u, v, seed_of(rng))


def bell_sample(state: State, rng: np.random.Generator) -> BellSample:
    """A single Bell shot."""
    return sample_bell_record(state, 1, rng).sample(0)


def bell_distribution(state: State) -> np.ndarray:
    """
    Exact joint readout law P[u, v] from the transform identity.

    Returns:
        2^n x 2^n array summing to 1
    """
    n = state.n_qubits
    weights, vectors = spectral_weights(state)
    all_v = np.arange(1 << n, dtype=np.int64)
    table = np.zeros((1 << n, 1 << n))
    for i, wi in enumerate(weights):
        for j, wj in enumerate(weights):
            table += wi * wj * _conditional_u(vectors[:, i], vectors[:, j], all_v, n).T
    return table


def bell_circuit_distribution(state: State) -> np.ndarray:
    """
    Joint readout law P[u, v] from the explicit CNOT + Hadamard circuit.

    Builds the 2n-qubit state, so it is limited by the dense caps.
    """
    n = state.n_qubits
    if isinstance(state, PureState):
        joint: State = PureState(2 * n, np.kron(state.amplitudes, state.amplitudes))
    else:
        check_dense_size(2 * n, mixed=True)
        rho = as_mixed(state).matrix
        joint = MixedState(2 * n, np.kron(rho, rho))
    for j in range(n):
        joint = apply_unitary(joint, _CNOT, [j, n + j])
        joint = apply_unitary(joint, _HADAMARD, [j])
    return joint.probabilities().reshape(1 << n, 1 << n)


def estimate_faf1_from_record(record: BellRecord, delta: float = DEFAULT_DELTA) -> EstimateReport:
    """Median-of-means of the lambda column; E[lambda] = FAF_1."""
    report = median_of_means(record.lam, delta, seed=record.seed)
    logger.debug(f"FAF_1 from {len(record)} Bell shots: {report.mean:.6f} +- {report.std_error:.6f}")
    return report


def estimate_faf1_bell(
    state: State, n_shots: int, delta: float, rng: np.random.Generator
) -> EstimateReport:
    """
    Estimate FAF_1 from fresh Bell shots.

    Args:
        state: Pure or mixed state
        n_shots: Shots to draw, at least the batch count
        delta: Failure probability for median-of-means
        rng: Random generator

    Returns:
        EstimateReport
    """
    if n_shots < mom_batches(delta):
        raise ContractViolationError(f"{n_shots} shots is fewer than {mom_batches(delta)} batches")
    record = sample_bell_record(state, n_shots, rng)
    report = estimate_faf1_from_record(record, delta)
    logger.info(f"Bell FAF_1 estimate {report.mean:.6f} +- {report.std_error:.6f} ({n_shots} shots)")
    return report


def estimate_purity_bell(record: BellRecord) -> EstimateReport:
    """Average swap eigenvalue; E[swap] = tr(rho^2)."""
    return sample_mean(record.swap, seed=record.seed)


def estimate_dephased_purity_bell(record: BellRecord) -> EstimateReport:
    """Fraction of shots with v = 0; estimates tr(Delta(rho)^2)."""
    return sample_mean(record.v_is_zero.astype(float), seed=record.seed)


def estimate_coherence_bell(record: BellRecord) -> EstimateReport:
    """swap - 1[v = 0] per shot; estimates tr(rho^2) - tr(Delta(rho)^2)."""
    return sample_mean(record.swap - record.v_is_zero.astype(float), seed=record.seed)


def estimate_witness_from_record(record: BellRecord, delta: float = DEFAULT_DELTA) -> EstimateReport:
    """
    Witness from one shared record of lambda and swap values.

    FAF_1 is the median of batch means of lambda, with at most one batch
    per shot; purity is the plain average swap, clamped to [2^-n, 1] before
    the n-th root. The standard error uses the first-order expansion in both
    means, including their covariance.
    """
    n = record.n_qubits
    if len(record) == 0:
        raise ContractViolationError("Cannot estimate the witness from an empty record")
    k = min(mom_batches(delta), len(record))
    lam = record.lam.astype(float)
    swap = record.swap.astype(float)
    lam_means = batch_means(lam, k)
    swap_means = batch_means(swap, k)

    faf1 = float(np.median(lam_means))
    raw_purity = float(swap.mean())
    floor = 2.0 ** -n
    purity_value = min(max(raw_purity, floor), 1.0)
    warning = None
    if purity_value != raw_purity:
        warning = f"purity estimate {raw_purity:.6g} clamped to [{floor:.6g}, 1]"
        logger.warning(f"Degenerate witness estimate: {warning}")

    slope = 2.0 * purity_value ** (1.0 / n - 1.0)
    linear = lam + slope * swap
    per_batch = [
        witness_from_values(lm, min(max(sm, floor), 1.0), n) for lm, sm in zip(lam_means, swap_means)
    ]
    return EstimateReport(
        mean=witness_from_values(faf1, purity_value, n),
        std_error=spread_error(linear, batch_means(linear, k)),
        n_shots=len(record),
        n_batches=k,
        raw_batch_means=[float(w) for w in per_batch],
        seed=record.seed,
        warning=warning,
        constants={"mom_constant": get_config().estimator.mom_constant},
    )


def estimate_witness_bell(
    state: State, n_shots: int, delta: float, rng: np.random.Generator
) -> EstimateReport:
    """Estimate the purity-corrected witness from fresh Bell shots."""
    record = sample_bell_record(state, n_shots, rng)
    report = estimate_witness_from_record(record, delta)
    logger.info(f"Bell witness estimate {report.mean:.6f} +- {report.std_error:.6f} ({n_shots} shots)")
    return report


def bell_test_budget(n: int, epsilon: float, delta: float) -> int:
    """N = ceil(c n^2 / eps^2 ln(1/delta))."""
    c = get_config().estimator.bell_test_constant
    return math.ceil(c * n ** 2 / epsilon ** 2 * math.log(1.0 / delta))


def faf1_shot_budget(n: int, eta: float, delta: float) -> Dict[str, float]:
    """
    Shots for an eta-accurate Bell estimate of FAF_1 with confidence 1 - delta.

    Each batch needs variance below eta^2 / 4 given Var(lambda) <= 2n^3.
    """
    if eta <= 0:
        raise ContractViolationError("eta must be positive")
    k = mom_batches(delta)
    per_batch = math.ceil(4 * 2 * n ** 3 / eta ** 2)
    return {
        "shots": k * per_batch,
        "n_batches": k,
        "shots_per_batch": per_batch,
        "variance_bound": 2 * n ** 3,
        "mom_constant": get_config().estimator.mom_constant,
    }


def bell_gaussianity_test(
    state: State, epsilon: float, delta: float, rng: np.random.Generator
) -> TestVerdict:
    """
    One-sided Bell test: reject on the first nonzero lambda.

    Pure Gaussian states never produce a nonzero lambda, so they are always
    accepted. States at distance at least epsilon show lambda != 0 with
    probability at least epsilon^2 / n^2 per shot.

    Args:
        state: State under test
        epsilon: Distance parameter in (0, 1]
        delta: Failure probability in (0, 1)
        rng: Random generator

    Returns:
        TestVerdict
    """
    epsilon = check_epsilon(epsilon)
    delta = check_delta(delta)
    n = state.n_qubits
    budget = bell_test_budget(n, epsilon, delta)
    constants = {"bell_test_constant": get_config().estimator.bell_test_constant}
    chunk = get_config().estimator.chunk_size

    used = 0
    while used < budget:
        size = min(chunk, budget - used)
        record = sample_bell_record(state, size, rng)
        hits = np.flatnonzero(record.lam != 0)
        if hits.size:
            first = int(hits[0])
            hit = record.row(first)
            evidence = {
                "shot": used + first,
                "u": hit["u"],
                "v": hit["v"],
                "lambda": hit["lambda"],
                "q": int(record.q[first]),
            }
            logger.info(f"Bell test REJECT at shot {used + first + 1} of {budget}")
            return TestVerdict(
                accept=False,
                n_shots_used=used + first + 1,
                epsilon=epsilon,
                delta=delta,
                evidence=evidence,
                budget=budget,
                constants=constants,
            )
        used += size

    logger.info(f"Bell test ACCEPT after {budget} shots")
    return TestVerdict(
        accept=True,
        n_shots_used=budget,
        epsilon=epsilon,
        delta=delta,
        budget=budget,
        constants=constants,
    )
