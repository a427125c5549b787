"""Single-copy protocol over commuting layers of Majorana bilinears.

The 2n - 1 layers partition all pairs (a, b), a < b, into perfect
matchings. Within a layer the n bilinears commute, so one shot measures
all of them at once.
"""

import logging
import math
from dataclasses import dataclass
from functools import cached_property
from typing import List, Optional, Sequence, Tuple

import numpy as np

from config import get_config
from majorana.covariance import covariance
from majorana.operators import bilinear, majorana_pairs
from protocols.estimators import (
    EstimateReport,
    TestVerdict,
    check_delta,
    check_epsilon,
    median_of_repetitions,
    mom_batches,
    sample_mean,
)
from qstate.measurement import measure_pauli, project
from qstate.paulis import PauliString
from qstate.rng import map_streams, seed_of
from qstate.states import State
from utils.errors import ContractViolationError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MeasurementLayer:
    """One matching of Majorana indices; pairs are ordered (a < b)."""

    index: int
    n_modes: int
    pairs: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        seen = [m for pair in self.pairs for m in pair]
        if len(self.pairs) != self.n_modes or sorted(seen) != list(range(1, 2 * self.n_modes + 1)):
            raise ContractViolationError(f"Layer {self.index} is not a perfect matching: {self.pairs}")
        if any(a >= b for a, b in self.pairs):
            raise ContractViolationError(f"Layer {self.index} has unordered pairs: {self.pairs}")

    @cached_property
    def observables(self) -> Tuple[PauliString, ...]:
        return tuple(bilinear(a, b, self.n_modes) for a, b in self.pairs)


@dataclass(frozen=True, eq=False)
class LayerShotMatrix:
    """M x n matrix of +-1 outcomes for one layer (shot r, observable e)."""

    layer: int
    outcomes: np.ndarray

    def __post_init__(self):
        outcomes = np.array(self.outcomes, dtype=np.int8, copy=True)
        if outcomes.ndim != 2 or not np.all(np.abs(outcomes) == 1):
            raise ContractViolationError("Layer outcomes must be a 2D array of +1/-1")
        outcomes.setflags(write=False)
        object.__setattr__(self, "outcomes", outcomes)

    @property
    def n_shots(self) -> int:
        return int(self.outcomes.shape[0])


def _wrap(x: int, m: int) -> int:
    return 1 + (x - 1) % m


def build_layers(n: int) -> List[MeasurementLayer]:
    """
    The 2n - 1 commuting layers.

    Layer l holds (l, 2n) and (min, max) of ([l + j]_m, [l - j]_m) for
    j = 1..n-1, with m = 2n - 1 and [x]_m = 1 + ((x - 1) mod m).
    """
    if n < 1:
        raise ContractViolationError("n must be positive")
    m = 2 * n - 1
    layers = []
    for ell in range(1, m + 1):
        pairs = [(ell, 2 * n)]
        for j in range(1, n):
            a, b = _wrap(ell + j, m), _wrap(ell - j, m)
            pairs.append((min(a, b), max(a, b)))
        layers.append(MeasurementLayer(ell, n, tuple(pairs)))
    return layers


def _check_layer(state: State, layer: MeasurementLayer) -> None:
    if layer.n_modes != state.n_qubits:
        raise ContractViolationError(
            f"Layer built for {layer.n_modes} modes, state has {state.n_qubits} qubits"
        )


def sample_layer(
    state: State,
    layer: MeasurementLayer,
    rng: np.random.Generator,
    order: Optional[Sequence[int]] = None,
) -> np.ndarray:
    """
    One shot of a layer by sequential projective measurement with collapse.

    Args:
        state: Pure or mixed state
        layer: Layer for the state's mode count
        rng: Random generator
        order: Measurement order as positions into ``layer.pairs``

    Returns:
        Length-n array of +-1 in layer order
    """
    _check_layer(state, layer)
    order = list(order) if order is not None else list(range(layer.n_modes))
    outcome = np.zeros(layer.n_modes, dtype=np.int8)
    current = state
    for e in order:
        outcome[e], current = measure_pauli(current, layer.observables[e], rng)
    return outcome


def layer_distribution(
    state: State, layer: MeasurementLayer, order: Optional[Sequence[int]] = None
) -> np.ndarray:
    """
    Exact joint law of a layer's outcomes by branching projections.

    Outcome index: bit ``n-1-e`` set when observable ``e`` reads -1.

    Returns:
        Probability vector of length 2^n
    """
    _check_layer(state, layer)
    n = layer.n_modes
    order = list(order) if order is not None else list(range(n))
    probabilities = np.zeros(1 << n)

    def branch(current: State, depth: int, index: int, weight: float) -> None:
        if depth == len(order):
            probabilities[index] += weight
            return
        e = order[depth]
        for outcome in (1, -1):
            p, collapsed = project(current, layer.observables[e], outcome)
            if collapsed is None:
                continue
            bit = (1 << (n - 1 - e)) if outcome == -1 else 0
            branch(collapsed, depth + 1, index | bit, weight * p)

    branch(state, 0, 0, 1.0)
    return probabilities / probabilities.sum()


def _outcome_signs(indices: np.ndarray, n: int) -> np.ndarray:
    shifts = np.arange(n - 1, -1, -1)
    bits = (np.asarray(indices)[:, None] >> shifts[None, :]) & 1
    return (1 - 2 * bits).astype(np.int8)


def sample_layer_batch(
    state: State,
    layer: MeasurementLayer,
    shots: int,
    rng: np.random.Generator,
    distribution: Optional[np.ndarray] = None,
) -> LayerShotMatrix:
    """
    ``shots`` independent layer outcomes drawn from the exact joint law.

    Same law as repeated ``sample_layer`` calls.
    """
    probs = distribution if distribution is not None else layer_distribution(state, layer)
    indices = rng.choice(probs.shape[0], size=shots, p=probs)
    return LayerShotMatrix(layer.index, _outcome_signs(indices, layer.n_modes))


def u_statistic(shots: LayerShotMatrix) -> float:
    """
    Pairwise U-statistic over shots: (|colsum|^2 - M n) / (M (M - 1)).

    Unbiased for sum_e <B_e>^2 over the layer.
    """
    m, n = shots.outcomes.shape
    if m < 2:
        raise ContractViolationError(f"U-statistic needs at least 2 shots, got {m}")
    colsum = shots.outcomes.sum(axis=0, dtype=np.int64)
    return float((colsum @ colsum - m * n) / (m * (m - 1)))


def _single_copy_round(
    state: State,
    layers: List[MeasurementLayer],
    distributions: List[np.ndarray],
    shots_per_layer: int,
    rng: np.random.Generator,
) -> float:
    total = 0.0
    for layer, probs in zip(layers, distributions):
        total += u_statistic(sample_layer_batch(state, layer, shots_per_layer, rng, probs))
    return state.n_qubits - total


def estimate_faf1_single(
    state: State, shots_per_layer: int, delta: float, rng: np.random.Generator
) -> EstimateReport:
    """
    Single-copy FAF_1 estimate, n - sum_l S_l.

    Every layer gets its own batch of shots; the whole procedure is
    repeated ceil(c ln(1/delta)) times on independent streams and the
    median reported.

    Args:
        state: Pure or mixed state
        shots_per_layer: Shots M per layer, at least 2
        delta: Failure probability
        rng: Random generator

    Returns:
        EstimateReport over repetitions
    """
    if shots_per_layer < 2:
        raise ContractViolationError("At least 2 shots per layer are required")
    n = state.n_qubits
    layers = build_layers(n)
    distributions = [layer_distribution(state, layer) for layer in layers]
    repetitions = mom_batches(delta)

    values = map_streams(
        lambda stream, _: _single_copy_round(state, layers, distributions, shots_per_layer, stream),
        rng,
        repetitions,
    )
    n_shots = repetitions * len(layers) * shots_per_layer
    report = median_of_repetitions(np.array(values), n_shots, seed=seed_of(rng))
    report.constants["shots_per_layer"] = float(shots_per_layer)
    logger.info(
        f"Single-copy FAF_1 estimate {report.mean:.6f} +- {report.std_error:.6f} ({n_shots} shots)"
    )
    return report


def layer_shots_per_tester(n: int, eta: float) -> int:
    """Smallest M with n^2/M + n^3/M^2 <= (eta/2)^2."""
    if eta <= 0:
        raise ContractViolationError("eta must be positive")
    target = (eta / 2) ** 2

    def fits(m: int) -> bool:
        return n ** 2 / m + n ** 3 / m ** 2 <= target

    m = max(2, math.ceil((n ** 2 + math.sqrt(n ** 4 + 4 * target * n ** 3)) / (2 * target)))
    while m > 2 and fits(m - 1):
        m -= 1
    while not fits(m):
        m += 1
    return m


def single_copy_test(
    state: State, epsilon: float, delta: float, rng: np.random.Generator
) -> TestVerdict:
    """
    Single-copy Gaussianity test.

    Estimates FAF_1 to accuracy eps^2/2 and accepts iff the estimate is
    below eps^2, halfway between 0 (Gaussian) and 2 eps^2 (eps-far).
    """
    epsilon = check_epsilon(epsilon)
    delta = check_delta(delta)
    n = state.n_qubits
    eta = epsilon ** 2 / 2
    shots_per_layer = layer_shots_per_tester(n, eta)
    report = estimate_faf1_single(state, shots_per_layer, delta, rng)
    threshold = epsilon ** 2
    accept = report.mean < threshold
    evidence = None
    if not accept:
        evidence = {"estimate": report.mean, "std_error": report.std_error, "threshold": threshold}
    logger.info(f"Single-copy test {'ACCEPT' if accept else 'REJECT'}: estimate {report.mean:.6f}")
    return TestVerdict(
        accept=accept,
        n_shots_used=report.n_shots,
        epsilon=epsilon,
        delta=delta,
        evidence=evidence,
        budget=report.n_shots,
        constants={
            "eta": eta,
            "shots_per_layer": float(shots_per_layer),
            "repetitions": float(report.n_batches),
            "mom_constant": get_config().estimator.mom_constant,
        },
    )


def randomized_pair_estimate(state: State, n_trials: int, rng: np.random.Generator) -> EstimateReport:
    """
    Baseline estimator: per trial pick a uniform pair (a, b), measure B_ab on
    two independent copies (outcomes X, Y) and record Z = N_b X Y, with
    N_b = n(2n - 1). Returns n - mean(Z).

    Single-observable outcomes are Bernoulli draws from the exact <B_ab>.
    """
    if n_trials < 1:
        raise ContractViolationError("n_trials must be at least 1")
    n = state.n_qubits
    pairs = majorana_pairs(n)
    n_pairs = len(pairs)
    gamma = covariance(state).gamma
    means = np.array([gamma[a - 1, b - 1] for a, b in pairs])

    choice = rng.integers(0, n_pairs, size=n_trials)
    prob_plus = (1.0 + means[choice]) / 2.0
    x = np.where(rng.random(n_trials) < prob_plus, 1, -1)
    y = np.where(rng.random(n_trials) < prob_plus, 1, -1)
    z = n_pairs * x * y

    report = sample_mean(z, seed=seed_of(rng))
    report.mean = n - report.mean
    report.raw_batch_means = [n - value for value in report.raw_batch_means]
    report.constants["n_pairs"] = float(n_pairs)
    return report
