"""Calibration states and random state families."""

import logging
import math
from typing import Optional

import numpy as np

from majorana.gaussian import GaussianParams, gaussian_pure, random_generator
from qstate.states import PureState, haar_state
from statelib.specs import EnsembleSpec
from utils.errors import ContractViolationError

logger = logging.getLogger(__name__)


def cat_state(n: int, epsilon: float) -> PureState:
    """sqrt(1 - eps^2)|0^n> + eps|1^n>."""
    if not 0.0 <= epsilon <= 1.0:
        raise ContractViolationError(f"epsilon must lie in [0, 1], got {epsilon}")
    vector = np.zeros(1 << n, dtype=np.complex128)
    vector[0] = math.sqrt(1 - epsilon ** 2)
    vector[-1] += epsilon
    return PureState(n, vector)


def ghz_state(n: int) -> PureState:
    return cat_state(n, math.sqrt(0.5))


def defect_state(n: int) -> PureState:
    """(|0000> + |1111>)/sqrt(2) on the first four qubits, |0> elsewhere."""
    if n < 4:
        raise ContractViolationError("The defect state needs at least 4 qubits")
    vector = np.zeros(1 << n, dtype=np.complex128)
    vector[0] = vector[0b1111 << (n - 4)] = 1 / math.sqrt(2)
    return PureState(n, vector)


def plus_state(n: int) -> PureState:
    return PureState(n, np.full(1 << n, 2 ** (-n / 2), dtype=np.complex128))


def subset_phase_state(n: int, q: int, rng: np.random.Generator, random_phases: bool = True) -> PureState:
    """
    Equal-weight superposition over a random subset of 2^q basis states.

    The subset is drawn without replacement; each member carries an
    independent uniform sign when ``random_phases`` is set.
    """
    if not 0 <= q <= n:
        raise ContractViolationError(f"q must lie in [0, n={n}], got {q}")
    size = 1 << q
    support = rng.choice(1 << n, size=size, replace=False)
    signs = rng.choice([-1.0, 1.0], size=size) if random_phases else np.ones(size)
    vector = np.zeros(1 << n, dtype=np.complex128)
    vector[support] = signs / math.sqrt(size)
    return PureState(n, vector)


def gaussian_random_state(n: int, rng: np.random.Generator) -> PureState:
    """Pure Gaussian state from a random generator, even parity sector."""
    return gaussian_pure(GaussianParams("unitary", random_generator(n, rng)))


def make_state(spec: EnsembleSpec, rng: Optional[np.random.Generator] = None) -> PureState:
    """
    Build one draw of the state family described by ``spec``.

    Args:
        spec: Validated ensemble spec
        rng: Generator for random families; defaults to one seeded from ``spec.seed``

    Returns:
        Normalized pure state
    """
    if rng is None:
        rng = np.random.default_rng(spec.seed)
    n = spec.n_qubits

    if spec.kind == "haar":
        return haar_state(n, rng)
    if spec.kind == "subset_phase":
        return subset_phase_state(n, spec.q, rng, spec.random_phases)
    if spec.kind == "gaussian_random":
        return gaussian_random_state(n, rng)
    if spec.kind == "cat":
        return cat_state(n, spec.epsilon)
    if spec.kind == "defect":
        return defect_state(n)
    if spec.kind == "basis":
        return PureState.basis(spec.bits)
    if spec.kind == "ghz":
        return ghz_state(n)
    return plus_state(n)
