"""Brute-force distance from a pure state to the nearest pure Gaussian state."""

import logging
from typing import Optional

import numpy as np
from scipy.linalg import expm
from scipy.optimize import minimize

from config import get_config
from majorana.gaussian import PARITIES, reference_state
from majorana.operators import bilinear_stack
from qstate.rng import make_rng, map_streams
from qstate.states import PureState
from utils.errors import SizeLimitError

logger = logging.getLogger(__name__)


def _overlap_objective(psi: np.ndarray, reference: np.ndarray, stack: np.ndarray):
    def negative_overlap(theta: np.ndarray) -> float:
        unitary = expm(-0.5j * np.tensordot(theta, stack, axes=1))
        return -float(np.abs(np.vdot(psi, unitary @ reference)) ** 2)

    return negative_overlap


def eps_g_bruteforce(
    psi: PureState,
    rng: Optional[np.random.Generator] = None,
    restarts: Optional[int] = None,
) -> float:
    """
    Upper estimate of the trace distance to the closest pure Gaussian state.

    Maximizes |<psi|U(h)|ref>|^2 over free unitaries U(h) with Nelder-Mead,
    for both parity references. The first start of each sector is h = 0;
    the rest are uniform in [-pi, pi].

    Args:
        psi: Pure state on n <= optimizer.max_modes qubits
        rng: Generator for the random starts (seed 0 if omitted)
        restarts: Starts per parity sector (config default if omitted)

    Returns:
        sqrt(1 - max overlap^2)
    """
    opt = get_config().optimizer
    n = psi.n_qubits
    if n > opt.max_modes:
        raise SizeLimitError(f"Gaussian distance search is limited to {opt.max_modes} modes, got {n}")

    rng = rng if rng is not None else make_rng(0)
    restarts = restarts if restarts is not None else opt.restarts
    stack = bilinear_stack(n)
    n_params = stack.shape[0]

    def run_start(stream: np.random.Generator, index: int) -> float:
        parity = PARITIES[index % 2]
        attempt = index // 2
        reference = reference_state(n, parity).amplitudes
        objective = _overlap_objective(psi.amplitudes, reference, stack)
        if attempt == 0:
            start = np.zeros(n_params)
        else:
            start = stream.uniform(-np.pi, np.pi, size=n_params)
        result = minimize(
            objective,
            start,
            method="Nelder-Mead",
            options={
                "xatol": opt.xatol,
                "fatol": opt.fatol,
                "maxiter": opt.max_iter,
                "adaptive": True,
            },
        )
        return -float(result.fun)

    overlaps = map_streams(run_start, rng, 2 * restarts)
    best = min(max(overlaps), 1.0)
    logger.debug(f"Gaussian overlap search over {2 * restarts} starts: best overlap^2 {best:.9f}")
    return float(np.sqrt(max(0.0, 1.0 - best)))
