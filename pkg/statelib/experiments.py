"""Sweeps and ensemble statistics built on the circuit and state zoo.

Each sweep point, ensemble draw or circuit instance runs on its own child
random stream, so results do not depend on execution order.
"""

import logging
import math
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from config import get_config
from majorana.covariance import faf_k, witness
from protocols.bell import DEFAULT_DELTA, estimate_witness_bell
from qstate.channels import global_depolarize_matrix
from qstate.rng import map_streams, seed_of
from qstate.states import MixedState, PureState, State, purity
from statelib.circuits import brickwork_matchgate, run_circuit, theta_sweep_circuit
from statelib.ensembles import make_state
from statelib.predictions import (
    DEFECT_FAF1,
    cat_faf1,
    depol_predictions,
    haar_faf_mean,
    subset_phase_faf_lower,
    theta_sweep_prediction,
)
from statelib.specs import EnsembleSpec, NoiseSpec
from utils.errors import ContractViolationError

logger = logging.getLogger(__name__)

PREDICTION_TOL = 1e-9


def global_depolarize(psi: PureState, p: float) -> MixedState:
    """(1 - p)|psi><psi| + p I / 2^n."""
    if not 0.0 <= p <= 1.0:
        raise ContractViolationError(f"p must lie in [0, 1], got {p}")
    return MixedState(psi.n_qubits, global_depolarize_matrix(psi.density_matrix(), p))


def _bell_columns(state: State, n_shots: int, delta: float, rng: np.random.Generator) -> Dict[str, Any]:
    if n_shots <= 0:
        return {"witness_est": None, "stderr": None, "shots": 0}
    report = estimate_witness_bell(state, n_shots, delta, rng)
    return {"witness_est": report.mean, "stderr": report.std_error, "shots": report.n_shots}


def theta_sweep_experiment(
    thetas: Sequence[float],
    rng: np.random.Generator,
    noise: Optional[NoiseSpec] = None,
    n_shots: int = 0,
    delta: float = DEFAULT_DELTA,
) -> List[Dict[str, Any]]:
    """
    Exact and Bell-estimated witness of the four-qubit theta-sweep circuit.

    Args:
        thetas: R_zz angles
        rng: Parent generator, split once per theta
        noise: Optional noise after every two-qubit gate
        n_shots: Bell shots per point; 0 skips the estimate
        delta: Median-of-means failure probability

    Returns:
        One row per theta with the columns of the sweep CSV plus the closed form
        (the closed form is only filled for depolarizing noise)
    """
    for theta in thetas:
        if not math.isfinite(theta):
            raise ContractViolationError("theta values must be finite")
    p = noise.strength if noise is not None else 0.0
    depolarizing = noise is None or noise.kind == "depolarizing"
    parent_seed = seed_of(rng)

    def point(stream: np.random.Generator, index: int) -> Dict[str, Any]:
        theta = float(thetas[index])
        rho = run_circuit(theta_sweep_circuit(theta, noise), PureState.basis(0, 4))
        row = {"theta": theta, "p": p, "witness_exact": witness(rho), "seed": parent_seed}
        row.update(_bell_columns(rho, n_shots, delta, stream))
        row["witness_predicted"] = theta_sweep_prediction(theta, p)["witness"] if depolarizing else None
        return row

    rows = map_streams(point, rng, len(thetas))
    logger.info(f"Theta sweep finished: {len(rows)} points, p={p}")
    return rows


def depol_sweep(
    psi: PureState,
    ps: Sequence[float],
    rng: np.random.Generator,
    n_shots: int = 0,
    delta: float = DEFAULT_DELTA,
) -> List[Dict[str, Any]]:
    """
    Witness of a globally depolarized pure state along a p grid.

    The measured faf1, purity and witness are checked against the closed
    form at every point; a mismatch raises ContractViolationError.
    """
    n = psi.n_qubits
    r_psi = n - faf_k(psi, 1)
    parent_seed = seed_of(rng)

    def point(stream: np.random.Generator, index: int) -> Dict[str, Any]:
        p = float(ps[index])
        rho = global_depolarize(psi, p)
        measured = {"faf1": faf_k(rho, 1), "purity": purity(rho), "witness": witness(rho)}
        predicted = depol_predictions(r_psi, p, n)
        for key, value in measured.items():
            if abs(value - predicted[key]) > PREDICTION_TOL:
                raise ContractViolationError(
                    f"Depolarized {key} {value:.12g} differs from closed form {predicted[key]:.12g} at p={p}"
                )
        row = {
            "p": p,
            "faf1": measured["faf1"],
            "purity": measured["purity"],
            "witness_exact": measured["witness"],
            "witness_predicted": predicted["witness"],
            "witness_lower": predicted["witness_lower"],
            "seed": parent_seed,
        }
        row.update(_bell_columns(rho, n_shots, delta, stream))
        return row

    return map_streams(point, rng, len(ps))


def brickwork_witness_dynamics(
    initial: State,
    depth: int,
    noise: Optional[NoiseSpec],
    rng: np.random.Generator,
    instances: Optional[int] = None,
    g: Optional[float] = None,
) -> List[Dict[str, float]]:
    """
    Witness, FAF_1 and purity after each brickwork layer, averaged over
    random circuit instances.

    Args:
        initial: Input state; its qubit count sets the brickwork width
        depth: Number of layers
        noise: Optional noise (``after_layer`` applies it to every qubit per layer)
        rng: Parent generator, split once per instance
        instances: Circuit instances; defaults to the experiment config
        g: Gate strength; defaults to the experiment config

    Returns:
        Rows for depth 0..depth with means and standard errors
    """
    config = get_config().experiment
    instances = instances if instances is not None else config.circuit_instances
    g = g if g is not None else config.brickwork_strength
    n = initial.n_qubits
    if instances < 1:
        raise ContractViolationError("instances must be at least 1")

    def instance(stream: np.random.Generator, _: int) -> np.ndarray:
        spec = brickwork_matchgate(n, depth, g, stream, noise)
        trace = np.zeros((depth + 1, 3))
        trace[0] = [witness(initial), faf_k(initial, 1), purity(initial)]

        def record(layer: int, state: State) -> None:
            trace[layer + 1] = [witness(state), faf_k(state, 1), purity(state)]

        run_circuit(spec, initial, on_layer=record)
        return trace

    traces = np.array(map_streams(instance, rng, instances))
    means = traces.mean(axis=0)
    errors = traces.std(axis=0, ddof=1) / math.sqrt(instances) if instances > 1 else np.zeros_like(means)
    rows = []
    for d in range(depth + 1):
        rows.append({
            "depth": d,
            "witness": float(means[d, 0]),
            "witness_stderr": float(errors[d, 0]),
            "faf1": float(means[d, 1]),
            "purity": float(means[d, 2]),
        })
    return rows


def ensemble_closed_form(spec: EnsembleSpec) -> Optional[float]:
    """Analytic FAF_1 (or its lower bound for subset-phase states) for a family."""
    n = spec.n_qubits
    if spec.kind == "haar":
        return haar_faf_mean(n)
    if spec.kind == "subset_phase":
        return subset_phase_faf_lower(n, spec.q)
    if spec.kind == "cat":
        return cat_faf1(n, spec.epsilon ** 2) if n >= 4 and n % 2 == 0 else None
    if spec.kind == "defect":
        return DEFECT_FAF1
    if spec.kind == "ghz":
        return float(n) if n >= 3 else None
    if spec.kind in ("basis", "gaussian_random"):
        return 0.0
    return None


def ensemble_faf_stats(
    spec: EnsembleSpec, rng: np.random.Generator, draws: Optional[int] = None
) -> Dict[str, Any]:
    """
    Mean and standard error of exact FAF_1 over independent draws.

    Args:
        spec: Ensemble spec
        rng: Parent generator, split once per draw
        draws: Number of draws; defaults to ``spec.draws``

    Returns:
        Dict with mean, std_error, draws, closed_form and min/max
    """
    draws = draws if draws is not None else spec.draws
    if draws < 1:
        raise ContractViolationError("draws must be at least 1")
    values = np.array(map_streams(lambda stream, _: faf_k(make_state(spec, stream), 1), rng, draws))
    std_error = float(values.std(ddof=1) / math.sqrt(draws)) if draws > 1 else 0.0
    logger.info(f"{spec.kind} ensemble over {draws} draws: FAF_1 mean {values.mean():.6f}")
    return {
        "kind": spec.kind,
        "n_qubits": spec.n_qubits,
        "draws": draws,
        "mean": float(values.mean()),
        "std_error": std_error,
        "min": float(values.min()),
        "max": float(values.max()),
        "closed_form": ensemble_closed_form(spec),
    }
