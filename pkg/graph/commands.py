"""Command handlers: turn a validated RunConfig into results.

Each handler returns a ``CommandResult``; the pipeline nodes decide how
it is reported.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional

import numpy as np

from config import get_config
from graph.state import RunConfig
from majorana.covariance import distance_bounds, faf_k, gaussian_purity, witness
from protocols.bell import (
    BellRecord,
    bell_gaussianity_test,
    estimate_coherence_bell,
    estimate_faf1_from_record,
    estimate_purity_bell,
    estimate_witness_from_record,
    sample_bell_record,
)
from protocols.estimators import TestVerdict
from protocols.matching import (
    LayerShotMatrix,
    build_layers,
    estimate_faf1_single,
    sample_layer_batch,
    single_copy_test,
)
from qstate.channels import global_depolarize_matrix
from qstate.rng import make_rng, split_rng
from qstate.states import MixedState, PureState, State, purity
from statelib.circuits import run_circuit
from statelib.ensembles import make_state
from statelib.experiments import (
    brickwork_witness_dynamics,
    depol_sweep,
    ensemble_faf_stats,
    global_depolarize,
    theta_sweep_experiment,
)
from statelib.specs import CircuitSpec, EnsembleSpec, NoiseSpec
from utils.errors import ContractViolationError

logger = logging.getLogger(__name__)

SWEEP_COLUMNS = ("theta", "p", "witness_exact", "witness_est", "stderr", "shots", "seed", "witness_predicted")

_KIND_NAMES = {"subset-phase": "subset_phase", "gaussian-random": "gaussian_random"}


@dataclass
class CommandResult:
    """What a command produced."""

    results: Dict[str, Any] = field(default_factory=dict)
    rows: List[Dict[str, Any]] = field(default_factory=list)
    constants: Dict[str, Any] = field(default_factory=dict)
    verdict: Optional[bool] = None
    record: Optional[BellRecord] = None
    layer_shots: Optional[List[LayerShotMatrix]] = None


def run_streams(config: RunConfig) -> List[np.random.Generator]:
    """Two independent streams from the run seed: state preparation, then sampling."""
    return split_rng(make_rng(config.seed), 2)


def ensemble_spec(config: RunConfig) -> EnsembleSpec:
    """EnsembleSpec from ``--state-json`` or from the named-state flags."""
    if config.state_json is not None:
        return EnsembleSpec.model_validate(config.state_json)
    kind = _KIND_NAMES.get(config.state, config.state)
    n = len(config.bits) if kind == "basis" else config.n
    return EnsembleSpec(
        kind=kind,
        n_qubits=n,
        draws=config.draws or 1,
        seed=config.seed,
        epsilon=math.sqrt(config.eps2) if config.eps2 is not None else None,
        q=config.q,
        bits=config.bits,
    )


def prepare_state(config: RunConfig, rng: np.random.Generator) -> State:
    """
    Build the input state: named or JSON state, then the optional circuit,
    then optional global depolarizing.
    """
    state: State = make_state(ensemble_spec(config), rng)
    if config.circuit is not None:
        state = run_circuit(CircuitSpec.model_validate(config.circuit), state)
    if config.p is not None:
        if isinstance(state, PureState):
            state = global_depolarize(state, config.p)
        else:
            state = MixedState(state.n_qubits, global_depolarize_matrix(state.matrix, config.p))
    return state


def _state_summary(state: State) -> Dict[str, Any]:
    return {"n_qubits": state.n_qubits, "mixed": isinstance(state, MixedState)}


def run_faf(config: RunConfig, state: State, rng: np.random.Generator) -> CommandResult:
    value = faf_k(state, config.k)
    faf1 = value if config.k == 1 else faf_k(state, 1)
    results = {**_state_summary(state), "k": config.k, "faf_k": value, "faf1": faf1}
    if isinstance(state, PureState):
        lower, upper = distance_bounds(faf1, state.n_qubits)
        results.update({"eps_g_sq_lower": lower, "eps_g_sq_upper": upper})
    return CommandResult(results=results)


def run_witness(config: RunConfig, state: State, rng: np.random.Generator) -> CommandResult:
    return CommandResult(results={
        **_state_summary(state),
        "witness": witness(state),
        "faf1": faf_k(state, 1),
        "purity": purity(state),
        "gaussian_purity": gaussian_purity(state),
    })


def run_bell_estimate(config: RunConfig, state: State, rng: np.random.Generator) -> CommandResult:
    record = sample_bell_record(state, config.shots, rng)
    faf1 = estimate_faf1_from_record(record, config.delta)
    purity_report = estimate_purity_bell(record)
    coherence = estimate_coherence_bell(record)
    witness_report = estimate_witness_from_record(record, config.delta)
    results = {
        **_state_summary(state),
        "faf1_est": faf1.mean,
        "faf1_stderr": faf1.std_error,
        "purity_est": purity_report.mean,
        "purity_stderr": purity_report.std_error,
        "coherence_est": coherence.mean,
        "coherence_stderr": coherence.std_error,
        "witness_est": witness_report.mean,
        "witness_stderr": witness_report.std_error,
        "faf1_exact": faf_k(state, 1),
        "purity_exact": purity(state),
        "witness_exact": witness(state),
        "shots": len(record),
    }
    if witness_report.warning:
        results["warning"] = witness_report.warning
    constants = {**faf1.constants, "n_batches": faf1.n_batches}
    return CommandResult(results=results, constants=constants, record=record)


def run_single_estimate(config: RunConfig, state: State, rng: np.random.Generator) -> CommandResult:
    estimate_rng, record_rng = split_rng(rng, 2)
    report = estimate_faf1_single(state, config.shots, config.delta, estimate_rng)
    results = {
        **_state_summary(state),
        "faf1_est": report.mean,
        "faf1_stderr": report.std_error,
        "faf1_exact": faf_k(state, 1),
        "shots": report.n_shots,
    }
    layer_shots = None
    if config.records:
        layers = build_layers(state.n_qubits)
        layer_shots = [sample_layer_batch(state, layer, config.shots, record_rng) for layer in layers]
    return CommandResult(
        results=results,
        constants={**report.constants, "repetitions": report.n_batches},
        layer_shots=layer_shots,
    )


def _verdict_result(state: State, verdict: TestVerdict) -> CommandResult:
    results = {
        **_state_summary(state),
        "verdict": "ACCEPT" if verdict.accept else "REJECT",
        "n_shots_used": verdict.n_shots_used,
        "budget": verdict.budget,
    }
    if verdict.evidence:
        results["evidence"] = verdict.evidence
    return CommandResult(results=results, constants=dict(verdict.constants), verdict=verdict.accept)


def run_test_bell(config: RunConfig, state: State, rng: np.random.Generator) -> CommandResult:
    return _verdict_result(state, bell_gaussianity_test(state, config.epsilon, config.delta, rng))


def run_test_single(config: RunConfig, state: State, rng: np.random.Generator) -> CommandResult:
    return _verdict_result(state, single_copy_test(state, config.epsilon, config.delta, rng))


def _ordered(row: Dict[str, Any], seed: Optional[int]) -> Dict[str, Any]:
    row = {**row, "seed": seed}
    return {key: row.get(key) for key in SWEEP_COLUMNS}


def run_sweep_theta(config: RunConfig, state: Optional[State], rng: np.random.Generator) -> CommandResult:
    ps = config.ps or [0.0, get_config().experiment.hardware_depolarizing]
    kind = config.noise or "depolarizing"
    rows: List[Dict[str, Any]] = []
    for p, stream in zip(ps, split_rng(rng, len(ps))):
        noise = NoiseSpec(kind=kind, strength=p) if p > 0 else None
        sweep = theta_sweep_experiment(config.thetas, stream, noise, config.shots or 0, config.delta)
        rows += [_ordered(row, config.seed) for row in sweep]
    return CommandResult(
        results={"points": len(rows), "noise": kind},
        rows=rows,
        constants={"mom_constant": get_config().estimator.mom_constant},
    )


def run_sweep_depol(config: RunConfig, state: State, rng: np.random.Generator) -> CommandResult:
    if not isinstance(state, PureState):
        raise ContractViolationError("sweep-depol needs a pure input state (no --circuit noise or --p)")
    rows = depol_sweep(state, config.ps, rng, config.shots or 0, config.delta)
    for row in rows:
        row["seed"] = config.seed
    return CommandResult(
        results={"n_qubits": state.n_qubits, "faf1_pure": faf_k(state, 1), "points": len(rows)},
        rows=rows,
    )


def run_brickwork(config: RunConfig, state: Optional[State], rng: np.random.Generator) -> CommandResult:
    noise = None
    if config.noise is not None:
        noise = NoiseSpec(kind=config.noise, strength=config.noise_strength, placement="after_layer")
    experiment = get_config().experiment
    instances = config.instances or experiment.circuit_instances
    rows = brickwork_witness_dynamics(
        PureState.basis(0, config.n), config.depth, noise, rng, instances=instances
    )
    return CommandResult(
        results={"n_qubits": config.n, "depth": config.depth, "final_witness": rows[-1]["witness"]},
        rows=rows,
        constants={"instances": instances, "brickwork_strength": experiment.brickwork_strength},
    )


def run_layers(config: RunConfig, state: Optional[State], rng: np.random.Generator) -> CommandResult:
    layers = build_layers(config.n)
    rows = [
        {"layer": layer.index, "pairs": " ".join(f"({a},{b})" for a, b in layer.pairs)}
        for layer in layers
    ]
    n_pairs = sum(len(layer.pairs) for layer in layers)
    return CommandResult(results={"n_layers": len(layers), "n_pairs": n_pairs}, rows=rows)


def run_ensemble_stats(config: RunConfig, state: Optional[State], rng: np.random.Generator) -> CommandResult:
    spec = ensemble_spec(config)
    return CommandResult(results=ensemble_faf_stats(spec, rng, config.draws))


Handler = Callable[[RunConfig, Optional[State], np.random.Generator], CommandResult]

HANDLERS: Dict[str, Handler] = {
    "faf": run_faf,
    "witness": run_witness,
    "bell-estimate": run_bell_estimate,
    "single-estimate": run_single_estimate,
    "test-bell": run_test_bell,
    "test-single": run_test_single,
    "sweep-theta": run_sweep_theta,
    "sweep-depol": run_sweep_depol,
    "brickwork": run_brickwork,
    "layers": run_layers,
    "ensemble-stats": run_ensemble_stats,
}

# Commands that take a prepared input state
STATEFUL = ("faf", "witness", "bell-estimate", "single-estimate", "test-bell", "test-single", "sweep-depol")
