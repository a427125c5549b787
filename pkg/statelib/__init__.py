"""State and circuit zoo with closed-form reference values."""

from .specs import CircuitSpec, EnsembleSpec, MatchgateOp, NoiseSpec, RxxOp, RzOp, RzzOp
from .ensembles import cat_state, defect_state, ghz_state, make_state, plus_state, subset_phase_state
from .predictions import (
    cat_faf1,
    depol_predictions,
    haar_faf_mean,
    nongaussian_gate_lower_bound,
    subset_phase_faf_lower,
    theta_sweep_prediction,
)
from .circuits import brickwork_matchgate, matchgate_unitary, run_circuit, theta_sweep_circuit
from .experiments import (
    brickwork_witness_dynamics,
    depol_sweep,
    ensemble_faf_stats,
    global_depolarize,
    theta_sweep_experiment,
)

__all__ = [
    "CircuitSpec",
    "EnsembleSpec",
    "MatchgateOp",
    "NoiseSpec",
    "RxxOp",
    "RzOp",
    "RzzOp",
    "cat_state",
    "defect_state",
    "ghz_state",
    "make_state",
    "plus_state",
    "subset_phase_state",
    "cat_faf1",
    "depol_predictions",
    "haar_faf_mean",
    "nongaussian_gate_lower_bound",
    "subset_phase_faf_lower",
    "theta_sweep_prediction",
    "brickwork_matchgate",
    "matchgate_unitary",
    "run_circuit",
    "theta_sweep_circuit",
    "brickwork_witness_dynamics",
    "depol_sweep",
    "ensemble_faf_stats",
    "global_depolarize",
    "theta_sweep_experiment",
]
