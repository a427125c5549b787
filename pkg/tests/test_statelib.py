"""
Tests for the state zoo, ensemble statistics and closed-form predictions.
"""

import math

import numpy as np
import pytest
from pydantic import ValidationError

from majorana.covariance import faf_k, witness
from qstate.states import purity
from statelib.ensembles import (
    cat_state,
    defect_state,
    gaussian_random_state,
    make_state,
    plus_state,
    subset_phase_state,
)
from statelib.experiments import (
    depol_sweep,
    ensemble_closed_form,
    ensemble_faf_stats,
    global_depolarize,
)
from statelib.predictions import (
    depol_predictions,
    haar_faf_mean,
    nongaussian_gate_lower_bound,
    r_from_faf1,
    subset_phase_faf_lower,
)
from statelib.specs import EnsembleSpec
from utils.errors import ContractViolationError


def test_cat_endpoints():
    assert cat_state(4, 0.0).amplitudes[0] == 1
    assert cat_state(4, 1.0).amplitudes[-1] == 1
    with pytest.raises(ContractViolationError):
        cat_state(4, 1.2)


def test_defect_support():
    psi = defect_state(6)
    assert np.flatnonzero(psi.amplitudes).tolist() == [0, 0b111100]
    with pytest.raises(ContractViolationError):
        defect_state(3)


def test_plus_state_is_flat():
    np.testing.assert_allclose(np.abs(plus_state(3).amplitudes) ** 2, np.full(8, 1 / 8))


def test_subset_phase_support(rng):
    psi = subset_phase_state(5, 3, rng)
    support = np.flatnonzero(psi.amplitudes)
    assert support.shape[0] == 8
    np.testing.assert_allclose(np.abs(psi.amplitudes[support]), np.full(8, 1 / math.sqrt(8)))

    flat = subset_phase_state(3, 3, rng, random_phases=False)
    np.testing.assert_allclose(flat.amplitudes, np.full(8, 1 / math.sqrt(8)))


def test_make_state_is_seeded():
    spec = EnsembleSpec(kind="haar", n_qubits=3, seed=5)
    np.testing.assert_allclose(make_state(spec).amplitudes, make_state(spec).amplitudes)
    basis = make_state(EnsembleSpec(kind="basis", n_qubits=3, bits="101"))
    assert basis.amplitudes[0b101] == 1
    assert faf_k(make_state(EnsembleSpec(kind="ghz", n_qubits=4))) == pytest.approx(4.0)


@pytest.mark.parametrize("fields", [
    {"kind": "subset_phase", "n_qubits": 3},
    {"kind": "subset_phase", "n_qubits": 3, "q": 4},
    {"kind": "cat", "n_qubits": 4},
    {"kind": "defect", "n_qubits": 3},
    {"kind": "basis", "n_qubits": 3, "bits": "10"},
    {"kind": "haar", "n_qubits": 0},
    {"kind": "gaussian", "n_qubits": 2},
])
def test_invalid_ensemble_specs(fields):
    with pytest.raises(ValidationError):
        EnsembleSpec(**fields)


def test_gaussian_random_states_have_zero_faf(rng):
    for n in (2, 4):
        assert faf_k(gaussian_random_state(n, rng)) == pytest.approx(0.0, abs=1e-9)


def test_closed_forms():
    assert haar_faf_mean(4) == pytest.approx(4 - 28 / 17)
    assert haar_faf_mean(1) == pytest.approx(2 / 3)
    assert subset_phase_faf_lower(6, 4) == pytest.approx(1.875)
    with pytest.raises(ContractViolationError):
        subset_phase_faf_lower(3, 4)
    assert r_from_faf1(1.5, 4) == 2.5
    assert r_from_faf1(-1e-12, 2) == 2.0


@pytest.mark.parametrize("target,m,expected", [(0.0, 1, 0), (-1.0, 2, 0), (4.0, 2, 1), (8.0, 1, 2), (4.0, 1, 1)])
def test_gate_count_lower_bound(target, m, expected):
    assert nongaussian_gate_lower_bound(target, m) == expected


def test_gate_count_needs_positive_width():
    with pytest.raises(ContractViolationError):
        nongaussian_gate_lower_bound(1.0, 0)


def test_depol_predictions_at_full_noise():
    values = depol_predictions(2.5, 1.0, 4)
    assert values["faf1"] == 4.0
    assert values["purity"] == pytest.approx(1 / 16)
    assert values["witness"] == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(ContractViolationError):
        depol_predictions(1.0, 1.5, 2)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
@pytest.mark.parametrize("p", [0.0, 0.05, 0.3, 0.7, 1.0])
def test_global_depolarizing_matches_closed_form(n, p, rng):
    psi = make_state(EnsembleSpec(kind="haar", n_qubits=n), rng)
    r_psi = n - faf_k(psi)
    rho = global_depolarize(psi, p)
    predicted = depol_predictions(r_psi, p, n)
    assert faf_k(rho) == pytest.approx(predicted["faf1"], abs=1e-9)
    assert purity(rho) == pytest.approx(predicted["purity"], abs=1e-9)
    assert witness(rho) == pytest.approx(predicted["witness"], abs=1e-9)
    assert predicted["witness"] >= predicted["witness_lower"] - 1e-9


def test_depol_sweep_rows(rng):
    ps = [0.0, 0.1, 0.5, 1.0]
    rows = depol_sweep(cat_state(4, math.sqrt(0.5)), ps, rng)
    assert [row["p"] for row in rows] == ps
    assert rows[0]["witness_exact"] == pytest.approx(4.0)
    assert rows[-1]["witness_exact"] == pytest.approx(0.0, abs=1e-9)
    assert all(row["witness_est"] is None for row in rows)
    witnesses = [row["witness_exact"] for row in rows]
    assert witnesses == sorted(witnesses, reverse=True)


def test_depol_sweep_with_shots(rng):
    rows = depol_sweep(cat_state(4, math.sqrt(0.5)), [0.0], rng, n_shots=50_000)
    assert rows[0]["shots"] == 50_000
    assert rows[0]["witness_est"] == pytest.approx(4.0, abs=0.2)


def test_ensemble_closed_form_table():
    assert ensemble_closed_form(EnsembleSpec(kind="cat", n_qubits=4, epsilon=math.sqrt(0.5))) == pytest.approx(4.0)
    assert ensemble_closed_form(EnsembleSpec(kind="cat", n_qubits=3, epsilon=0.5)) is None
    assert ensemble_closed_form(EnsembleSpec(kind="defect", n_qubits=5)) == 4.0
    assert ensemble_closed_form(EnsembleSpec(kind="plus", n_qubits=2)) is None


def test_fixed_ensemble_has_no_spread(rng):
    stats = ensemble_faf_stats(EnsembleSpec(kind="defect", n_qubits=4), rng, draws=3)
    assert stats["mean"] == pytest.approx(4.0)
    assert stats["std_error"] == pytest.approx(0.0, abs=1e-12)
    assert stats["closed_form"] == 4.0


def test_haar_ensemble_mean(rng):
    stats = ensemble_faf_stats(EnsembleSpec(kind="haar", n_qubits=4), rng, draws=200)
    assert stats["mean"] == pytest.approx(haar_faf_mean(4), abs=0.1)
    assert stats["draws"] == 200


@pytest.mark.slow
def test_subset_phase_mean_exceeds_lower_bound(rng):
    spec = EnsembleSpec(kind="subset_phase", n_qubits=6, q=4)
    stats = ensemble_faf_stats(spec, rng, draws=500)
    assert stats["mean"] >= subset_phase_faf_lower(6, 4) - 3 * stats["std_error"]
    assert stats["closed_form"] == pytest.approx(1.875)


def test_ensemble_stats_are_reproducible():
    spec = EnsembleSpec(kind="haar", n_qubits=3)
    first = ensemble_faf_stats(spec, np.random.default_rng(9), draws=10)
    second = ensemble_faf_stats(spec, np.random.default_rng(9), draws=10)
    assert first == second
