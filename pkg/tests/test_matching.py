"""
Tests for the single-copy protocol: commuting layers, U-statistics,
the FAF_1 estimator and the single-copy tester.
"""

import numpy as np
import pytest

from majorana.covariance import faf_k
from majorana.operators import majorana_pairs
from protocols.bell import estimate_faf1_bell
from protocols.matching import (
    LayerShotMatrix,
    MeasurementLayer,
    build_layers,
    estimate_faf1_single,
    layer_distribution,
    layer_shots_per_tester,
    randomized_pair_estimate,
    sample_layer,
    sample_layer_batch,
    single_copy_test,
    u_statistic,
)
from protocols.records import layer_rows, write_layer_csv
from qstate.states import MixedState, PureState, expectation, haar_state
from statelib.ensembles import cat_state, defect_state, gaussian_random_state, ghz_state, plus_state
from statelib.experiments import global_depolarize
from utils.errors import ContractViolationError


@pytest.mark.parametrize("n", range(1, 17))
def test_layers_partition_all_pairs(n):
    layers = build_layers(n)
    assert len(layers) == 2 * n - 1
    covered = [pair for layer in layers for pair in layer.pairs]
    assert len(covered) == len(set(covered)) == n * (2 * n - 1)
    assert set(covered) == set(majorana_pairs(n))


@pytest.mark.parametrize("n", [2, 3, 5, 8])
def test_layer_observables_commute(n):
    for layer in build_layers(n):
        observables = layer.observables
        for i, left in enumerate(observables):
            for right in observables[i + 1:]:
                assert left.commutes_with(right)


def test_two_mode_layers():
    assert [layer.pairs for layer in build_layers(2)] == [
        ((1, 4), (2, 3)),
        ((2, 4), (1, 3)),
        ((3, 4), (1, 2)),
    ]


def test_layer_must_be_a_matching():
    with pytest.raises(ContractViolationError):
        MeasurementLayer(1, 2, ((1, 2), (2, 3)))
    with pytest.raises(ContractViolationError):
        MeasurementLayer(1, 2, ((2, 1), (3, 4)))


def test_vacuum_readout_is_deterministic(rng):
    layer = build_layers(2)[2]
    for _ in range(5):
        np.testing.assert_array_equal(sample_layer(PureState.basis("00"), layer, rng), [1, 1])


def test_layer_law_does_not_depend_on_order(rng):
    psi = haar_state(3, rng)
    for layer in build_layers(3):
        forward = layer_distribution(psi, layer)
        backward = layer_distribution(psi, layer, order=[2, 1, 0])
        assert forward.sum() == pytest.approx(1.0)
        np.testing.assert_allclose(forward, backward, atol=1e-10)


def test_layer_must_match_state(rng):
    with pytest.raises(ContractViolationError):
        sample_layer(haar_state(2, rng), build_layers(3)[0], rng)


def test_u_statistic_value():
    shots = LayerShotMatrix(1, np.array([[1, 1], [1, -1], [1, 1]]))
    assert u_statistic(shots) == pytest.approx(4 / 6)
    with pytest.raises(ContractViolationError):
        u_statistic(LayerShotMatrix(1, np.array([[1, 1]])))
    with pytest.raises(ContractViolationError):
        LayerShotMatrix(1, np.array([[1, 0]]))


def test_batch_matches_layer_expectations(rng):
    psi = haar_state(2, rng)
    layer = build_layers(2)[0]
    shots = sample_layer_batch(psi, layer, 20_000, rng)
    assert shots.n_shots == 20_000
    for e, observable in enumerate(layer.observables):
        assert shots.outcomes[:, e].mean() == pytest.approx(expectation(psi, observable), abs=0.05)


def _mixture(n, rng):
    weights = rng.dirichlet(np.ones(3))
    return MixedState(n, sum(w * haar_state(n, rng).density_matrix() for w in weights))


def test_u_statistic_is_unbiased_per_layer(rng):
    states = [haar_state(3, rng) for _ in range(3)] + [_mixture(3, rng) for _ in range(2)]
    repetitions, shots = 2000, 8
    for state in states:
        for layer in build_layers(3):
            law = layer_distribution(state, layer)
            values = np.array([
                u_statistic(sample_layer_batch(state, layer, shots, rng, distribution=law))
                for _ in range(repetitions)
            ])
            exact = sum(expectation(state, observable) ** 2 for observable in layer.observables)
            std_error = values.std(ddof=1) / np.sqrt(repetitions)
            assert abs(values.mean() - exact) <= 4 * std_error + 1e-9


@pytest.mark.parametrize("psi,expected", [
    (PureState.basis("0000"), 0.0),
    (cat_state(4, np.sqrt(0.5)), 4.0),
])
def test_single_copy_estimate(psi, expected, rng):
    report = estimate_faf1_single(psi, 500, 0.05, rng)
    assert abs(report.mean - expected) < 4 * report.std_error + 0.1
    assert report.n_batches == 24
    assert report.n_shots == 24 * 7 * 500


def test_tester_shot_count_is_minimal():
    for n, eta in [(2, 0.5), (4, 0.125), (6, 0.05)]:
        m = layer_shots_per_tester(n, eta)
        target = (eta / 2) ** 2
        assert n ** 2 / m + n ** 3 / m ** 2 <= target
        assert n ** 2 / (m - 1) + n ** 3 / (m - 1) ** 2 > target


def test_single_copy_tester():
    accept = single_copy_test(PureState.basis("0000"), 0.5, 0.05, np.random.default_rng(2))
    assert accept.accept
    assert accept.constants["eta"] == 0.125

    reject = single_copy_test(defect_state(4), 0.5, 0.05, np.random.default_rng(3))
    assert not reject.accept
    assert reject.evidence["threshold"] == 0.25


@pytest.mark.parametrize("psi,expected", [
    (PureState.basis("0000"), 0.0),
    (cat_state(4, np.sqrt(0.5)), 4.0),
])
def test_randomized_pair_baseline(psi, expected, rng):
    report = randomized_pair_estimate(psi, 20_000, rng)
    assert abs(report.mean - expected) < 4 * report.std_error + 0.05
    assert report.constants == {"n_pairs": 28.0}
    assert report.n_batches == 1


def test_layer_csv(tmp_path):
    shots = [LayerShotMatrix(1, np.array([[1, -1], [1, 1]])), LayerShotMatrix(2, np.array([[-1, -1]]))]
    assert layer_rows(shots)[2] == [2, 0, -1, -1]
    path = write_layer_csv(shots, tmp_path / "layers.csv")
    lines = path.read_text().splitlines()
    assert lines[0] == "layer,shot,x_1,x_2"
    assert lines[1] == "1,0,1,-1"
    assert len(lines) == 4


def _estimator_panel(rng):
    return [
        PureState.basis("000"),
        cat_state(3, np.sqrt(0.5)),
        ghz_state(3),
        plus_state(3),
        haar_state(3, rng),
        haar_state(3, rng),
        MixedState.maximally_mixed(3),
        global_depolarize(cat_state(4, np.sqrt(0.5)), 0.3),
        defect_state(4),
        gaussian_random_state(4, rng),
    ]


@pytest.mark.slow
def test_estimators_agree_on_panel():
    rng = np.random.default_rng(99)
    for state in _estimator_panel(rng):
        exact = faf_k(state)
        bell = estimate_faf1_bell(state, 48_000, 0.05, rng)
        single = estimate_faf1_single(state, 500, 0.05, rng)
        randomized = randomized_pair_estimate(state, 200_000, rng)
        for report in (bell, single, randomized):
            assert abs(report.mean - exact) <= 4 * report.std_error + 0.1
        combined = np.hypot(bell.std_error, single.std_error)
        assert abs(bell.mean - single.mean) <= 4 * combined + 0.1
