"""
Tests for Majorana operators, covariance matrices and the FAF / witness measures.
"""

import numpy as np
import pytest

from majorana.covariance import (
    CovarianceMatrix,
    covariance,
    covariance_weight,
    distance_bounds,
    faf1_termwise,
    faf_k,
    gaussian_purity,
    witness,
    witness_from_values,
)
from majorana.distance import eps_g_bruteforce
from majorana.gaussian import (
    GaussianParams,
    free_unitary,
    gaussian_mixed,
    gaussian_pure,
    random_generator,
    reference_state,
    thermal_product_state,
)
from majorana.operators import bilinear, jw_majorana, majorana_pairs, quadratic_hamiltonian
from qstate.paulis import PauliString
from qstate.states import MixedState, PureState, apply_full_unitary, haar_state, purity
from statelib.ensembles import cat_state, defect_state, ghz_state
from statelib.predictions import cat_faf1
from utils.errors import ContractViolationError, SizeLimitError


def test_jordan_wigner_strings():
    assert jw_majorana(1, 3) == PauliString(1, "XII")
    assert jw_majorana(4, 3) == PauliString(1, "ZYI")
    assert jw_majorana(5, 3) == PauliString(1, "ZZX")
    with pytest.raises(ContractViolationError):
        jw_majorana(7, 3)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_majoranas_anticommute_and_square_to_one(n):
    for a in range(1, 2 * n + 1):
        gamma_a = jw_majorana(a, n)
        assert gamma_a * gamma_a == PauliString.identity(n)
        for b in range(a + 1, 2 * n + 1):
            assert not gamma_a.commutes_with(jw_majorana(b, n))


def test_on_site_bilinear_is_z():
    assert bilinear(1, 2, 2) == PauliString(1, "ZI")
    assert bilinear(3, 4, 2) == PauliString(1, "IZ")
    assert all(bilinear(a, b, 3).is_hermitian for a, b in majorana_pairs(3))
    assert len(majorana_pairs(4)) == 28


def test_quadratic_hamiltonian_accepts_matrix_or_vector(rng):
    h = random_generator(2, rng)
    flat = h[np.triu_indices(4, k=1)]
    np.testing.assert_allclose(quadratic_hamiltonian(h, 2), quadratic_hamiltonian(flat, 2))


@pytest.mark.parametrize("n", [1, 3, 5])
def test_vacuum_is_pure_gaussian(n):
    cov = covariance(PureState.basis(0, n))
    assert cov.is_pure_gaussian()
    np.testing.assert_allclose(cov.sv, np.ones(n), atol=1e-12)
    assert faf_k(cov) == pytest.approx(0.0, abs=1e-12)
    assert cov.gamma[0, 1] == pytest.approx(1.0)


def test_covariance_rejects_bad_matrices():
    with pytest.raises(ContractViolationError):
        CovarianceMatrix(1, np.array([[0.0, 1.0], [1.0, 0.0]]))
    with pytest.raises(ContractViolationError):
        CovarianceMatrix(1, np.array([[0.0, 2.0], [-2.0, 0.0]]))


@pytest.mark.parametrize("eps2", [0.0, 0.1, 0.5, 0.8])
@pytest.mark.parametrize("n", [4, 6])
def test_cat_faf_matches_closed_form(n, eps2):
    assert faf_k(cat_state(n, np.sqrt(eps2))) == pytest.approx(cat_faf1(n, eps2), abs=1e-9)


@pytest.mark.parametrize("n", [4, 5, 6])
def test_defect_faf_is_four(n):
    assert faf_k(defect_state(n)) == pytest.approx(4.0, abs=1e-9)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_ghz_faf_is_n(n):
    assert faf_k(ghz_state(n)) == pytest.approx(float(n), abs=1e-9)


def test_termwise_and_spectral_faf_agree(rng):
    for n in (2, 3, 4):
        psi = haar_state(n, rng)
        assert faf1_termwise(psi) == pytest.approx(faf_k(psi), abs=1e-9)


def test_higher_orders_dominate(rng):
    psi = haar_state(4, rng)
    values = [faf_k(psi, k) for k in (1, 2, 3)]
    assert values[0] <= values[1] + 1e-12 <= values[2] + 2e-12
    assert all(0.0 <= v <= 4.0 for v in values)
    with pytest.raises(ContractViolationError):
        faf_k(psi, 0)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_random_pure_gaussian_states_have_zero_faf(n, rng):
    for parity in ("even", "odd"):
        psi = gaussian_pure(GaussianParams("unitary", random_generator(n, rng), parity))
        cov = covariance(psi)
        assert cov.is_pure_gaussian(tol=1e-7)
        assert faf_k(cov) == pytest.approx(0.0, abs=1e-9)
        assert witness(psi) == pytest.approx(0.0, abs=1e-9)


def test_free_unitary_preserves_faf(rng):
    psi = haar_state(3, rng)
    moved = apply_full_unitary(psi, free_unitary(random_generator(3, rng), 3))
    assert faf_k(moved) == pytest.approx(faf_k(psi), abs=1e-9)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_mixed_gaussian_witness_is_non_positive(n, rng):
    for _ in range(5):
        rho = gaussian_mixed(GaussianParams("mixed", random_generator(n, rng, scale=0.7)))
        assert witness(rho) <= 1e-9
        assert gaussian_purity(rho) == pytest.approx(purity(rho), abs=1e-9)


def test_thermal_product_state():
    rho = thermal_product_state([0.3, -0.5, 0.9])
    cov = covariance(rho)
    assert cov.gamma[2, 3] == pytest.approx(-0.5)
    assert gaussian_purity(cov) == pytest.approx(purity(rho))
    assert witness(rho) <= 1e-12
    with pytest.raises(ContractViolationError):
        thermal_product_state([1.5])


def test_witness_of_maximally_mixed_state_is_zero():
    assert witness(MixedState.maximally_mixed(3)) == pytest.approx(0.0, abs=1e-12)
    assert witness_from_values(4.0, 1.0, 4) == 4.0


def test_witness_detects_noisy_ghz():
    rho = MixedState(4, 0.9 * ghz_state(4).density_matrix() + 0.1 * np.eye(16) / 16)
    assert witness(rho) > 0


def test_distance_bounds_are_clamped():
    assert distance_bounds(4.0, 4) == (0.25, 1.0)
    assert distance_bounds(-1e-12, 2) == (0.0, 0.0)
    lower, upper = distance_bounds(0.4, 2)
    assert lower == pytest.approx(0.05)
    assert upper == pytest.approx(0.2)


def test_covariance_weight_splits_faf(rng):
    psi = haar_state(3, rng)
    cov = covariance(psi)
    outside = cov.gamma[2:, 2:]
    expected = 3 - covariance_weight(cov, [0]) - 0.5 * np.sum(outside ** 2)
    assert faf_k(cov) == pytest.approx(expected, abs=1e-9)
    assert covariance_weight(cov, [0]) <= 2.0 + 1e-9


def test_reference_state_parities():
    assert reference_state(3, "odd").amplitudes[0b100] == 1
    with pytest.raises(ContractViolationError):
        GaussianParams("unitary", np.ones((2, 2)))


def test_eps_g_of_gaussian_reference_is_zero():
    assert eps_g_bruteforce(PureState.basis("0000"), restarts=1) == pytest.approx(0.0, abs=1e-6)


def test_eps_g_limited_to_four_modes(fresh_config):
    with pytest.raises(SizeLimitError):
        eps_g_bruteforce(PureState.basis("00000"))


@pytest.mark.slow
def test_eps_g_of_cat_state_sits_between_bounds():
    epsilon = 0.3
    psi = cat_state(4, epsilon)
    value = eps_g_bruteforce(psi, np.random.default_rng(5), restarts=2)
    lower, _ = distance_bounds(faf_k(psi), 4)
    assert np.sqrt(lower) - 1e-6 <= value <= epsilon + 1e-6


@pytest.mark.slow
@pytest.mark.parametrize("psi,expected", [
    (cat_state(4, 0.4), 0.4),
    (defect_state(4), np.sqrt(0.5)),
])
def test_eps_g_calibration(psi, expected):
    assert eps_g_bruteforce(psi, np.random.default_rng(3), restarts=2) == pytest.approx(expected, abs=0.02)


@pytest.mark.slow
def test_eps_g_is_sandwiched_by_faf_bounds():
    rng = np.random.default_rng(11)
    for _ in range(10):
        psi = haar_state(4, rng)
        value = eps_g_bruteforce(psi, rng, restarts=2) ** 2
        lower, upper = distance_bounds(faf_k(psi), 4)
        assert lower <= value + 0.03
        assert value <= upper + 0.03
