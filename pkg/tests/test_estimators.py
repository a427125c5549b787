"""
Tests for median-of-means aggregation and the report models.
"""

import numpy as np
import pytest

from protocols.estimators import (
    EstimateReport,
    TestVerdict,
    batch_means,
    check_delta,
    check_epsilon,
    median_of_means,
    median_of_repetitions,
    mom_batches,
    sample_mean,
    spread_error,
)
from utils.errors import ContractViolationError


@pytest.mark.parametrize("delta,expected", [(0.05, 24), (0.5, 6), (0.01, 37), (0.9, 1)])
def test_batch_count(delta, expected, fresh_config):
    assert mom_batches(delta) == expected


def test_batch_count_follows_env(monkeypatch, fresh_config):
    from config import reset_config

    monkeypatch.setenv("FERMIPROBE_MOM_CONSTANT", "2")
    reset_config()
    assert mom_batches(0.05) == 6


@pytest.mark.parametrize("bad", [0.0, 1.0, -0.2, 1.5])
def test_delta_range(bad):
    with pytest.raises(ContractViolationError):
        check_delta(bad)


def test_epsilon_range():
    assert check_epsilon(1.0) == 1.0
    with pytest.raises(ContractViolationError):
        check_epsilon(0.0)


def test_batch_means_discard_remainder():
    np.testing.assert_allclose(batch_means(np.arange(10), 3), [1.0, 4.0, 7.0])
    with pytest.raises(ContractViolationError):
        batch_means(np.arange(2), 3)


def test_spread_error_single_batch_uses_shots():
    samples = np.array([0.0, 2.0, 4.0, 6.0])
    expected = np.std(samples, ddof=1) / 2
    assert spread_error(samples, np.array([3.0])) == pytest.approx(expected)
    assert spread_error(np.array([1.0]), np.array([1.0])) == 0.0


def test_median_of_means_is_robust_to_outlier_batch():
    samples = np.ones(30)
    samples[:3] = 1000.0
    report = median_of_means(samples, 0.5, seed=4, n_batches=10)
    assert report.mean == 1.0
    assert report.n_batches == 10
    assert report.n_shots == 30
    assert report.seed == 4
    assert report.raw_batch_means[0] == 1000.0


def test_constant_samples_have_zero_error(fresh_config):
    report = median_of_means(np.full(100, 2.5), 0.05)
    assert report.mean == 2.5
    assert report.std_error == 0.0
    assert report.constants["mom_constant"] == 8.0


def test_median_of_repetitions():
    report = median_of_repetitions(np.array([1.0, 2.0, 10.0]), n_shots=300)
    assert report.mean == 2.0
    assert report.n_batches == 3
    assert report.std_error == pytest.approx(np.std([1.0, 2.0, 10.0], ddof=1) / np.sqrt(3))


def test_rejecting_verdict_needs_evidence():
    with pytest.raises(ValueError):
        TestVerdict(accept=False, n_shots_used=3, epsilon=0.5, delta=0.1, budget=10)
    verdict = TestVerdict(
        accept=False, n_shots_used=3, epsilon=0.5, delta=0.1, budget=10, evidence={"lambda": 2}
    )
    assert verdict.model_dump()["evidence"] == {"lambda": 2}


def test_report_rejects_negative_error():
    with pytest.raises(ValueError):
        EstimateReport(mean=0.0, std_error=-1.0, n_shots=1, n_batches=1)


def test_sample_mean_accepts_any_nonempty_record():
    report = sample_mean(np.array([1.0]), seed=3)
    assert report.mean == 1.0
    assert report.std_error == 0.0
    assert report.n_batches == 1
    assert report.seed == 3

    values = np.array([1.0, -1.0, 1.0, 1.0])
    report = sample_mean(values)
    assert report.mean == pytest.approx(0.5)
    assert report.std_error == pytest.approx(np.std(values, ddof=1) / 2)
    assert report.constants == {}

    with pytest.raises(ContractViolationError):
        sample_mean(np.array([]))
