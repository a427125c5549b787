"""Estimate and verdict models plus median-of-means aggregation."""

import logging
import math
from typing import Any, Dict, List, Optional

import numpy as np
from pydantic import BaseModel, Field, model_validator

from config import get_config
from utils.errors import ContractViolationError

logger = logging.getLogger(__name__)


class EstimateReport(BaseModel):
    """Result of a shot-based estimator."""

    mean: float = Field(description="Point estimate: median of batch means, or the plain mean when n_batches is 1")
    std_error: float = Field(ge=0.0, description="Standard error from the batch spread")
    n_shots: int = Field(ge=0, description="Shots consumed, including discarded remainder")
    n_batches: int = Field(ge=1, description="Median-of-means batch count")
    raw_batch_means: Optional[List[float]] = Field(default=None, description="Per-batch means")
    seed: Optional[int] = Field(default=None, description="Seed of the generator that produced the shots")
    warning: Optional[str] = Field(default=None, description="Set when the estimate is degenerate")
    constants: Dict[str, float] = Field(
        default_factory=dict, description="Constants chosen for the shot formulas"
    )


class TestVerdict(BaseModel):
    """Outcome of a Gaussianity test."""

    __test__ = False  # not a pytest class

    accept: bool = Field(description="True if the state was accepted as Gaussian")
    n_shots_used: int = Field(ge=0, description="Shots actually consumed")
    epsilon: float = Field(gt=0.0, le=1.0, description="Distance parameter")
    delta: float = Field(gt=0.0, lt=1.0, description="Failure probability")
    evidence: Optional[Dict[str, Any]] = Field(default=None, description="First rejecting sample or estimate")
    budget: int = Field(ge=0, description="Shot budget the test was allowed")
    constants: Dict[str, float] = Field(default_factory=dict, description="Constants in the budget formula")

    @model_validator(mode="after")
    def rejection_has_evidence(self) -> "TestVerdict":
        if not self.accept and not self.evidence:
            raise ValueError("A rejecting verdict must carry evidence")
        return self


def check_delta(delta: float) -> float:
    if not 0.0 < delta < 1.0:
        raise ContractViolationError(f"delta must lie in (0, 1), got {delta}")
    return float(delta)


def check_epsilon(epsilon: float) -> float:
    if not 0.0 < epsilon <= 1.0:
        raise ContractViolationError(f"epsilon must lie in (0, 1], got {epsilon}")
    return float(epsilon)


def mom_batches(delta: float) -> int:
    """Batch count ceil(c ln(1/delta)), at least 1."""
    c = get_config().estimator.mom_constant
    return max(1, math.ceil(c * math.log(1.0 / check_delta(delta))))


def batch_means(samples: np.ndarray, n_batches: int) -> np.ndarray:
    """Means of ``n_batches`` equal consecutive batches; the remainder is discarded."""
    samples = np.asarray(samples, dtype=float)
    if samples.shape[0] < n_batches:
        raise ContractViolationError(
            f"{samples.shape[0]} samples cannot fill {n_batches} median-of-means batches"
        )
    per_batch = samples.shape[0] // n_batches
    return samples[: per_batch * n_batches].reshape(n_batches, per_batch).mean(axis=1)


def spread_error(samples: np.ndarray, means: np.ndarray) -> float:
    """Std of batch means over sqrt(K); per-shot standard error when K = 1."""
    if means.shape[0] > 1:
        return float(np.std(means, ddof=1) / math.sqrt(means.shape[0]))
    samples = np.asarray(samples, dtype=float)
    if samples.shape[0] < 2:
        return 0.0
    return float(np.std(samples, ddof=1) / math.sqrt(samples.shape[0]))


def median_of_means(
    samples: np.ndarray,
    delta: float,
    seed: Optional[int] = None,
    n_batches: Optional[int] = None,
) -> EstimateReport:
    """
    Median-of-means estimate of the sample mean.

    Args:
        samples: Per-shot values
        delta: Failure probability; sets the batch count
        seed: Seed to echo in the report
        n_batches: Override the batch count

    Returns:
        EstimateReport with batch means attached
    """
    samples = np.asarray(samples, dtype=float)
    k = n_batches if n_batches is not None else mom_batches(delta)
    means = batch_means(samples, k)
    return EstimateReport(
        mean=float(np.median(means)),
        std_error=spread_error(samples, means),
        n_shots=int(samples.shape[0]),
        n_batches=k,
        raw_batch_means=[float(m) for m in means],
        seed=seed,
        constants={"mom_constant": get_config().estimator.mom_constant},
    )


def median_of_repetitions(values: np.ndarray, n_shots: int, seed: Optional[int] = None) -> EstimateReport:
    """
    Median over independent repetitions of a whole estimator.

    The standard error is the repetition spread over sqrt(R).
    """
    values = np.asarray(values, dtype=float)
    spread = float(np.std(values, ddof=1) / math.sqrt(values.shape[0])) if values.shape[0] > 1 else 0.0
    return EstimateReport(
        mean=float(np.median(values)),
        std_error=spread,
        n_shots=int(n_shots),
        n_batches=int(values.shape[0]),
        raw_batch_means=[float(v) for v in values],
        seed=seed,
        constants={"mom_constant": get_config().estimator.mom_constant},
    )


def sample_mean(samples: np.ndarray, seed: Optional[int] = None) -> EstimateReport:
    """Plain average of per-shot values with the per-shot standard error."""
    samples = np.asarray(samples, dtype=float)
    if samples.shape[0] == 0:
        raise ContractViolationError("Cannot average an empty record")
    mean = float(samples.mean())
    return EstimateReport(
        mean=mean,
        std_error=spread_error(samples, np.array([mean])),
        n_shots=int(samples.shape[0]),
        n_batches=1,
        raw_batch_means=[mean],
        seed=seed,
    )
