"""Configuration management for the fermiprobe toolkit."""

import os
from typing import Optional
from dataclasses import dataclass, field
from pathlib import Path


def _env_int(name: str) -> Optional[int]:
    value = os.getenv(name)
    return int(value) if value else None


def _env_float(name: str) -> Optional[float]:
    value = os.getenv(name)
    return float(value) if value else None


@dataclass
class SimulationConfig:
    """Dense-backend limits and numerical tolerances."""

    max_pure_qubits: int = 12
    max_mixed_qubits: int = 10
    hermitian_tol: float = 1e-10
    unitary_tol: float = 1e-10
    psd_tol: float = 1e-9
    eig_clamp: float = 1e-12

    def __post_init__(self):
        """Load size caps from environment if provided."""
        env_pure = _env_int("FERMIPROBE_MAX_PURE_QUBITS")
        if env_pure:
            self.max_pure_qubits = env_pure

        env_mixed = _env_int("FERMIPROBE_MAX_MIXED_QUBITS")
        if env_mixed:
            self.max_mixed_qubits = env_mixed

        if self.max_mixed_qubits > self.max_pure_qubits:
            raise ValueError("max_mixed_qubits cannot exceed max_pure_qubits")


@dataclass
class EstimatorConfig:
    """Constants chosen for the O(.) shot formulas."""

    mom_constant: float = 8.0  # median-of-means batches = ceil(c * ln(1/delta))
    bell_test_constant: float = 1.0  # tester N = ceil(c * n^2/eps^2 * ln(1/delta))
    chunk_size: int = 4096  # shots drawn per vectorized chunk
    max_workers: int = 1

    def __post_init__(self):
        """Load worker count and constants from environment if provided."""
        env_workers = _env_int("FERMIPROBE_MAX_WORKERS")
        if env_workers:
            self.max_workers = env_workers

        env_mom = _env_float("FERMIPROBE_MOM_CONSTANT")
        if env_mom:
            self.mom_constant = env_mom


@dataclass
class OptimizerConfig:
    """Settings for the brute-force Gaussian distance search."""

    restarts: int = 32
    xatol: float = 1e-6
    fatol: float = 1e-12
    max_iter: int = 20000
    max_modes: int = 4

    def __post_init__(self):
        """Load restart count from environment if provided."""
        env_restarts = _env_int("FERMIPROBE_OPTIMIZER_RESTARTS")
        if env_restarts:
            self.restarts = env_restarts


@dataclass
class ExperimentConfig:
    """Defaults for the circuit experiments."""

    brickwork_strength: float = 1.0
    hardware_depolarizing: float = 0.036  # fit to the published hardware curve, not a target
    circuit_instances: int = 20


@dataclass
class ReportConfig:
    """Report formatting."""

    significant_digits: int = 12


@dataclass
class PathConfig:
    """Path configuration for reports."""

    output_dir: Path = field(default_factory=lambda: Path("output"))

    def __post_init__(self):
        """Pick up the default output directory from the environment."""
        env_output = os.getenv("FERMIPROBE_OUTPUT_DIR")
        if env_output:
            self.output_dir = Path(env_output)


@dataclass
class ToolkitConfig:
    """Main toolkit configuration."""

    simulation: SimulationConfig = field(default_factory=SimulationConfig)
    estimator: EstimatorConfig = field(default_factory=EstimatorConfig)
    optimizer: OptimizerConfig = field(default_factory=OptimizerConfig)
    experiment: ExperimentConfig = field(default_factory=ExperimentConfig)
    report: ReportConfig = field(default_factory=ReportConfig)
    paths: PathConfig = field(default_factory=PathConfig)


def load_config() -> ToolkitConfig:
    """
    Load configuration from environment variables.

    Returns:
        ToolkitConfig: Configured toolkit settings
    """
    return ToolkitConfig()


# Global config instance
_config: Optional[ToolkitConfig] = None


def get_config() -> ToolkitConfig:
    """
    Get or create global configuration instance.

    Returns:
        ToolkitConfig: Global configuration instance
    """
    global _config
    if _config is None:
        _config = load_config()
    return _config


def reset_config():
    """Reset global configuration (useful for testing)."""
    global _config
    _config = None
