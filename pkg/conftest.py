"""Shared pytest fixtures."""

import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from config import reset_config  # noqa: E402


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long statistical checks")


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


@pytest.fixture
def fresh_config(monkeypatch, tmp_path):
    """Config rebuilt from a clean environment with reports under tmp_path."""
    for name in (
        "FERMIPROBE_MAX_PURE_QUBITS",
        "FERMIPROBE_MAX_MIXED_QUBITS",
        "FERMIPROBE_MAX_WORKERS",
        "FERMIPROBE_MOM_CONSTANT",
        "FERMIPROBE_OPTIMIZER_RESTARTS",
    ):
        monkeypatch.delenv(name, raising=False)
    monkeypatch.setenv("FERMIPROBE_OUTPUT_DIR", str(tmp_path / "output"))
    reset_config()
    yield
    reset_config()
