"""Run configuration and the state that flows through the run pipeline."""

import operator
from datetime import datetime
from typing import Any, Dict, List, Literal, Optional, TypedDict

from pydantic import BaseModel, Field
from typing_extensions import Annotated

COMMANDS = (
    "faf",
    "witness",
    "bell-estimate",
    "single-estimate",
    "test-bell",
    "test-single",
    "sweep-theta",
    "sweep-depol",
    "brickwork",
    "layers",
    "ensemble-stats",
)

Command = Literal[
    "faf",
    "witness",
    "bell-estimate",
    "single-estimate",
    "test-bell",
    "test-single",
    "sweep-theta",
    "sweep-depol",
    "brickwork",
    "layers",
    "ensemble-stats",
]

class RunConfig(BaseModel):
    """One CLI invocation; mirrors the flags and the ``--config`` JSON file."""

    command: Command = Field(description="Command to run")
    state: Optional[str] = Field(
        default=None, description="Named state family (cat, defect, ghz, plus, basis, haar, subset-phase, gaussian-random)"
    )
    n: Optional[int] = Field(default=None, ge=1, description="Number of qubits (modes)")
    eps2: Optional[float] = Field(default=None, ge=0.0, le=1.0, description="Cat weight eps^2 on |1^n>")
    q: Optional[int] = Field(default=None, ge=0, description="Subset-phase support exponent")
    bits: Optional[str] = Field(default=None, description="Bit string for the basis state")
    state_json: Optional[Dict[str, Any]] = Field(default=None, description="Full EnsembleSpec, overrides --state")
    circuit: Optional[Dict[str, Any]] = Field(default=None, description="CircuitSpec applied to the prepared state")
    p: Optional[float] = Field(default=None, ge=0.0, le=1.0, description="Global depolarizing applied last")
    shots: Optional[int] = Field(default=None, ge=0, description="Shots (per layer for single-estimate)")
    epsilon: Optional[float] = Field(default=None, gt=0.0, le=1.0, description="Tester distance parameter")
    delta: float = Field(default=0.05, gt=0.0, lt=1.0, description="Failure probability")
    k: int = Field(default=1, ge=1, description="FAF order")
    seed: Optional[int] = Field(default=None, description="Random seed")
    ps: Optional[List[float]] = Field(default=None, description="Noise strength grid for sweeps")
    thetas: Optional[List[float]] = Field(default=None, description="R_zz angles for sweep-theta")
    noise: Optional[str] = Field(default=None, description="Channel kind for circuit noise")
    noise_strength: Optional[float] = Field(default=None, ge=0.0, le=1.0, description="Channel strength")
    depth: Optional[int] = Field(default=None, ge=0, description="Brickwork depth")
    instances: Optional[int] = Field(default=None, ge=1, description="Random circuit instances")
    draws: Optional[int] = Field(default=None, ge=1, description="Ensemble draws")
    records: bool = Field(default=False, description="Write raw Bell shots or layer shots next to the report")
    output: Optional[str] = Field(default=None, description="Report path")
    format: Literal["csv", "json"] = Field(default="json", description="Report format")

    def echo(self) -> Dict[str, Any]:
        """Every result-affecting parameter, for the report header."""
        return self.model_dump(exclude={"output", "format", "records"}, exclude_none=True)


class RunState(TypedDict):
    """
    State schema for one CLI run.

    ``errors`` accumulates across nodes; any entry routes the graph to END.
    """

    config: Optional[RunConfig]
    raw_config: Dict[str, Any]
    prepared_state: Optional[Any]
    results: Optional[Dict[str, Any]]
    rows: Optional[List[Dict[str, Any]]]
    constants: Optional[Dict[str, Any]]
    verdict: Optional[bool]
    report_path: Optional[str]
    record_path: Optional[str]
    errors: Annotated[List[Dict[str, Any]], operator.add]
    start_time: Optional[str]
    status: Optional[str]


def create_initial_state(raw_config: Dict[str, Any]) -> RunState:
    """
    Create the initial state for a run.

    Args:
        raw_config: Unvalidated RunConfig fields from flags or a config file

    Returns:
        RunState with empty results
    """
    return RunState(
        config=None,
        raw_config=raw_config,
        prepared_state=None,
        results=None,
        rows=None,
        constants=None,
        verdict=None,
        report_path=None,
        record_path=None,
        errors=[],
        start_time=datetime.now().isoformat(),
        status="running",
    )


def add_error(node: str, error_type: str, error_message: str) -> Dict[str, Any]:
    """
    Error update for the Annotated ``errors`` list.

    Args:
        node: Node that failed
        error_type: Exception class name or a short tag
        error_message: Message with field or line diagnostics

    Returns:
        Partial state update
    """
    return {
        "errors": [{
            "node": node,
            "error_type": error_type,
            "error_message": error_message,
            "timestamp": datetime.now().isoformat(),
        }],
        "status": "failed",
    }
