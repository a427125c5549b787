"""Schemas for state ensembles and circuits."""

import math
from typing import List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, Field, field_validator, model_validator
from typing_extensions import Annotated

from qstate.channels import CHANNEL_KINDS

EnsembleKind = Literal["haar", "subset_phase", "gaussian_random", "cat", "defect", "basis", "ghz", "plus"]


class EnsembleSpec(BaseModel):
    """A named state or random state family."""

    kind: EnsembleKind = Field(description="State family")
    n_qubits: int = Field(ge=1, description="Number of qubits (modes)")
    draws: int = Field(default=1, ge=1, description="Number of independent draws for ensemble statistics")
    seed: Optional[int] = Field(default=None, description="Seed for random families")
    epsilon: Optional[float] = Field(
        default=None, ge=0.0, le=1.0, description="Cat amplitude on |1^n>; the state has weight 1 - eps^2 on |0^n>"
    )
    q: Optional[int] = Field(default=None, ge=0, description="Subset-phase support is 2^q basis states")
    random_phases: bool = Field(default=True, description="Draw independent +-1 phases for subset-phase states")
    bits: Optional[str] = Field(default=None, description="Bit string for the basis kind, qubit 0 first")

    @model_validator(mode="after")
    def check_kind_fields(self) -> "EnsembleSpec":
        if self.kind == "subset_phase":
            if self.q is None:
                raise ValueError("subset_phase requires q")
            if self.q > self.n_qubits:
                raise ValueError(f"q={self.q} exceeds n_qubits={self.n_qubits}")
        if self.kind == "cat" and self.epsilon is None:
            raise ValueError("cat requires epsilon")
        if self.kind == "defect" and self.n_qubits < 4:
            raise ValueError("defect requires at least 4 qubits")
        if self.kind == "basis":
            if self.bits is None or len(self.bits) != self.n_qubits or set(self.bits) - {"0", "1"}:
                raise ValueError("basis requires a 0/1 bit string of length n_qubits")
        return self

    @property
    def is_random(self) -> bool:
        return self.kind in ("haar", "subset_phase", "gaussian_random")


class NoiseSpec(BaseModel):
    """Per-qubit noise inserted into a circuit."""

    kind: str = Field(description=f"Channel kind, one of {', '.join(CHANNEL_KINDS)}")
    strength: float = Field(ge=0.0, le=1.0, description="Channel strength p or gamma")
    placement: Literal["after_gate", "after_layer"] = Field(
        default="after_gate",
        description="after_gate: on both qubits of every two-qubit gate; after_layer: on all qubits at each layer boundary",
    )

    @field_validator("kind")
    @classmethod
    def known_kind(cls, value: str) -> str:
        if value not in CHANNEL_KINDS:
            raise ValueError(f"unknown channel kind '{value}'")
        return value


def _finite(value: float) -> float:
    if not math.isfinite(value):
        raise ValueError("angles must be finite")
    return value


class MatchgateOp(BaseModel):
    kind: Literal["matchgate"] = "matchgate"
    pair: Tuple[int, int] = Field(description="Qubits (modes) i, j")
    angles: List[float] = Field(min_length=6, max_length=6, description="Six coefficients theta_ab")
    strength: float = Field(default=1.0, description="Overall scale g; the Hamiltonian is g/sqrt(6) sum theta_ab B_ab")

    @field_validator("angles")
    @classmethod
    def finite_angles(cls, values: List[float]) -> List[float]:
        return [_finite(v) for v in values]


class RxxOp(BaseModel):
    kind: Literal["rxx"] = "rxx"
    pair: Tuple[int, int]
    angle: float

    @field_validator("angle")
    @classmethod
    def finite_angle(cls, value: float) -> float:
        return _finite(value)


class RzOp(BaseModel):
    kind: Literal["rz"] = "rz"
    qubit: int
    angle: float

    @field_validator("angle")
    @classmethod
    def finite_angle(cls, value: float) -> float:
        return _finite(value)


class RzzOp(BaseModel):
    kind: Literal["rzz"] = "rzz"
    pair: Tuple[int, int]
    angle: float

    @field_validator("angle")
    @classmethod
    def finite_angle(cls, value: float) -> float:
        return _finite(value)


CircuitOp = Annotated[Union[MatchgateOp, RxxOp, RzOp, RzzOp], Field(discriminator="kind")]


class CircuitSpec(BaseModel):
    """Ordered gate list with optional noise and layer boundaries."""

    n_qubits: int = Field(ge=1, description="Number of qubits")
    ops: List[CircuitOp] = Field(default_factory=list, description="Gates in application order")
    noise: Optional[NoiseSpec] = Field(default=None, description="Optional per-qubit noise")
    layer_boundaries: List[int] = Field(
        default_factory=list, description="Op counts at which each layer ends, non-decreasing"
    )
    seed: Optional[int] = Field(default=None, description="Seed the random angles were drawn with")

    @model_validator(mode="after")
    def check_indices(self) -> "CircuitSpec":
        for position, op in enumerate(self.ops):
            qubits = [op.qubit] if isinstance(op, RzOp) else list(op.pair)
            for q in qubits:
                if not 0 <= q < self.n_qubits:
                    raise ValueError(f"op {position}: qubit {q} out of range")
            if len(set(qubits)) != len(qubits):
                raise ValueError(f"op {position}: pair indices must be distinct")
        previous = 0
        for boundary in self.layer_boundaries:
            if boundary < previous or boundary > len(self.ops):
                raise ValueError(f"layer boundary {boundary} out of order or beyond {len(self.ops)} ops")
            previous = boundary
        return self

    def layers(self) -> List[List[CircuitOp]]:
        """Ops grouped by layer; without boundaries the whole circuit is one layer."""
        bounds = list(self.layer_boundaries) or [len(self.ops)]
        if bounds[-1] != len(self.ops):
            bounds.append(len(self.ops))
        groups, start = [], 0
        for end in bounds:
            groups.append(list(self.ops[start:end]))
            start = end
        return groups
