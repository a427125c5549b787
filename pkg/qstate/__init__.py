"""Dense state engine: Pauli algebra, gates, channels and measurement."""

from .paulis import PauliString, pauli_to_matrix
from .states import (
    MixedState,
    PureState,
    apply_pauli,
    apply_unitary,
    eig_decompose,
    expectation,
    purity,
    reduced_density_matrix,
    tensor,
)
from .channels import NoiseChannel, apply_channel
from .measurement import measure_pauli, sample_computational, sample_computational_batch
from .rng import make_rng, split_rng

__all__ = [
    "PauliString",
    "pauli_to_matrix",
    "PureState",
    "MixedState",
    "apply_pauli",
    "apply_unitary",
    "eig_decompose",
    "expectation",
    "purity",
    "reduced_density_matrix",
    "tensor",
    "NoiseChannel",
    "apply_channel",
    "measure_pauli",
    "sample_computational",
    "sample_computational_batch",
    "make_rng",
    "split_rng",
]
