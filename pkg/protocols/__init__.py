"""Shot-level measurement protocols, estimators and testers."""

from .estimators import EstimateReport, TestVerdict, median_of_means, sample_mean
from .bell import (
    BellRecord,
    BellSample,
    bell_gaussianity_test,
    bell_sample,
    bits_to_g,
    estimate_coherence_bell,
    estimate_faf1_bell,
    estimate_purity_bell,
    estimate_witness_bell,
    sample_bell_record,
)
from .matching import (
    LayerShotMatrix,
    MeasurementLayer,
    build_layers,
    estimate_faf1_single,
    randomized_pair_estimate,
    sample_layer,
    single_copy_test,
    u_statistic,
)

__all__ = [
    "EstimateReport",
    "TestVerdict",
    "median_of_means",
    "sample_mean",
    "BellRecord",
    "BellSample",
    "bell_gaussianity_test",
    "bell_sample",
    "bits_to_g",
    "estimate_coherence_bell",
    "estimate_faf1_bell",
    "estimate_purity_bell",
    "estimate_witness_bell",
    "sample_bell_record",
    "LayerShotMatrix",
    "MeasurementLayer",
    "build_layers",
    "estimate_faf1_single",
    "randomized_pair_estimate",
    "sample_layer",
    "single_copy_test",
    "u_statistic",
]
