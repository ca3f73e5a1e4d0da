"""Schmidt-number fidelity benchmarks for continuous-variable quantum devices."""

from .bounds import (
    BenchmarkTableRow,
    classical_limit,
    conjectured_bound,
    fidelity_lower_bound_from_noise,
    noise_threshold,
    quantum_limit,
    schmidt_bound,
)
from .certify import CertificationResult, ExperimentRecord, certify, sweep_table
from .enumeration import BoundResult, maximize
from .params import (
    DomainError,
    GainWidthParams,
    KernelParams,
    StateParams,
    gain_width_from_state,
    kernel_from_gain_width,
)

__version__ = "0.1.0"

__all__ = [
    "BenchmarkTableRow",
    "BoundResult",
    "CertificationResult",
    "DomainError",
    "ExperimentRecord",
    "GainWidthParams",
    "KernelParams",
    "StateParams",
    "certify",
    "classical_limit",
    "conjectured_bound",
    "fidelity_lower_bound_from_noise",
    "gain_width_from_state",
    "kernel_from_gain_width",
    "maximize",
    "noise_threshold",
    "quantum_limit",
    "schmidt_bound",
    "sweep_table",
]
