"""Simulation and chi-squared reconstruction for three-qubit SIC-POVM tomography."""

from .linalg import (
    InvalidStateError,
    dagger,
    density_from_params,
    hermitian_eig,
    matrix_sqrt_psd,
    tensor_product,
    trace,
    validate_density,
)
from .measurement import PovmSet, outcome_probabilities, sic_povm, sic_vectors, three_qubit_povm
from .metrics import fidelity, purity
from .noise import CountRecord, NoiseMode, poisson_sample, simulate_counts
from .reconstruction import (
    ReconstructionOptions,
    ReconstructionResult,
    chi_squared,
    expected_counts,
    reconstruct,
)
from .states import ghz, maximally_mixed, pure_density, w, werner

__version__ = "0.1.0"
