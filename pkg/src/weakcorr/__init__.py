"""Weak values, two-time correlation functions and the quasi-probability
distribution that connects them, for finite-dimensional pure states."""

from .config import DEFAULT, Tolerances
from .engine import (
    QuasiProbTable,
    ReductionCheck,
    WeakValueResult,
    commuting_reduction_check,
    conditional_average,
    conditional_quasiprobability,
    correlation_function,
    kd_quasiprobability,
    sequential_measurement_distribution,
    weak_value,
)
from .errors import (
    DimensionMismatch,
    IdentityViolation,
    NoConvergence,
    NotHermitian,
    ParseError,
    PostselectionTooRare,
    UnknownLabel,
    ValidationError,
    WeakCorrError,
)
from .kernel import EigenDecomposition, hermitian_eig, random_instance, unitary_from_hamiltonian
from .model import (
    Ket,
    Observable,
    ProjectorSet,
    Scenario,
    TwoStageEvolution,
    heisenberg_operator,
    postselection_probability,
    random_scenario,
    spectral_projectors,
)
from .scenario_io import parse_scenario, serialize_scenario
from .verification import emit_report, parse_report, run_verification_suite, scan_anomalous

__version__ = "0.1.0"
