"""Simulation and analysis of gravitationally induced entanglement of masses.

Evolves spatially superposed masses under their mutual gravitational
phases, applies environmental dephasing, builds PPT entanglement witnesses,
schedules Pauli measurements through qubit-wise-commuting grouping, and
simulates the measurement statistics needed to certify entanglement at a
target confidence.
"""

__version__ = "0.1.0"

from .entanglement import (WitnessOperator, build_witness, entanglement_entropy,
                           ppt_min_eigenpair, witness_expectation)
from .environment import (EnvironmentParams, RateBreakdown, RegimeWarning,
                          gamma_air, gamma_total, lambda_air, lambda_blackbody)
from .experiment import (ConfidenceReport, MeasurementRecord, NotCertifiableError,
                         TermRecord, estimate_witness, measure_budget,
                         min_shots_for_confidence, prepare_instance, sample_group,
                         sample_term, simulate_confidence)
from .geometry import (BranchPhaseTable, PhysicalParams, SetupGeometry,
                       branch_distance, build_setup, load_config, phase_table)
from .linalg import EigenResult, eig_hermitian, partial_trace, partial_transpose, tensor
from .pauli import (MeasurementPlan, PauliDecomposition, decompose, group_ldfc,
                    operator_counts, plan_to_json, qwc, witness_decomposition)
from .states import (DecoherenceSpec, DensityMatrix, QuantumState, apply_decoherence,
                     density_matrix, evolve, evolved_density_matrix, initial_state)

__all__ = [
    "__version__",
    # linalg
    "EigenResult", "tensor", "partial_trace", "partial_transpose", "eig_hermitian",
    # geometry
    "PhysicalParams", "SetupGeometry", "BranchPhaseTable", "build_setup",
    "branch_distance", "phase_table", "load_config",
    # states
    "QuantumState", "DensityMatrix", "DecoherenceSpec", "initial_state", "evolve",
    "density_matrix", "apply_decoherence", "evolved_density_matrix",
    # entanglement
    "WitnessOperator", "entanglement_entropy", "ppt_min_eigenpair", "build_witness",
    "witness_expectation",
    # pauli
    "PauliDecomposition", "MeasurementPlan", "decompose", "qwc", "group_ldfc",
    "operator_counts", "witness_decomposition", "plan_to_json",
    # experiment
    "TermRecord", "MeasurementRecord", "ConfidenceReport", "NotCertifiableError",
    "sample_term", "sample_group", "measure_budget", "estimate_witness",
    "prepare_instance", "simulate_confidence", "min_shots_for_confidence",
    # environment
    "EnvironmentParams", "RateBreakdown", "RegimeWarning", "lambda_air", "gamma_air",
    "lambda_blackbody", "gamma_total",
]
