"""Grover-mixer QAOA fair-sampling toolkit.

Builds fair-sampling circuits for small degenerate Ising problems, compiles
them to restricted qubit connectivities, simulates them under configurable
noise, and quantifies how much data it takes to reject the fair-sampling
hypothesis.
"""

from .circuit import Circuit, Gate, count_gates, from_qasm, to_qasm
from .fairness import CAPPED, FairnessReport, chi2_critical, chi2_stat, fairness_report, gsp, nsrfs
from .gmqaoa import (
    ARCHITECTURES,
    AngleParams,
    CompiledCircuit,
    build_full_circuit,
    gm_qaoa_state,
    grid_search_angles,
    reference_angles,
)
from .ising import GroundStateSet, IsingModel, builtin_problem, energy, fix_q0_up, ground_states
from .simulator import (
    CalibrationMatrix,
    CountsHistogram,
    NoiseModel,
    Statevector,
    build_calibration_matrix,
    expectation,
    measured_distribution,
    mitigate,
    sample,
    simulate,
)
from .topology import BackendTopology, Embedding, aggregate_error, bundled_backend, enumerate_embeddings

__all__ = [
    "ARCHITECTURES",
    "AngleParams",
    "BackendTopology",
    "CAPPED",
    "CalibrationMatrix",
    "Circuit",
    "CompiledCircuit",
    "CountsHistogram",
    "Embedding",
    "FairnessReport",
    "Gate",
    "GroundStateSet",
    "IsingModel",
    "NoiseModel",
    "Statevector",
    "aggregate_error",
    "build_calibration_matrix",
    "build_full_circuit",
    "builtin_problem",
    "bundled_backend",
    "chi2_critical",
    "chi2_stat",
    "count_gates",
    "energy",
    "enumerate_embeddings",
    "expectation",
    "fairness_report",
    "fix_q0_up",
    "from_qasm",
    "gm_qaoa_state",
    "grid_search_angles",
    "ground_states",
    "gsp",
    "measured_distribution",
    "mitigate",
    "nsrfs",
    "reference_angles",
    "sample",
    "simulate",
    "to_qasm",
]

__version__ = "0.1.0"
