"""Simulation of N-level teleportation with noisy entanglement distribution."""

from .analysis import (
    ComparisonReport,
    angular_momentum_operators,
    angular_momentum_transpose_report,
    average_fidelity_mc,
    compare_teleport_vs_direct,
    entanglement_fidelity,
    homogeneity_report,
    teleport_action,
)
from .channels import (
    HomogeneityReport,
    KrausChannel,
    apply_channel,
    build_standard_channel,
    check_transpose_homogeneity,
    check_unitary_homogeneity,
    transpose_channel,
    validate_channel,
)
from .noisy_sim import (
    OutcomeRecord,
    SimulationResult,
    bob_premessage_marginal,
    effective_error,
    enumerate_outcomes,
    measure_and_correct,
    noisy_initial_state,
    predict_outcomes_via_effective_error,
    sample_outcomes,
)
from .qmath import fidelity, partial_trace, tensor, transpose_in_basis
from .teleport import (
    BellMeasurement,
    bell_state,
    check_povm_completeness,
    ideal_teleport_outcome,
    max_entangled,
    weyl_unitary,
)

__version__ = "0.1.0"
