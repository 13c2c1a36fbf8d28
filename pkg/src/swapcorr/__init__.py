"""Simulator and correlation analyzer for the controlled-swap overlap circuit.

The circuit estimates Tr(rho1 rho2) from sigma_x readouts of one auxiliary
qubit.  This package builds the exact post-circuit state, quantifies the
correlations between the qubit and the input registers (negativity, mutual
information, discord), constructs explicit entanglement witnesses, and runs
the depolarized-qubit scenario with its correlation sweeps and sudden-death
trajectories.
"""

__version__ = "0.1.0"

from .circuit import (
    MeasurementStats,
    ShotEstimate,
    TripartiteState,
    build_by_gates,
    build_closed_form,
    measure_stats,
    sample_shots,
    swap_operator,
)
from .linalg import (
    DensityMatrix,
    EigDecomposition,
    InvalidStateError,
    NumericalError,
    density_matrix_from_json,
    density_matrix_to_json,
    eig_hermitian,
    load_density_matrix,
    partial_trace,
    partial_transpose,
    save_density_matrix,
    tensor,
    von_neumann_entropy,
)
from .measures import (
    ClassicalQuantumResult,
    CorrelationReport,
    DiscordResult,
    PtNegativity,
    QubitMeasurementBasis,
    classify,
    discord_via_measurement,
    is_classical_quantum,
    mutual_information,
    negativity,
)
from .scenarios import (
    DepolarizingParams,
    SweepRow,
    TrajectoryConfig,
    TrajectoryPoint,
    TrajectoryResult,
    depolarize,
    example_state,
    sweep,
    trajectory,
    write_sweep_csv,
    write_trajectory_csv,
)
from .witness import (
    IndistinguishableStatesError,
    MatchResult,
    WitnessCertificate,
    WitnessConstructionError,
    construct_witness,
    match_count,
)

__all__ = [
    "DensityMatrix",
    "EigDecomposition",
    "InvalidStateError",
    "NumericalError",
    "tensor",
    "partial_trace",
    "partial_transpose",
    "eig_hermitian",
    "von_neumann_entropy",
    "density_matrix_to_json",
    "density_matrix_from_json",
    "load_density_matrix",
    "save_density_matrix",
    "TripartiteState",
    "MeasurementStats",
    "ShotEstimate",
    "swap_operator",
    "build_closed_form",
    "build_by_gates",
    "measure_stats",
    "sample_shots",
    "PtNegativity",
    "QubitMeasurementBasis",
    "DiscordResult",
    "ClassicalQuantumResult",
    "CorrelationReport",
    "negativity",
    "mutual_information",
    "discord_via_measurement",
    "is_classical_quantum",
    "classify",
    "MatchResult",
    "WitnessCertificate",
    "IndistinguishableStatesError",
    "WitnessConstructionError",
    "match_count",
    "construct_witness",
    "DepolarizingParams",
    "SweepRow",
    "TrajectoryConfig",
    "TrajectoryPoint",
    "TrajectoryResult",
    "depolarize",
    "example_state",
    "sweep",
    "trajectory",
    "write_sweep_csv",
    "write_trajectory_csv",
    "__version__",
]
