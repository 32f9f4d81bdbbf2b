"""Zeno/anti-Zeno decay rates and two-qubit correlations under repeated measurement."""
from .correlations import (
    CorrelationReport,
    MeasurementBasis,
    Side,
    Status,
    classical_correlation,
    concurrence,
    concurrence_wootters,
    conditional_entropy_projective,
    discord,
    discord_closed_phi,
    discord_closed_psi,
    discord_difference_phi,
    mutual_information,
    optimal_measurement,
)
from .dynamics import Family, InitialState, Partition, evolve_phi, evolve_psi, partition_state
from .errors import (
    DomainError,
    EtaSingular,
    IndeterminateEntropy,
    NegativeRate,
    NonHermitianInput,
    QuadratureFailure,
    TruncationWarning,
    ZenoDiscordError,
)
from .nonhermitian import (
    DecayParams,
    Occupation,
    PrecisionModel,
    Regime,
    critical_precision,
    decay_params,
    discord_under_measurement,
    mode_discrepancy,
    occupation_probs,
    propagator,
    regime,
)
from .qstate import (
    ValidationMode,
    ValidationReport,
    XState,
    binary_entropy,
    eigenvalues_hermitian,
    entropy_from_eigenvalues,
    is_hermitian,
    partial_trace,
    validate_state,
    von_neumann_entropy,
)
from .spinboson import (
    CrossoverKind,
    CrossoverResult,
    SpinBosonParams,
    SurvivalPair,
    coupling_spectrum,
    crossover_time,
    filter_function,
    filter_mass,
    gamma_closed,
    gamma_derivative,
    gamma_overlap,
    gamma_rate,
    kernel_time,
    large_tau_asymptote,
    survival,
    survival_from_rate,
)

__version__ = "0.1.0"

__all__ = [
    "CorrelationReport",
    "CrossoverKind",
    "CrossoverResult",
    "DecayParams",
    "DomainError",
    "EtaSingular",
    "Family",
    "IndeterminateEntropy",
    "InitialState",
    "MeasurementBasis",
    "NegativeRate",
    "NonHermitianInput",
    "Occupation",
    "Partition",
    "PrecisionModel",
    "QuadratureFailure",
    "Regime",
    "Side",
    "SpinBosonParams",
    "Status",
    "SurvivalPair",
    "TruncationWarning",
    "ValidationMode",
    "ValidationReport",
    "XState",
    "ZenoDiscordError",
    "binary_entropy",
    "classical_correlation",
    "concurrence",
    "concurrence_wootters",
    "conditional_entropy_projective",
    "coupling_spectrum",
    "critical_precision",
    "crossover_time",
    "decay_params",
    "discord",
    "discord_closed_phi",
    "discord_closed_psi",
    "discord_difference_phi",
    "discord_under_measurement",
    "eigenvalues_hermitian",
    "entropy_from_eigenvalues",
    "evolve_phi",
    "evolve_psi",
    "filter_function",
    "filter_mass",
    "gamma_closed",
    "gamma_derivative",
    "gamma_overlap",
    "gamma_rate",
    "is_hermitian",
    "kernel_time",
    "large_tau_asymptote",
    "mode_discrepancy",
    "mutual_information",
    "occupation_probs",
    "optimal_measurement",
    "partial_trace",
    "partition_state",
    "propagator",
    "regime",
    "survival",
    "survival_from_rate",
    "validate_state",
    "von_neumann_entropy",
]
