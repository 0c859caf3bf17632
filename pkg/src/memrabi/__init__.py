"""Motion-mediated coupling of two atomic ensembles in a two-mode cavity.

A small numpy/scipy toolbox for the linearized dynamics of a
membrane-in-the-middle cavity with an atomic ensemble coupled to each
optical mode: adiabatic elimination of the cavity fluctuations, the
resulting effective ensemble-ensemble Rabi coupling, trajectory
integration for the full / reduced / effective models, and the
mean-field stability analysis.

Internally all rates and detunings are angular frequencies in rad/us
and time is in us; config files default to numbers in units of 2pi MHz
(see ``params``).
"""

from .errors import (
    ConfigError,
    InsufficientDataError,
    InvalidModelError,
    NumericalError,
    SingularEliminationError,
)
from .params import (
    SystemParams,
    DerivedDetunings,
    ValidationReport,
    ParsedConfig,
    TWO_PI,
    derived_detunings,
    dump_config,
    load_config,
    parse_config,
    pump_amplitude,
    thermal_occupancy,
    validate,
    with_alpha,
)
from .effective import (
    EFFECTIVE_BASIS,
    EffectiveParams,
    EliminationIntermediates,
    HamiltonianCoefficients,
    RamanSplitting,
    RegimeReport,
    effective_hamiltonian_coefficients,
    effective_params,
    elimination_intermediates,
    raman_splitting,
    regime_classify,
)
from .dynamics import (
    FULL_BASIS,
    REDUCED_BASIS,
    DriftMatrix,
    Trajectory,
    DifferenceStats,
    build_effective_drift,
    build_full_drift,
    build_reduced_drift,
    compare,
    initial_state,
    integrate,
    rabi_period,
)
from .stability import (
    CavityModeStability,
    ClassicalSteadyState,
    StabilityReport,
    classical_steady_state,
    spectrum_full,
    stability_matrix_M,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "InsufficientDataError",
    "InvalidModelError",
    "NumericalError",
    "SingularEliminationError",
    "SystemParams",
    "DerivedDetunings",
    "ValidationReport",
    "ParsedConfig",
    "TWO_PI",
    "derived_detunings",
    "dump_config",
    "load_config",
    "parse_config",
    "pump_amplitude",
    "thermal_occupancy",
    "validate",
    "with_alpha",
    "EffectiveParams",
    "EliminationIntermediates",
    "HamiltonianCoefficients",
    "RamanSplitting",
    "RegimeReport",
    "effective_hamiltonian_coefficients",
    "effective_params",
    "elimination_intermediates",
    "raman_splitting",
    "regime_classify",
    "EFFECTIVE_BASIS",
    "FULL_BASIS",
    "REDUCED_BASIS",
    "DriftMatrix",
    "Trajectory",
    "DifferenceStats",
    "build_effective_drift",
    "build_full_drift",
    "build_reduced_drift",
    "compare",
    "initial_state",
    "integrate",
    "rabi_period",
    "CavityModeStability",
    "ClassicalSteadyState",
    "StabilityReport",
    "classical_steady_state",
    "spectrum_full",
    "stability_matrix_M",
    "__version__",
]
