"""Thermal Casimir-Polder interaction of an atom with a real-metal wall.

Correction factors eta (free energy) and kappa (force) relative to the
ideal-metal, static-polarizability, zero-temperature result, from the full
Lifshitz formula and from closed-form short- and large-separation expansions.
"""

from .asymptotics import (
    CrossoverPolicy,
    crossover_select,
    eta_large,
    eta_short,
    kappa_large,
    kappa_short,
    sigma_series,
    temp_functions,
)
from .constants import CONSTANTS, DimensionlessState, reduce
from .errors import (
    CasimirError,
    ConfigurationError,
    DomainError,
    IngestionError,
    NumericalError,
    OutOfRegimeError,
    SeriesError,
    TruncationError,
    UnsupportedModelError,
    UnsupportedOrderError,
)
from .lifshitz import (
    ComputeConfig,
    CorrectionResult,
    force_factor,
    free_energy_factor,
    ideal_baselines,
    lifshitz_result,
    plate_energy,
    reflection_coefficients,
    two_semispace_free_energy,
    zero_T_energy_factor,
    zero_T_force_factor,
)
from .materials import (
    Drude,
    Ideal,
    MultiOscillator,
    Plasma,
    SingleOscillator,
    Static,
    Tabulated,
    load_polarizability_table,
    lookup,
    registry,
)

__version__ = "0.1.0"
