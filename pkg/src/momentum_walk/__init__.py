"""Discrete-time quantum walk in momentum space with a quadratic phase drift.

Simulation of the coin + conditional-shift + drift map on a 1-d lattice,
its localized / resonant / diffusive regimes, and the mapping of its
stationary states onto a real-coefficient tight-binding lattice equation.
"""

from .errors import (ConfigurationError, FitError, LatticeOverflowError,
                     NumericError, ValidationError)
from .evolution import (DEFAULT_RECORD, RECORDABLE, StepMode,
                        boundary_probability, coin_step, evolve, markov_evolve,
                        markov_step, phase_step, shift_step, step)
from .floquet import (AndersonCoefficients, FloquetPair, KineticStatistics,
                      QuasiEnergy, ResidualReport, TransformedPair,
                      anderson_residual, coefficients, floquet_recursion,
                      kinetic_statistics, second_order_residual, site_factors,
                      transform)
from .kernels import BACKEND
from .observables import (FitResult, ObservableSeries, PeakReport,
                          distribution, growth_exponent_fit,
                          interference_term, localization_length_fit,
                          mean_position, off_parity_probability,
                          participation_number, quadratic_coefficient,
                          resonance_peaks, variance)
from .phases import Omega
from .state import (SYMMETRIC_CHIRALITY, InitialCondition, ProbabilityField,
                    SpinorField, WalkParams, new_state, probability_at)

__version__ = "0.1.0"

__all__ = [
    "AndersonCoefficients", "BACKEND", "ConfigurationError", "DEFAULT_RECORD",
    "FitError", "FitResult", "FloquetPair", "InitialCondition",
    "KineticStatistics", "LatticeOverflowError", "NumericError",
    "ObservableSeries", "Omega", "PeakReport", "ProbabilityField",
    "QuasiEnergy", "RECORDABLE", "ResidualReport", "SYMMETRIC_CHIRALITY",
    "SpinorField", "StepMode", "TransformedPair", "ValidationError",
    "WalkParams", "anderson_residual", "boundary_probability", "coefficients",
    "coin_step", "distribution", "evolve", "floquet_recursion",
    "growth_exponent_fit", "interference_term", "kinetic_statistics",
    "localization_length_fit", "markov_evolve", "markov_step", "mean_position",
    "new_state", "off_parity_probability", "participation_number",
    "phase_step", "probability_at", "quadratic_coefficient", "resonance_peaks",
    "second_order_residual", "shift_step", "site_factors", "step", "transform",
    "variance",
]
