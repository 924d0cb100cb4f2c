"""Resonances of the 1+1 dimensional Dirac equation with a kink potential.

Closed-form Nikiforov-Uvarov machinery, complex root finding and an
independent ODE-integration oracle.
"""
from .errors import (BoundaryZeroError, ConfigError, ConvergenceError, DecayConditionError,
                     DegenerateError, DivergenceError, DomainError, IntegrationError,
                     KinkDiracError, PoleError)
from .kink_model import HalfLine, Method, PhysicalParams, ResonanceResult, SpinorSample
from .oracle_ode import IntegratorConfig, MatchResult, matching_determinant
from .resonance import SearchBox, SolverConfig, count_resonances, find_resonances

__version__ = "0.1.0"

__all__ = [
    "BoundaryZeroError", "ConfigError", "ConvergenceError", "DecayConditionError",
    "DegenerateError", "DivergenceError", "DomainError", "IntegrationError",
    "KinkDiracError", "PoleError",
    "HalfLine", "Method", "PhysicalParams", "ResonanceResult", "SpinorSample",
    "IntegratorConfig", "MatchResult", "matching_determinant",
    "SearchBox", "SolverConfig", "count_resonances", "find_resonances",
]
