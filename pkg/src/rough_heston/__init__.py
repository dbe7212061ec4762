"""Moment explosions in the rough Heston model.

Subpackages:

- model     : parameters, Riccati coefficients, case classification
- classical : closed-form explosion time and critical moments for alpha = 1
- series    : power-series explosion-time estimators and the polylog profile
- bounds    : explicit lower/upper bounds for the explosion time
- vie       : fractional Adams solver for the Volterra equation and the mgf
- critical  : critical moments, Lee wing slope, density tail exponents
"""

from . import bounds, classical, critical, series, vie
from .model import (
    CaseError,
    ModelParams,
    MomentCase,
    RiccatiCoeffs,
    case_a_boundary,
    classify,
    default_params,
    riccati_coeffs,
    vie_nonlinearity,
)

__all__ = [
    "bounds",
    "classical",
    "critical",
    "series",
    "vie",
    "CaseError",
    "ModelParams",
    "MomentCase",
    "RiccatiCoeffs",
    "case_a_boundary",
    "classify",
    "default_params",
    "riccati_coeffs",
    "vie_nonlinearity",
]

__version__ = "0.1.0"
