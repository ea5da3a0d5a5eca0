"""Quantum polarization noise in nonlinear-Faraday-rotation atomic sensors."""
from .gaussian import (
    GaussianState, Loss, QuadratureExtrema, Rotation, Shear, ThermalSeed,
    apply, extremal_quadratures, noise_db, quadrature_variance, vacuum,
)
from .psr import PhysicalParams, SqueezingTargets, fit_to_targets, output_state, shear_strength

__all__ = [
    "GaussianState", "Loss", "QuadratureExtrema", "Rotation", "Shear", "ThermalSeed",
    "apply", "extremal_quadratures", "noise_db", "quadrature_variance", "vacuum",
    "PhysicalParams", "SqueezingTargets", "fit_to_targets", "output_state", "shear_strength",
]
