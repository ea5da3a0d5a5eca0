"""Nonlinear Faraday rotation magnetometer built on the polarimeter model."""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import gaussian as gs
from . import polarimeter as pol
from . import psr
from .errors import DomainError, LinearizationError, ParameterDomainError

LINEAR_FRACTION = 0.1  # b_amp / linewidth above which the response is no longer linear


@dataclass(frozen=True)
class NmorResponse:
    slope_per_density: float = 1.0e-9  # rad / (G cm^-3)
    linewidth: float = 1.0e-6  # G
    density: float = 0.0  # cm^-3

    def check(self) -> None:
        if not self.linewidth > 0:
            raise ParameterDomainError(f"linewidth must be > 0, got {self.linewidth}")
        if not np.isfinite(self.slope_per_density):
            raise ParameterDomainError("slope_per_density must be finite")
        if not self.density >= 0:
            raise ParameterDomainError(f"density must be >= 0, got {self.density}")

    @property
    def theta_max(self) -> float:
        return self.slope_per_density * self.density * self.linewidth / 2

    @property
    def small_field_slope(self) -> float:
        """d(theta)/dB at B = 0, in rad/G."""
        return self.slope_per_density * self.density


@dataclass(frozen=True)
class SensitivityReport:
    density: float
    b_min_measured: float  # G / sqrt(Hz)
    b_min_shot_limited: float  # G / sqrt(Hz)
    intensity_noise_db: float

    @property
    def ratio(self) -> float:
        return self.b_min_measured / self.b_min_shot_limited


def rotation_angle(resp: NmorResponse, b):
    """Dispersive Lorentzian rotation; peaks at ``|B| = linewidth``."""
    x = np.asarray(b, dtype=float) / resp.linewidth
    theta = resp.theta_max * 2 * x / (1 + x * x)
    return float(theta) if np.ndim(theta) == 0 else theta


def modulated_signal(
    resp: NmorResponse, b_amp: float, f_mod: float, cfg: pol.DetectionConfig, state: gs.GaussianState
) -> tuple[float, float]:
    """Signal power and noise floor (dB re shot noise) for a sinusoidal field.

    The signal is the peak amplitude of the first harmonic at ``f_mod``; a
    zero signal is reported as ``-inf``.
    """
    resp.check()
    if not f_mod > 0:
        raise ParameterDomainError(f"f_mod must be > 0, got {f_mod}")
    if not abs(b_amp) <= LINEAR_FRACTION * resp.linewidth:
        raise LinearizationError(
            f"b_amp = {b_amp:.3g} G exceeds {LINEAR_FRACTION} x linewidth ({resp.linewidth:.3g} G)"
        )
    rec = pol.measure(state, rotation_angle(resp, b_amp), cfg)
    return pol.signal_db(rec.mean_signal), rec.noise_db


def sensitivity(resp: NmorResponse, cfg: pol.DetectionConfig, params: psr.PhysicalParams) -> SensitivityReport:
    """Minimum detectable field per unit bandwidth at ``params.density``.

    Both the rotation slope and the noise are evaluated at ``cfg.phi_prp``;
    the shot-limited figure uses unit noise variance with the same slope.
    """
    if not params.density > 0:
        raise DomainError(f"density must be > 0 for a finite sensitivity, got {params.density}")
    resp = replace(resp, density=params.density)
    resp.check()
    cfg.check()
    state = psr.output_state(params)
    slope = cfg.signal_gain * resp.small_field_slope * pol.signal_projection(cfg.phi_prp)
    if slope == 0:
        raise DomainError("zero field response at this plate phase; sensitivity undefined")
    var = pol.analyzed_variance(state, cfg.phi_prp, cfg.detector_efficiency)
    intensity = pol.analyzed_variance(state, 0.0, cfg.detector_efficiency)
    return SensitivityReport(
        density=params.density,
        b_min_measured=float(np.sqrt(var) / abs(slope)),
        b_min_shot_limited=float(1.0 / abs(slope)),
        intensity_noise_db=gs.to_db(intensity),
    )


def sensitivity_ratio(cfg: pol.DetectionConfig, params: psr.PhysicalParams) -> float:
    """Measured over shot-limited sensitivity; defined down to zero density."""
    state = psr.output_state(params)
    return float(np.sqrt(pol.analyzed_variance(state, cfg.phi_prp, cfg.detector_efficiency)))


def density_sensitivity_sweep(
    densities, resp: NmorResponse, cfg: pol.DetectionConfig, params_base: psr.PhysicalParams
) -> list[SensitivityReport]:
    densities = [float(n) for n in densities]
    if any(n <= 0 for n in densities) or any(b <= a for a, b in zip(densities, densities[1:])):
        raise ParameterDomainError("densities must be positive and strictly ascending")
    return [sensitivity(resp, cfg, replace(params_base, density=n)) for n in densities]
