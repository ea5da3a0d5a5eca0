"""Balanced polarimeter behind a phase-retarding plate.

The plate rotates the analyzed quadrature by ``phi_prp``; the polarimeter
reads the intensity quadrature of the rotated state.  A small polarization
rotation ``theta`` of the strong field shows up as a mean differential
signal that is projected by ``cos(phi_prp)`` as the Stokes vector tips out
of the equatorial plane.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import gaussian as gs
from .errors import LinearizationError, ParameterDomainError

MAX_ROTATION = 0.1  # rad; keeps sin(2 theta) within 1% of 2 theta


@dataclass(frozen=True)
class DetectionConfig:
    phi_prp: float = 0.0  # rad
    lo_power: float = 4.0  # mW
    detector_efficiency: float = 1.0
    # differential signal per radian of rotation, in shot-noise amplitude units per sqrt(Hz)
    signal_gain: float = 1.0e4

    def check(self) -> None:
        problems = []
        if not self.lo_power > 0:
            problems.append(f"lo_power must be > 0, got {self.lo_power}")
        if not 0 < self.detector_efficiency <= 1:
            problems.append(f"detector_efficiency must lie in (0, 1], got {self.detector_efficiency}")
        if not (np.isfinite(self.signal_gain) and self.signal_gain > 0):
            problems.append(f"signal_gain must be finite and > 0, got {self.signal_gain}")
        if not np.isfinite(self.phi_prp):
            problems.append("phi_prp must be finite")
        if problems:
            raise ParameterDomainError("; ".join(problems))


@dataclass(frozen=True)
class MeasurementRecord:
    mean_signal: float
    noise_variance: float
    noise_db: float
    phi_prp: float


def signal_projection(phi_prp: float) -> float:
    """``cos(phi_prp)`` with odd multiples of pi/2 mapped to exactly zero."""
    k = phi_prp / (np.pi / 2)
    nearest = round(k)
    if nearest % 2 == 1 and abs(k - nearest) <= 4 * np.finfo(float).eps * max(1.0, abs(k)):
        return 0.0
    return float(np.cos(phi_prp))


def analyzed_variance(state: gs.GaussianState, phi_prp: float, efficiency: float = 1.0) -> float:
    """Noise variance at the polarimeter, detector loss included.

    Reading ``x`` after ``Rotation(phi_prp)`` is the same as reading the
    unrotated state's quadrature at ``-phi_prp``.
    """
    return efficiency * gs.quadrature_variance(state, -phi_prp) + (1 - efficiency)


def analyzed_angle(state_phi: float) -> float:
    """Plate phase at which the polarimeter reads the state quadrature ``state_phi``.

    Rotating the state by ``phi_prp`` and reading ``x`` picks out the state's
    quadrature at ``-phi_prp``, so the mapping is a sign flip (mod pi).
    """
    w = float(np.mod(-state_phi, np.pi))
    return 0.0 if w >= np.pi else w


def measure(state: gs.GaussianState, rotation_angle: float, cfg: DetectionConfig) -> MeasurementRecord:
    cfg.check()
    if not abs(rotation_angle) <= MAX_ROTATION:
        raise LinearizationError(
            f"|rotation| = {abs(rotation_angle):.3g} rad exceeds the small-angle limit {MAX_ROTATION}"
        )
    mean = cfg.signal_gain * rotation_angle * signal_projection(cfg.phi_prp)
    var = analyzed_variance(state, cfg.phi_prp, cfg.detector_efficiency)
    return MeasurementRecord(float(mean), var, gs.to_db(var), float(cfg.phi_prp))


def phase_scan(state: gs.GaussianState, rotation_angle: float, phis, cfg: DetectionConfig | None = None):
    base = cfg or DetectionConfig()
    return [
        measure(state, rotation_angle, replace(base, phi_prp=float(phi)))
        for phi in phis
    ]


def signal_db(mean_signal: float) -> float:
    """Signal power in dB relative to unit (shot-noise) amplitude; ``-inf`` when absent."""
    if mean_signal == 0:
        return float("-inf")
    return float(20 * np.log10(abs(mean_signal)))
