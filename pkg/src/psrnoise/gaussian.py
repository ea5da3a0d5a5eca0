"""Single-mode Gaussian states of the vacuum polarization port.

Quadratures are normalized so that the vacuum covariance is the identity:
a variance of 1 is the shot-noise level (0 dB).  ``x`` is the intensity
quadrature read by the polarimeter with no phase retardation, ``p`` the
phase quadrature.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .errors import ParameterDomainError

DET_TOL = 1e-9


@dataclass(frozen=True)
class GaussianState:
    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        mean = np.array(self.mean, dtype=float).reshape(2)
        cov = np.array(self.cov, dtype=float).reshape(2, 2)
        # symmetrize exactly; channels only ever produce symmetric results up to rounding
        cov = 0.5 * (cov + cov.T)
        mean.setflags(write=False)
        cov.setflags(write=False)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)

    @property
    def det(self) -> float:
        return float(np.linalg.det(self.cov))

    def check(self) -> None:
        """Raise ``ParameterDomainError`` unless the state is physical."""
        if not np.all(np.isfinite(self.cov)) or not np.all(np.isfinite(self.mean)):
            raise ParameterDomainError("state has non-finite entries")
        if np.any(np.linalg.eigvalsh(self.cov) <= 0):
            raise ParameterDomainError("covariance is not positive definite")
        if self.det < 1 - DET_TOL:
            raise ParameterDomainError(
                f"uncertainty relation violated: det(cov) = {self.det:.12g} < 1"
            )


@dataclass(frozen=True)
class Shear:
    """One-axis-twisting shear: the phase quadrature feeds the intensity quadrature."""

    g: float


@dataclass(frozen=True)
class Rotation:
    theta: float


@dataclass(frozen=True)
class Loss:
    eta: float

    def __post_init__(self):
        if not (0 < self.eta <= 1):
            raise ParameterDomainError(f"transmission must lie in (0, 1], got {self.eta}")


@dataclass(frozen=True)
class ThermalSeed:
    n_x: float = 0.0
    n_p: float = 0.0

    def __post_init__(self):
        if self.n_x < 0 or self.n_p < 0:
            raise ParameterDomainError(
                f"thermal seed variances must be >= 0, got ({self.n_x}, {self.n_p})"
            )


Channel = Union[Shear, Rotation, Loss, ThermalSeed]


@dataclass(frozen=True)
class QuadratureExtrema:
    v_min: float
    v_max: float
    phi_min: float
    phi_max: float
    degenerate: bool = field(default=False)


def vacuum() -> GaussianState:
    return GaussianState(np.zeros(2), np.eye(2))


def shear_matrix(g: float) -> np.ndarray:
    return np.array([[1.0, g], [0.0, 1.0]])


def rotation_matrix(theta: float) -> np.ndarray:
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]])


def apply(state: GaussianState, ch: Channel) -> GaussianState:
    if isinstance(ch, (Shear, Rotation)):
        if not np.isfinite(ch.g if isinstance(ch, Shear) else ch.theta):
            raise ParameterDomainError(f"non-finite channel parameter in {ch!r}")
        m = shear_matrix(ch.g) if isinstance(ch, Shear) else rotation_matrix(ch.theta)
        return GaussianState(m @ state.mean, m @ state.cov @ m.T)
    if isinstance(ch, Loss):
        eta = ch.eta
        return GaussianState(np.sqrt(eta) * state.mean, eta * state.cov + (1 - eta) * np.eye(2))
    if isinstance(ch, ThermalSeed):
        return GaussianState(state.mean, state.cov + np.diag([ch.n_x, ch.n_p]))
    raise TypeError(f"unknown channel {ch!r}")


def apply_all(state: GaussianState, channels) -> GaussianState:
    for ch in channels:
        state = apply(state, ch)
    return state


def quadrature_variance(state: GaussianState, phi: float) -> float:
    """Variance of ``x cos(phi) + p sin(phi)``.

    Evaluated in double-angle form so isotropic states give exactly their
    diagonal value at every angle.
    """
    (a, c), (_, b) = state.cov
    return float(0.5 * (a + b) + 0.5 * (a - b) * np.cos(2 * phi) + c * np.sin(2 * phi))


def to_db(variance: float) -> float:
    return float(10 * np.log10(variance))


def noise_db(state: GaussianState, phi: float) -> float:
    return to_db(quadrature_variance(state, phi))


def extremal_quadratures(state: GaussianState, rtol: float = 1e-12) -> QuadratureExtrema:
    """Squeezed and anti-squeezed quadratures of ``state``.

    Variances are the covariance eigenvalues.  The angles solve
    ``tan 2phi = 2 c_xp / (c_xx - c_pp)``; the branch is picked by evaluating
    the quadrature variance, and both are reported in ``[0, pi)``.  For an
    isotropic covariance the angle is arbitrary and ``phi_min = 0``.
    """
    cov = state.cov
    v_min, v_max = (float(v) for v in np.linalg.eigvalsh(cov))
    if v_max - v_min <= rtol * max(abs(v_max), 1.0):
        return QuadratureExtrema(v_min, v_max, 0.0, np.pi / 2, degenerate=True)
    half = 0.5 * np.arctan2(2 * cov[0, 1], cov[0, 0] - cov[1, 1])
    other = half + np.pi / 2
    if quadrature_variance(state, half) >= quadrature_variance(state, other):
        phi_max, phi_min = half, other
    else:
        phi_max, phi_min = other, half
    return QuadratureExtrema(v_min, v_max, _wrap_pi(phi_min), _wrap_pi(phi_max))


def _wrap_pi(phi: float) -> float:
    w = float(np.mod(phi, np.pi))
    return 0.0 if w >= np.pi else w
