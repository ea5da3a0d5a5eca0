"""Polarization self-rotation: physical parameters to a sheared vacuum state.

The off-resonant light-atom coupling, with the atomic orientation slaved to
the light's circular-component imbalance, acts on the orthogonal vacuum
mode as a shear whose strength grows linearly with atomic density and
optical power.  Excess spin noise that makes the output state impure is
modelled as a thermal seed added before the shear.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

import numpy as np

from . import gaussian as gs
from .errors import BracketExhaustedError, InfeasibleTargetError, ParameterDomainError

# Calibrated so that n = 2.5e12 cm^-3 at P = 4 mW gives g = 0.466, close to
# the pure-shear value reproducing 2 dB of squeezing.
DEFAULT_COUPLING = 4.66e-14


class ChannelOrder(enum.Enum):
    SHEAR_THEN_LOSS = "ShearThenLoss"
    LOSS_THEN_SHEAR = "LossThenShear"


@dataclass(frozen=True)
class PhysicalParams:
    density: float = 0.0  # cm^-3
    power: float = 4.0  # mW
    coupling: float = DEFAULT_COUPLING  # shear per (cm^-3 mW)
    transmission: float = 1.0
    thermal_seed: tuple[float, float] = (0.0, 0.0)
    channel_order: ChannelOrder = ChannelOrder.SHEAR_THEN_LOSS

    def __post_init__(self):
        object.__setattr__(self, "thermal_seed", tuple(float(v) for v in self.thermal_seed))
        object.__setattr__(self, "channel_order", ChannelOrder(self.channel_order))

    def check(self) -> None:
        problems = []
        if not self.density >= 0:
            problems.append(f"density must be >= 0, got {self.density}")
        if not self.power >= 0:
            problems.append(f"power must be >= 0, got {self.power}")
        if not self.coupling >= 0:
            problems.append(f"coupling must be >= 0, got {self.coupling}")
        if not 0 < self.transmission <= 1:
            problems.append(f"transmission must lie in (0, 1], got {self.transmission}")
        if len(self.thermal_seed) != 2 or not all(v >= 0 for v in self.thermal_seed):
            problems.append(f"thermal seed must be two values >= 0, got {self.thermal_seed}")
        if not problems and not math.isfinite(shear_strength(self)):
            problems.append("shear strength is not finite")
        if problems:
            raise ParameterDomainError("; ".join(problems))


@dataclass(frozen=True)
class SqueezingTargets:
    sq_db: float
    antisq_db: float

    def check(self) -> None:
        if not (self.sq_db <= 0 <= self.antisq_db):
            raise InfeasibleTargetError(
                f"need sq_db <= 0 <= antisq_db, got ({self.sq_db}, {self.antisq_db})"
            )
        if self.sq_db + self.antisq_db < -1e-12:
            raise InfeasibleTargetError(
                "squeezing exceeds the reciprocal of anti-squeezing (det(cov) < 1)"
            )


@dataclass(frozen=True)
class FitResult:
    g: float
    n_p: float
    sq_db: float
    antisq_db: float


def shear_strength(params: PhysicalParams) -> float:
    return params.coupling * params.density * params.power


def channels(params: PhysicalParams) -> list:
    n_x, n_p = params.thermal_seed
    shear, loss = gs.Shear(shear_strength(params)), gs.Loss(params.transmission)
    seq = [gs.ThermalSeed(n_x, n_p)]
    if params.channel_order is ChannelOrder.SHEAR_THEN_LOSS:
        return seq + [shear, loss]
    return seq + [loss, shear]


def output_state(params: PhysicalParams) -> gs.GaussianState:
    params.check()
    return gs.apply_all(gs.vacuum(), channels(params))


def extrema_db(state: gs.GaussianState) -> tuple[float, float]:
    ext = gs.extremal_quadratures(state)
    return gs.to_db(ext.v_min), gs.to_db(ext.v_max)


def _bisect(
    f, lo: float, hi: float, what: str, xtol: float = 1e-14, ftol: float = 1e-12, maxiter: int = 200
) -> float:
    """Root of monotone ``f`` on ``[lo, hi]`` by plain bisection.

    An endpoint within ``ftol`` of zero is accepted as the root.
    """
    f_lo, f_hi = f(lo), f(hi)
    if abs(f_lo) <= ftol:
        return lo
    if abs(f_hi) <= ftol:
        return hi
    if np.sign(f_lo) == np.sign(f_hi):
        raise BracketExhaustedError(f"no sign change for {what} on [{lo}, {hi}]")
    for _ in range(maxiter):
        mid = 0.5 * (lo + hi)
        f_mid = f(mid)
        if f_mid == 0 or hi - lo <= xtol:
            return mid
        if np.sign(f_mid) == np.sign(f_lo):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def fit_to_targets(
    targets: SqueezingTargets,
    transmission: float = 1.0,
    channel_order: ChannelOrder = ChannelOrder.SHEAR_THEN_LOSS,
    bracket: tuple[float, float] = (0.0, 10.0),
) -> FitResult:
    """Find shear ``g`` and phase-quadrature seed ``n_p`` reproducing the targets.

    Nested bisection: for each trial ``n_p`` the inner search picks the ``g``
    that matches the squeezed variance; the outer search adjusts ``n_p``
    until the anti-squeezed variance matches as well.
    """
    targets.check()
    lo, hi = bracket

    def state_for(g, n_p):
        p = PhysicalParams(
            density=1.0, power=1.0, coupling=g, transmission=transmission,
            thermal_seed=(0.0, n_p), channel_order=channel_order,
        )
        return gs.apply_all(gs.vacuum(), channels(p))

    def g_for(n_p):
        # squeezed variance decreases monotonically with g at fixed seed
        return _bisect(
            lambda g: extrema_db(state_for(g, n_p))[0] - targets.sq_db, lo, hi, "shear g"
        )

    def antisq_residual(n_p):
        return extrema_db(state_for(g_for(n_p), n_p))[1] - targets.antisq_db

    n_p = _bisect(antisq_residual, lo, hi, "seed n_p")
    g = g_for(n_p)
    sq, anti = extrema_db(state_for(g, n_p))
    return FitResult(g=g, n_p=n_p, sq_db=sq, antisq_db=anti)


def params_for_shear(g: float, base: PhysicalParams) -> PhysicalParams:
    """Copy of ``base`` with the density chosen to give shear ``g``."""
    if base.coupling * base.power == 0:
        raise ParameterDomainError("coupling * power is zero; no density gives nonzero shear")
    return replace(base, density=g / (base.coupling * base.power))


def density_sweep(params_base: PhysicalParams, densities) -> list[tuple[float, float, float]]:
    """Squeezing and anti-squeezing (dB) at each atomic density."""
    densities = [float(n) for n in densities]
    if any(n < 0 for n in densities) or any(b < a for a, b in zip(densities, densities[1:])):
        raise ParameterDomainError("densities must be non-negative and ascending")
    rows = []
    for n in densities:
        sq, anti = extrema_db(output_state(replace(params_base, density=n)))
        rows.append((n, sq, anti))
    return rows
