"""Stochastic oracle: quadrature sampling and synthetic polarimeter traces.

Random streams come from numpy's PCG64 bit generator, whose output for a
given seed is specified and platform independent.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import signal, stats

from . import gaussian as gs
from . import polarimeter as pol
from .errors import ParameterDomainError, SamplingError
from .magnetometer import NmorResponse, rotation_angle

ALGORITHMS = ("PCG64",)


@dataclass(frozen=True)
class RngSpec:
    seed: int = 0
    algorithm_id: str = "PCG64"

    def __post_init__(self):
        if not 0 <= int(self.seed) < 2**64:
            raise ParameterDomainError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.algorithm_id not in ALGORITHMS:
            raise ParameterDomainError(f"unsupported RNG algorithm {self.algorithm_id!r}")

    def generator(self, *stream: int) -> np.random.Generator:
        """Independent generator for the sub-stream keyed by ``stream``."""
        seq = np.random.SeedSequence(int(self.seed), spawn_key=tuple(stream))
        return np.random.Generator(np.random.PCG64(seq))


@dataclass(frozen=True)
class TimeSeries:
    sample_rate: float
    samples: np.ndarray

    def __post_init__(self):
        if not self.sample_rate > 0:
            raise ParameterDomainError("sample_rate must be > 0")
        if len(self.samples) < 2:
            raise ParameterDomainError("a time series needs at least 2 samples")

    @property
    def duration(self) -> float:
        return len(self.samples) / self.sample_rate


def sample_state(state: gs.GaussianState, count: int, rng: RngSpec, stream: tuple = ()) -> np.ndarray:
    """``count`` draws of ``(x, p)`` as a ``(count, 2)`` array.

    Standard normals are mapped through the lower Cholesky factor of the
    covariance, so a given seed always yields the same pairs.
    """
    if count < 1:
        raise ParameterDomainError("count must be >= 1")
    try:
        factor = np.linalg.cholesky(state.cov)
    except np.linalg.LinAlgError as exc:
        raise SamplingError("covariance is not positive definite") from exc
    z = rng.generator(*stream).standard_normal((count, 2))
    return state.mean + z @ factor.T


def synthesize_polarimeter_trace(
    state: gs.GaussianState,
    resp: NmorResponse,
    b_amp: float,
    f_mod: float,
    cfg: pol.DetectionConfig,
    duration: float,
    sample_rate: float,
    rng: RngSpec,
) -> TimeSeries:
    """Differential photocurrent for a sinusoidally modulated field.

    Noise is white in band with the variance the polarimeter reads at
    ``cfg.phi_prp``; one sample has unit variance at shot noise.
    """
    cfg.check()
    if not f_mod < sample_rate / 2:
        raise SamplingError(f"f_mod = {f_mod} Hz is at or above Nyquist ({sample_rate / 2} Hz)")
    n = int(round(duration * sample_rate))
    if n < 16:
        raise SamplingError(f"trace needs >= 16 samples, got {n}")
    t = np.arange(n) / sample_rate
    theta = rotation_angle(resp, b_amp * np.sin(2 * np.pi * f_mod * t))
    mean = cfg.signal_gain * theta * pol.signal_projection(cfg.phi_prp)
    var = pol.analyzed_variance(state, cfg.phi_prp, cfg.detector_efficiency)
    noise = rng.generator().standard_normal(n)
    return TimeSeries(float(sample_rate), mean + np.sqrt(var) * noise)


def periodogram(ts: TimeSeries, rbw: float, segments: int) -> tuple[np.ndarray, np.ndarray]:
    """Welch-averaged one-sided spectrum, linear, shot noise = 1.

    Segments are ``sample_rate / rbw`` samples long, Hann-windowed and
    non-overlapping; ``segments`` of them are averaged from the start of
    the trace.
    """
    if segments < 1:
        raise ParameterDomainError("segments must be >= 1")
    n = len(ts.samples)
    if rbw < ts.sample_rate / n:
        raise SamplingError(f"rbw = {rbw} Hz is finer than the record resolution {ts.sample_rate / n} Hz")
    nperseg = int(round(ts.sample_rate / rbw))
    if nperseg < 2:
        raise SamplingError(f"rbw = {rbw} Hz leaves fewer than 2 samples per segment")
    if nperseg * segments > n:
        raise SamplingError(
            f"{segments} segments of {nperseg} samples need {nperseg * segments} samples, trace has {n}"
        )
    freqs, psd = signal.welch(
        ts.samples[: nperseg * segments], fs=ts.sample_rate, window="hann",
        nperseg=nperseg, noverlap=0, detrend=False, scaling="density",
    )
    # unit-variance white noise has one-sided density 2 / fs
    return freqs, psd * ts.sample_rate / 2


def periodogram_db(ts: TimeSeries, rbw: float, segments: int) -> list[tuple[float, float]]:
    freqs, power = periodogram(ts, rbw, segments)
    with np.errstate(divide="ignore"):
        db = 10 * np.log10(power)
    return list(zip(freqs.tolist(), db.tolist()))


def empirical_quadrature_variance(samples: np.ndarray, phi: float) -> float:
    """Unbiased sample variance of ``x cos(phi) + p sin(phi)``."""
    proj = samples @ np.array([np.cos(phi), np.sin(phi)])
    return float(np.var(proj, ddof=1))


def chi2_bounds(variance: float, count: int, nsigma: float = 4.0) -> tuple[float, float]:
    """Two-sided ``nsigma``-equivalent acceptance band for an unbiased sample variance."""
    tail = stats.norm.sf(nsigma)
    dof = count - 1
    lo, hi = stats.chi2.ppf([tail, 1 - tail], dof)
    return variance * lo / dof, variance * hi / dof


def random_state(gen: np.random.Generator) -> gs.GaussianState:
    """A physical state built from vacuum by a random seed/shear/rotation/loss chain."""
    chain = [
        gs.ThermalSeed(*gen.uniform(0, 1, 2)),
        gs.Shear(gen.uniform(-1.5, 1.5)),
        gs.Rotation(gen.uniform(0, np.pi)),
        gs.Loss(gen.uniform(0.3, 1.0)),
    ]
    state = gs.apply_all(gs.vacuum(), chain)
    return gs.GaussianState(gen.normal(0, 1, 2), state.cov)


def validate_variances(rng: RngSpec, n_states: int, n_angles: int, count: int):
    """Compare sampled and analytic quadrature variances on random states.

    Returns rows ``(state, phi, analytic, empirical, z)`` and the largest
    ``|z|``, where ``z`` is in units of the estimator's standard deviation.
    """
    gen = rng.generator(0)
    rows = []
    worst = 0.0
    for i in range(n_states):
        state = random_state(gen)
        phis = gen.uniform(0, np.pi, n_angles)
        samples = sample_state(state, count, rng, stream=(1, i))
        for phi in phis:
            analytic = gs.quadrature_variance(state, phi)
            empirical = empirical_quadrature_variance(samples, phi)
            z = (empirical - analytic) / (analytic * np.sqrt(2 / (count - 1)))
            worst = max(worst, abs(z))
            rows.append((i, float(phi), analytic, empirical, float(z)))
    return rows, float(worst)


def noise_floor(freqs: np.ndarray, power: np.ndarray, f_tone: float | None = None, guard_bins: int = 2) -> float:
    """Mean linear power away from DC, Nyquist and the tone's main lobe."""
    keep = np.ones(len(freqs), dtype=bool)
    keep[0] = keep[-1] = False
    if f_tone is not None:
        df = freqs[1] - freqs[0]
        keep &= np.abs(freqs - f_tone) > (guard_bins + 0.5) * df
    return float(np.mean(power[keep]))
