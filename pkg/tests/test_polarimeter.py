import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from conftest import FIT_G, FIT_NP
from psrnoise import gaussian as gs
from psrnoise import polarimeter as pol
from psrnoise.errors import LinearizationError, ParameterDomainError
from strategies import angles, states

CFG = pol.DetectionConfig(signal_gain=100.0)


def at(phi, **kw):
    return pol.DetectionConfig(phi_prp=phi, signal_gain=kw.pop("signal_gain", 100.0), **kw)


class TestMeasure:
    @pytest.mark.parametrize("phi", [0.0, 0.3, np.pi / 2, 2.0])
    def test_vacuum_no_rotation(self, phi):
        rec = pol.measure(gs.vacuum(), 0.0, at(phi))
        assert rec.mean_signal == 0.0
        assert rec.noise_db == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize("phi", [np.pi / 2, -np.pi / 2, 3 * np.pi / 2])
    def test_signal_vanishes_at_quarter_turn(self, phi):
        assert pol.measure(gs.vacuum(), 0.05, at(phi)).mean_signal == 0.0

    def test_signal_law(self):
        rec = pol.measure(gs.vacuum(), 0.01, at(0.7))
        assert rec.mean_signal == pytest.approx(100.0 * 0.01 * math.cos(0.7), rel=1e-14)

    def test_fitted_state_intensity_noise(self, fitted_state):
        # analytic V(0) = 1 + g^2 (1 + n_p) for a pre-shear phase seed
        expected = 10 * math.log10(1 + FIT_G**2 * (1 + FIT_NP))
        assert pol.measure(fitted_state, 0.0, CFG).noise_db == pytest.approx(expected, abs=1e-9)

    def test_record_consistency(self, fitted_state):
        rec = pol.measure(fitted_state, 0.001, at(0.4))
        assert rec.noise_db == pytest.approx(10 * math.log10(rec.noise_variance), abs=1e-12)
        assert rec.noise_variance > 0 and rec.phi_prp == 0.4

    @pytest.mark.parametrize("theta", [0.1001, -0.5, float("nan")])
    def test_linearization_guard(self, theta):
        with pytest.raises(LinearizationError):
            pol.measure(gs.vacuum(), theta, CFG)

    def test_config_guard(self):
        with pytest.raises(ParameterDomainError):
            pol.measure(gs.vacuum(), 0.0, pol.DetectionConfig(detector_efficiency=0.0))
        with pytest.raises(ParameterDomainError):
            pol.measure(gs.vacuum(), 0.0, pol.DetectionConfig(lo_power=0.0))

    def test_efficiency_mixes_in_vacuum(self, fitted_state):
        rec = pol.measure(fitted_state, 0.0, at(0.0, detector_efficiency=0.5))
        v0 = gs.quadrature_variance(fitted_state, 0.0)
        assert rec.noise_variance == pytest.approx(0.5 * v0 + 0.5, rel=1e-14)


class TestPhaseScan:
    def test_vacuum_flat(self):
        phis = np.linspace(0, 2 * np.pi, 41)
        recs = pol.phase_scan(gs.vacuum(), 0.01, phis, CFG)
        np.testing.assert_allclose([r.noise_db for r in recs], 0.0, atol=1e-12)
        np.testing.assert_allclose([r.mean_signal for r in recs], 100 * 0.01 * np.cos(phis), atol=1e-15)

    def test_signal_peak_and_noise_floor(self, fitted_state):
        phis = np.linspace(0, np.pi, 2001)
        recs = pol.phase_scan(fitted_state, 0.01, phis, CFG)
        power = np.array([r.mean_signal for r in recs]) ** 2
        assert np.argmax(power) == 0
        ext = gs.extremal_quadratures(fitted_state)
        step = phis[1] - phis[0]
        # quadratic in the angle error near the minimum
        slack = (ext.v_max - ext.v_min) * step**2
        assert min(r.noise_variance for r in recs) == pytest.approx(ext.v_min, abs=slack)

    def test_pure_shear_min_noise_plate_phase(self):
        g = oracles.pure_shear_g_for_squeezing(-2.0)
        state = gs.apply(gs.vacuum(), gs.Shear(g))
        state_angle = 0.5 * math.atan2(2 * g, g * g) + math.pi / 2
        assert state_angle == pytest.approx(2.2421, abs=1e-4)
        phis = np.linspace(0, np.pi, 10_001)
        noise = [r.noise_variance for r in pol.phase_scan(state, 0.0, phis, CFG)]
        best = phis[int(np.argmin(noise))]
        assert best == pytest.approx(math.pi - state_angle, abs=phis[1] - phis[0])
        assert pol.analyzed_angle(gs.extremal_quadratures(state).phi_min) == pytest.approx(math.pi - state_angle)


class TestProperties:
    @given(states(), angles)
    def test_noise_pi_periodic_signal_2pi(self, state, phi):
        a = pol.measure(state, 0.02, at(phi))
        b = pol.measure(state, 0.02, at(phi + np.pi))
        c = pol.measure(state, 0.02, at(phi + 2 * np.pi))
        assert a.noise_variance == pytest.approx(b.noise_variance, rel=1e-9)
        assert a.mean_signal == pytest.approx(-b.mean_signal, abs=1e-9)
        assert a.mean_signal == pytest.approx(c.mean_signal, abs=1e-9)

    @given(states(), angles, st.floats(-0.1, 0.1))
    def test_signal_noise_decoupled(self, state, phi, theta):
        rec = pol.measure(state, theta, at(phi))
        assert rec.noise_variance == pol.measure(state, 0.0, at(phi)).noise_variance
        assert rec.mean_signal == pol.measure(gs.vacuum(), theta, at(phi)).mean_signal

    @given(states(), angles)
    def test_matches_explicit_rotation(self, state, phi):
        rotated = gs.apply(state, gs.Rotation(phi))
        expected = gs.quadrature_variance(rotated, 0.0)
        assert pol.analyzed_variance(state, phi) == pytest.approx(expected, rel=1e-12)

    @given(states(), angles)
    def test_efficiency_limit(self, state, phi):
        rec = pol.measure(state, 0.0, at(phi, detector_efficiency=1e-12))
        assert rec.noise_db == pytest.approx(0.0, abs=1e-9)

    def test_scan_matches_extrema(self, fitted_state):
        phis = np.linspace(0, np.pi, 10_000, endpoint=False)
        noise = np.array([r.noise_variance for r in pol.phase_scan(fitted_state, 0.0, phis, CFG)])
        ext = gs.extremal_quadratures(fitted_state)
        best = phis[int(np.argmin(noise))]
        target = pol.analyzed_angle(ext.phi_min)
        dist = min(abs(best - target), np.pi - abs(best - target))
        assert dist <= phis[1] - phis[0]
