import math
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, strategies as st

from psrnoise import gaussian as gs
from psrnoise import magnetometer as mag
from psrnoise import polarimeter as pol
from psrnoise.errors import DomainError, LinearizationError
from psrnoise.psr import PhysicalParams

RESP = mag.NmorResponse(slope_per_density=1e-9, linewidth=1e-6, density=2.5e12)
CFG = pol.DetectionConfig()


class TestRotation:
    def test_zero_field(self):
        assert mag.rotation_angle(RESP, 0.0) == 0.0

    @given(st.floats(-1e-4, 1e-4))
    def test_odd(self, b):
        assert mag.rotation_angle(RESP, -b) == -mag.rotation_angle(RESP, b)

    def test_peak_and_slope(self):
        assert mag.rotation_angle(RESP, RESP.linewidth) == pytest.approx(RESP.theta_max, rel=1e-14)
        h = 1e-6 * RESP.linewidth
        fd = (mag.rotation_angle(RESP, h) - mag.rotation_angle(RESP, -h)) / (2 * h)
        assert fd == pytest.approx(2 * RESP.theta_max / RESP.linewidth, rel=1e-9)
        assert fd == pytest.approx(RESP.slope_per_density * RESP.density, rel=1e-9)

    def test_maximum_at_linewidth(self):
        b = np.linspace(0, 10 * RESP.linewidth, 100_001)
        theta = mag.rotation_angle(RESP, b)
        assert b[np.argmax(theta)] == pytest.approx(RESP.linewidth, rel=1e-3)

    def test_slope_linear_in_density(self):
        a = replace(RESP, density=1e12).small_field_slope
        assert replace(RESP, density=3e12).small_field_slope == pytest.approx(3 * a, rel=1e-15)


class TestModulatedSignal:
    def test_zero_amplitude(self, fitted_state):
        sig, floor = mag.modulated_signal(RESP, 0.0, 1717.0, CFG, fitted_state)
        assert sig == float("-inf")
        assert floor == pol.measure(fitted_state, 0.0, CFG).noise_db

    def test_vacuum_floor(self):
        assert mag.modulated_signal(RESP, 5e-8, 1717.0, CFG, gs.vacuum())[1] == pytest.approx(0.0, abs=1e-12)

    def test_signal_level(self):
        sig, _ = mag.modulated_signal(RESP, 5e-8, 1717.0, CFG, gs.vacuum())
        theta = mag.rotation_angle(RESP, 5e-8)
        assert sig == pytest.approx(20 * math.log10(CFG.signal_gain * theta), abs=1e-12)

    def test_sign_symmetry(self, fitted_state):
        assert mag.modulated_signal(RESP, 5e-8, 1717.0, CFG, fitted_state) == \
            mag.modulated_signal(RESP, -5e-8, 1717.0, CFG, fitted_state)

    def test_linear_guard(self):
        with pytest.raises(LinearizationError):
            mag.modulated_signal(RESP, 0.2 * RESP.linewidth, 1717.0, CFG, gs.vacuum())

    def test_plate_phase_reduces_signal(self, fitted_state):
        ext = gs.extremal_quadratures(fitted_state)
        phi_sq = pol.analyzed_angle(ext.phi_min)
        s0, _ = mag.modulated_signal(RESP, 5e-8, 1717.0, CFG, fitted_state)
        s1, n1 = mag.modulated_signal(RESP, 5e-8, 1717.0, replace(CFG, phi_prp=phi_sq), fitted_state)
        assert s0 - s1 == pytest.approx(-20 * math.log10(abs(math.cos(phi_sq))), abs=1e-9)
        assert n1 == pytest.approx(-2.0, abs=1e-9)


class TestSensitivity:
    base = PhysicalParams()

    def test_zero_density_rejected(self):
        with pytest.raises(DomainError):
            mag.sensitivity(RESP, CFG, replace(self.base, density=0.0))

    def test_zero_slope_rejected(self):
        with pytest.raises(DomainError):
            mag.sensitivity(RESP, replace(CFG, phi_prp=np.pi / 2), replace(self.base, density=1e12))

    def test_ratio_limits(self):
        assert mag.sensitivity_ratio(CFG, replace(self.base, density=0.0)) == 1.0
        tiny = mag.sensitivity(RESP, CFG, replace(self.base, density=1.0))
        assert tiny.ratio == pytest.approx(1.0, abs=1e-20)

    def test_ratio_identity(self):
        for n in np.linspace(2e11, 5e12, 8):
            p = replace(self.base, density=n)
            r = mag.sensitivity(RESP, CFG, p)
            g = self.base.coupling * n * self.base.power
            assert r.ratio == pytest.approx(math.sqrt(1 + g * g), rel=1e-12)
            assert r.b_min_measured >= r.b_min_shot_limited > 0

    def test_shot_limited_inverse_density(self):
        a = mag.sensitivity(RESP, CFG, replace(self.base, density=1e12)).b_min_shot_limited
        b = mag.sensitivity(RESP, CFG, replace(self.base, density=4e12)).b_min_shot_limited
        assert b == pytest.approx(a / 4, rel=1e-14)

    def test_measured_improves_slower(self):
        n1 = 1.2e12
        m1, m2 = (mag.sensitivity(RESP, CFG, replace(self.base, density=n)) for n in (n1, 2 * n1))
        assert m2.b_min_measured < m1.b_min_measured
        assert m2.b_min_measured / m1.b_min_measured > m2.b_min_shot_limited / m1.b_min_shot_limited

    def test_intensity_noise_quadratic_in_density(self):
        ns = np.linspace(5e11, 5e12, 6)
        sweep = mag.density_sensitivity_sweep(ns, RESP, CFG, self.base)
        excess = np.array([10 ** (r.intensity_noise_db / 10) - 1 for r in sweep])
        np.testing.assert_allclose(excess / ns**2, excess[0] / ns[0] ** 2, rtol=1e-10)
        assert np.all(np.diff([r.intensity_noise_db for r in sweep]) > 0)

    def test_sweep_matches_single(self):
        sweep = mag.density_sensitivity_sweep([3e12], RESP, CFG, self.base)
        assert sweep == [mag.sensitivity(RESP, CFG, replace(self.base, density=3e12))]
        with pytest.raises(ValueError):
            mag.density_sensitivity_sweep([2e12, 1e12], RESP, CFG, self.base)
