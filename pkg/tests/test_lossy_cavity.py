"""Lossy-cavity (Lorentzian reservoir) model."""

import numpy as np
import pytest
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from nmflow.core import apply_map, trace_distance
from nmflow.core.sampling import random_density_matrix
from nmflow.errors import ZeroCrossingError
from nmflow.models import (LossyCavityModel, SpectralDensity, lossy_cavity_G,
                           lossy_cavity_rates, volterra_G)
from nmflow.models.lossy_cavity import _cavity_G, _cavity_G_derivative


class TestDecoherenceFunction:
    def test_initial_value(self):
        j = SpectralDensity.lorentzian_density(0.7, 1.0)
        assert lossy_cavity_G(j, 0.0) == pytest.approx(1.0)

    @pytest.mark.parametrize("gamma0,detuning,n", [(0.4, 0.0, 8001),
                                                   (2.0, 0.0, 8001),
                                                   (0.3, 2.0, 16001)])
    def test_closed_form_matches_volterra_discretization(self, gamma0, detuning, n):
        times = np.linspace(0.0, 15.0, n)
        direct = volterra_G(gamma0, 1.0, detuning, times)
        closed = _cavity_G(gamma0, 1.0, detuning, times)
        assert np.max(np.abs(direct - closed)) < 1e-6

    def test_ode_reduction_against_solve_ivp(self):
        gamma0, lam, detuning = 0.9, 1.0, 1.5
        mu = complex(lam, detuning)

        def rhs(t, y):
            return [y[1], -mu * y[1] - 0.5 * gamma0 * lam * y[0]]

        times = np.linspace(0.0, 10.0, 41)
        sol = solve_ivp(rhs, (0, 10.0), [1.0 + 0.0j, 0.0 + 0.0j], t_eval=times,
                        rtol=1e-11, atol=1e-13)
        assert np.max(np.abs(sol.y[0] - _cavity_G(gamma0, lam, detuning, times))) < 1e-9

    def test_first_zero_at_strong_coupling(self):
        # gamma0 = 2 lam: tan(sqrt(3) lam t / 2) = -sqrt(3) -> t = 4 pi /(3 sqrt 3)
        f = lambda t: _cavity_G(2.0, 1.0, 0.0, t).real
        t_zero = brentq(f, 2.0, 3.0, xtol=1e-12)
        assert t_zero == pytest.approx(4 * np.pi / (3 * np.sqrt(3)), abs=1e-8)

    def test_weak_coupling_is_real_and_monotone(self):
        times = np.linspace(0.0, 20.0, 400)
        g = _cavity_G(0.4, 1.0, 0.0, times)
        assert np.max(np.abs(g.imag)) < 1e-14
        assert np.all(np.diff(np.abs(g)) < 0)

    def test_derivative_closed_form(self):
        times = np.linspace(0.0, 6.0, 25)
        h = 1e-7
        for g0, det in ((0.7, 0.0), (1.8, 2.2)):
            fd = (_cavity_G(g0, 1.0, det, times + h)
                  - _cavity_G(g0, 1.0, det, times - h)) / (2 * h)
            assert np.max(np.abs(fd - _cavity_G_derivative(g0, 1.0, det, times))) < 1e-6

    def test_degenerate_threshold_case(self):
        # gamma0 = lam/2 makes d = 0; the limit form must stay regular
        g = _cavity_G(0.5, 1.0, 0.0, np.array([0.0, 1.0, 5.0]))
        expected = np.exp(-0.5 * np.array([0.0, 1.0, 5.0])) \
            * (1.0 + 0.5 * np.array([0.0, 1.0, 5.0]))
        assert np.max(np.abs(g - expected)) < 1e-12


class TestModel:
    def test_populations_scale_with_mod_g_squared(self):
        m = LossyCavityModel.from_params(1.4, 1.0, detuning=0.8)
        rho = random_density_matrix(2, 9)
        for t in (0.5, 2.0, 7.0):
            out = apply_map(m.map_at(t), rho)
            g = m.g(t)
            assert out.matrix[1, 1].real == pytest.approx(
                abs(g) ** 2 * rho.matrix[1, 1].real, abs=1e-12)
            assert out.matrix[1, 0] == pytest.approx(g * rho.matrix[1, 0], abs=1e-12)

    def test_t_zero_is_identity(self):
        from nmflow.core import QuantumMap
        m = LossyCavityModel.from_params(0.8, 1.0)
        assert np.max(np.abs(m.map_at(0.0).choi_matrix()
                             - QuantumMap.identity(2).choi_matrix())) < 1e-10

    def test_trace_distance_closure_eq5(self):
        # D = |G| sqrt(|G|^2 a^2 + |b|^2)
        m = LossyCavityModel.from_params(1.7, 1.0, detuning=0.5)
        r1 = random_density_matrix(2, 10)
        r2 = random_density_matrix(2, 11)
        a = r1.matrix[1, 1].real - r2.matrix[1, 1].real
        b = r1.matrix[1, 0] - r2.matrix[1, 0]
        for t in (0.4, 1.2, 3.3):
            g = abs(m.g(t))
            d = trace_distance(apply_map(m.map_at(t), r1),
                               apply_map(m.map_at(t), r2))
            assert d == pytest.approx(g * np.sqrt(g * g * a * a + abs(b) ** 2),
                                      abs=1e-9)

    def test_lindblad_limit_rate_becomes_constant(self):
        gamma0, lam = 0.02, 1.0
        m = LossyCavityModel.from_params(gamma0, lam)
        asymptote = lam - np.sqrt(lam * lam - 2 * gamma0 * lam)
        rates = [m.rates_at(t)[1] for t in (8.0, 12.0, 16.0)]
        # time independent at late times, and equal to gamma0 up to O(gamma0/lam)
        assert np.ptp(rates) < 1e-4
        assert rates[-1] == pytest.approx(asymptote, rel=1e-6)
        assert rates[-1] == pytest.approx(gamma0, rel=0.02)

    def test_rates_match_log_derivative_identity(self):
        # gamma = -2 Re(G'/G), S = -2 Im(G'/G) per the generator form
        j = SpectralDensity.lorentzian_density(0.9, 1.0, detuning=1.1)
        m = LossyCavityModel(j)
        for t in (0.7, 2.4):
            s, gamma = lossy_cavity_rates(j, t)
            ratio = m.g.derivative(t) / m.g(t)
            assert gamma == pytest.approx(-2.0 * ratio.real, abs=1e-12)
            assert s == pytest.approx(-2.0 * ratio.imag, abs=1e-12)

    def test_rate_query_at_zero_of_g_raises(self):
        m = LossyCavityModel.from_params(2.0, 1.0)
        t_zero = 4 * np.pi / (3 * np.sqrt(3))
        with pytest.raises(ZeroCrossingError):
            m.rates_at(t_zero)

    def test_detuned_sigma_equals_minus_rate_times_survival(self):
        # for the excited/ground projector pair: sigma(t) = -gamma(t) e^{-Gamma(t)}
        m = LossyCavityModel.from_params(0.3, 1.0, detuning=3.0)
        times = np.linspace(0.0, 8.0, 400)
        e = apply_map
        from nmflow.core import DensityMatrix
        r1 = DensityMatrix.basis_state(1)
        r2 = DensityMatrix.basis_state(0)
        d = np.array([trace_distance(e(m.map_at(float(t)), r1),
                                     e(m.map_at(float(t)), r2)) for t in times])
        # D = |G|^2 = e^{-Gamma}; compare the numerical derivative with -gamma D
        mid = 0.5 * (times[1:] + times[:-1])
        slope = np.diff(d) / np.diff(times)
        gam = np.array([m.rates_at(float(t))[1] for t in mid])
        d_mid = 0.5 * (d[1:] + d[:-1])
        assert np.max(np.abs(slope + gam * d_mid)) < 2e-4
