"""Three-Pauli-channel (random unitary) model."""

import numpy as np
import pytest

from nmflow.core import QuantumMap, apply_map, is_completely_positive
from nmflow.core.sampling import random_density_matrix
from nmflow.models import RandomUnitaryModel


class TestCoefficients:
    def test_equal_constant_rates_closed_form(self):
        gamma = 0.8
        m = RandomUnitaryModel(gamma, gamma, gamma)
        for t in (0.0, 0.5, 2.0):
            p = m.coefficients(t)
            e = np.exp(-2 * gamma * t)
            assert p[0] == pytest.approx(0.25 * (1 + 3 * e), abs=1e-12)
            assert np.allclose(p[1:], 0.25 * (1 - e), atol=1e-12)
            assert p.sum() == pytest.approx(1.0, abs=1e-14)

    def test_zero_rates_give_identity(self):
        m = RandomUnitaryModel(0.0, 0.0, 0.0)
        p = m.coefficients(3.0)
        assert p[0] == pytest.approx(1.0)
        rho = random_density_matrix(2, 1)
        assert np.allclose(apply_map(m.map_at(3.0), rho).matrix, rho.matrix)

    def test_negative_tanh_rate_keeps_map_cp(self):
        # one rate negative at all times, yet p_i stay nonnegative
        m = RandomUnitaryModel(1.0, 1.0, lambda t: -np.tanh(t))
        for t in np.linspace(0.0, 6.0, 25):
            p = m.coefficients(float(t))
            assert np.min(p) >= -1e-12
        assert is_completely_positive(m.map_at(4.0)).is_cp

    def test_non_cp_instance_reported_not_raised(self):
        m = RandomUnitaryModel(0.1, 0.1, -0.15)
        p = m.coefficients(2.0)
        assert np.min(p) < 0  # reported state: family not CP
        check = is_completely_positive(m.map_at(2.0))
        assert not check.is_cp


class TestBlochStructure:
    def test_relaxation_times(self):
        m = RandomUnitaryModel(1.0, 2.0, 3.0)
        assert np.allclose(m.relaxation_times(0.0),
                           [1.0 / 5.0, 1.0 / 4.0, 1.0 / 3.0])

    def test_bloch_contraction_factors_are_pair_exponentials(self):
        m = RandomUnitaryModel(0.5, 0.25, 0.75)
        t = 1.3
        r = m.map_at(t).transfer_matrix()
        gammas = np.array([0.5, 0.25, 0.75]) * t
        expected = [np.exp(-(gammas[1] + gammas[2])),
                    np.exp(-(gammas[0] + gammas[2])),
                    np.exp(-(gammas[0] + gammas[1]))]
        assert np.allclose(np.diag(r)[1:], expected, atol=1e-10)

    def test_volume_equals_exp_minus_twice_rate_sum(self):
        m = RandomUnitaryModel(0.5, 0.25, lambda t: 0.1 * t)
        for t in (0.7, 1.9):
            mat, shift = m.map_at(t).bloch_affine()
            gam = m.integrated_rates(t)
            assert abs(np.linalg.det(mat)) == pytest.approx(
                np.exp(-2.0 * gam.sum()), abs=1e-9)
            assert np.allclose(shift, 0.0, atol=1e-12)

    def test_pairwise_rate_sums(self):
        m = RandomUnitaryModel(1.0, -0.4, 0.2)
        assert np.allclose(m.pairwise_rate_sums(0.0), [0.6, 1.2, -0.2])


def test_map_at_zero_is_identity():
    m = RandomUnitaryModel(0.4, 0.7, lambda t: 0.2 * t)
    ident = QuantumMap.identity(2).choi_matrix()
    assert np.max(np.abs(m.map_at(0.0).choi_matrix() - ident)) < 1e-10


def test_generator_reproduces_map_propagation():
    m = RandomUnitaryModel(0.3, 0.1, lambda t: 0.2 * np.cos(t))
    gen = m.generator()
    times = np.linspace(0.0, 2.0, 5)
    maps = gen.propagators(times)
    rho = random_density_matrix(2, 3)
    for t, prop in zip(times, maps):
        direct = m.map_at(float(t)).apply_matrix(rho.matrix)
        assert np.max(np.abs(prop.apply_matrix(rho.matrix) - direct)) < 1e-8
