"""Time-local generators and their propagators."""

import numpy as np
import pytest

from nmflow.core import (Channel, DensityMatrix, SIGMA_MINUS, SIGMA_Z,
                         TimeLocalGenerator)
from nmflow.core.sampling import random_density_matrix
from nmflow.errors import ValidationError


def test_linear_dependence_rejected():
    with pytest.raises(ValidationError, match="independent"):
        TimeLocalGenerator(2, None, (Channel(SIGMA_Z, lambda t: 1.0),
                                     Channel(2.0 * SIGMA_Z, lambda t: 1.0)))


def test_non_hermitian_hamiltonian_rejected():
    with pytest.raises(ValidationError, match="Hermitian"):
        TimeLocalGenerator(2, lambda t: np.array([[0.0, 1.0], [0.0, 0.0]]),
                           (Channel(SIGMA_Z, lambda t: 1.0),))


def test_constant_dephasing_propagator_matches_closed_form():
    gamma = 0.3
    gen = TimeLocalGenerator(2, None, (Channel(SIGMA_Z, lambda t: gamma),))
    times = np.linspace(0.0, 2.0, 9)
    maps = gen.propagators(times)
    rho = DensityMatrix(np.array([[0.6, 0.2 - 0.1j], [0.2 + 0.1j, 0.4]]))
    for t, m in zip(times, maps):
        out = m.apply_matrix(rho.matrix)
        # coherence scales by e^{-2 gamma t}, populations frozen
        assert out[1, 0] == pytest.approx(rho.matrix[1, 0] * np.exp(-2 * gamma * t),
                                          abs=1e-9)
        assert out[0, 0] == pytest.approx(0.6, abs=1e-9)


def test_amplitude_damping_evolution_matches_exponential_decay():
    gamma = 0.5
    gen = TimeLocalGenerator(2, None, (Channel(SIGMA_MINUS, lambda t: gamma),))
    times = np.linspace(0.0, 3.0, 7)
    rho0 = DensityMatrix(np.array([[0.2, 0.3], [0.3, 0.8]]))
    traj = gen.evolve(rho0, times)
    for t, rho in zip(times, traj):
        assert rho[1, 1].real == pytest.approx(0.8 * np.exp(-gamma * t), abs=1e-9)
        assert rho[1, 0] == pytest.approx(0.3 * np.exp(-gamma * t / 2), abs=1e-9)


def test_propagator_agrees_with_state_evolution():
    gen = TimeLocalGenerator(
        2, lambda t: 0.4 * SIGMA_Z,
        (Channel(SIGMA_MINUS, lambda t: 0.2 + 0.1 * np.sin(t)),))
    times = np.linspace(0.0, 2.5, 6)
    rho0 = random_density_matrix(2, 13)
    traj = gen.evolve(rho0, times)
    for t, m, rho in zip(times, gen.propagators(times), traj):
        assert np.max(np.abs(m.apply_matrix(rho0.matrix) - rho)) < 1e-8
