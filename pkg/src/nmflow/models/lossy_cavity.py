"""Two-level system decaying into a Lorentzian (lossy cavity) reservoir.

The map transforms populations and coherences as

    rho_11(t) = |G(t)|^2 rho_11(0),     rho_10(t) = G(t) rho_10(0),

where G solves the memory-kernel equation dG/dt = -int f(t-t1) G(t1) dt1
with the exponential kernel f(tau) = (gamma0 lam / 2) e^{-(lam + i
Delta) tau} of the Lorentzian spectral density.  That integral equation
is equivalent to the constant-coefficient initial value problem

    G'' + (lam + i Delta) G' + (gamma0 lam / 2) G = 0,   G(0)=1, G'(0)=0,

whose exact solution is evaluated here:

    G(t) = e^{-(lam + i Delta) t / 2} [cosh(d t/2) + ((lam + i Delta)/d)
           sinh(d t/2)],      d = sqrt((lam + i Delta)^2 - 2 gamma0 lam).

For Delta = 0 this is the textbook resonant closed form; weak coupling
gamma0 < lam/2 gives a real monotone G, stronger coupling an
oscillatory |G| with zeros where the map stops being invertible.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from ..config import DEFAULT, Tolerances
from ..errors import ValidationError, ZeroCrossingError
from ..core.generators import Channel, TimeLocalGenerator
from ..core.maps import QuantumMap
from ..core.states import SIGMA_MINUS, SIGMA_Z
from .base import DynamicalModel
from .dephasing import DecoherenceFunction
from .spectral import SpectralDensity


def _cavity_params(j: SpectralDensity) -> tuple[float, float, float]:
    if j.kind != "lorentzian":
        raise ValidationError("lossy cavity needs a lorentzian spectral density")
    return j.gamma0, j.width, j.detuning


def lossy_cavity_G(j: SpectralDensity, t):
    """Decoherence function of the lossy cavity; scalar or array t."""
    gamma0, lam, detuning = _cavity_params(j)
    return _cavity_G(gamma0, lam, detuning, t)


def _cavity_d(gamma0: float, lam: float, detuning: float) -> complex:
    mu2 = complex(lam, detuning)          # lam + i Delta
    return np.sqrt(mu2 * mu2 - 2.0 * gamma0 * lam + 0.0j)


def _cavity_G(gamma0: float, lam: float, detuning: float, t):
    scalar = np.isscalar(t)
    times = np.atleast_1d(np.asarray(t, dtype=float))
    mu2 = complex(lam, detuning)
    d = _cavity_d(gamma0, lam, detuning)
    half = 0.5 * times
    if abs(d) > 1e-12 * abs(mu2):
        out = np.exp(-mu2 * half) * (np.cosh(d * half)
                                     + (mu2 / d) * np.sinh(d * half))
    else:
        # degenerate root: G = e^{-mu2 t/2} (1 + mu2 t / 2)
        out = np.exp(-mu2 * half) * (1.0 + mu2 * half)
    return complex(out[0]) if scalar else out


def _cavity_G_derivative(gamma0: float, lam: float, detuning: float, t):
    scalar = np.isscalar(t)
    times = np.atleast_1d(np.asarray(t, dtype=float))
    mu2 = complex(lam, detuning)
    d = _cavity_d(gamma0, lam, detuning)
    half = 0.5 * times
    if abs(d) > 1e-12 * abs(mu2):
        out = -(gamma0 * lam / d) * np.exp(-mu2 * half) * np.sinh(d * half)
    else:
        out = -(gamma0 * lam) * np.exp(-mu2 * half) * half
    return complex(out[0]) if scalar else out


def volterra_G(gamma0: float, lam: float, detuning: float, times) -> np.ndarray:
    """Direct trapezoid discretization of the memory-kernel equation.

    Product integration on a uniform grid, independent of the closed
    form; exists to validate it.  Second-order accurate.
    """
    times = np.asarray(times, dtype=float)
    steps = np.diff(times)
    if len(steps) == 0:
        return np.ones(1, dtype=complex)
    dt = float(steps[0])
    if np.max(np.abs(steps - dt)) > 1e-12 * dt:
        raise ValidationError("volterra_G requires a uniform time grid")
    n = len(times)
    mu = complex(lam, detuning)
    kern = 0.5 * gamma0 * lam * np.exp(-mu * times)

    g = np.zeros(n, dtype=complex)
    gdot = np.zeros(n, dtype=complex)
    g[0] = 1.0
    # trapezoid memory sum with the j = k term implicit; the update for
    # G_k stays linear, so it is solved exactly at each step
    denom = 1.0 + 0.25 * dt * dt * kern[0]
    for k in range(1, n):
        weights = np.full(k, dt)
        weights[0] = 0.5 * dt
        known = -np.dot(weights * kern[k:0:-1], g[:k])
        g[k] = (g[k - 1] + 0.5 * dt * (gdot[k - 1] + known)) / denom
        gdot[k] = known - 0.5 * dt * kern[0] * g[k]
    return g


class LossyCavityModel(DynamicalModel):
    """Amplitude-damping family driven by the cavity decoherence function."""

    def __init__(self, j: SpectralDensity, tols: Tolerances = DEFAULT):
        self.j = j
        self.gamma0, self.lam, self.detuning = _cavity_params(j)
        self.tols = tols
        self.g = DecoherenceFunction(
            evaluator=lambda t: _cavity_G(self.gamma0, self.lam, self.detuning, t),
            vector_evaluator=lambda ts: _cavity_G(self.gamma0, self.lam,
                                                  self.detuning, ts),
            derivative=lambda t: _cavity_G_derivative(self.gamma0, self.lam,
                                                      self.detuning, t),
            provenance="closed_form", t_scale=1.0 / self.lam, tols=tols)

    @classmethod
    def from_params(cls, gamma0: float, lam: float, detuning: float = 0.0,
                    omega0: float = 0.0, tols: Tolerances = DEFAULT) -> "LossyCavityModel":
        return cls(SpectralDensity.lorentzian_density(gamma0, lam, detuning, omega0),
                   tols=tols)

    @property
    def time_scale(self) -> float:
        return 1.0 / self.lam

    def decoherence_function(self) -> DecoherenceFunction:
        return self.g

    def superop_at(self, t: float) -> np.ndarray:
        return self.superops([t])[0]

    def superops(self, times) -> np.ndarray:
        gs = self.g.values(times)
        mod2 = np.abs(gs) ** 2
        out = np.zeros((len(gs), 4, 4), dtype=complex)
        out[:, 0, 0] = 1.0
        out[:, 0, 3] = 1.0 - mod2   # ground population gains what the excited loses
        out[:, 1, 1] = gs
        out[:, 2, 2] = gs.conj()
        out[:, 3, 3] = mod2
        return out

    def map_at(self, t: float) -> QuantumMap:
        gval = self.g(t)
        mod = min(abs(gval), 1.0)
        k0 = np.array([[1.0, 0.0], [0.0, gval]], dtype=complex)
        k1 = np.sqrt(max(1.0 - mod * mod, 0.0)) * SIGMA_MINUS
        return QuantumMap.from_kraus([k0, k1], tols=self.tols)

    def rates_at(self, t: float) -> tuple[float, float]:
        """(Lamb shift S(t), decay rate gamma(t)) of the time-local generator."""
        gval = self.g(t)
        if abs(gval) <= self.tols.zero_coherence:
            raise ZeroCrossingError(
                f"|G({t})| = {abs(gval):.3e}: generator undefined at a zero of G",
                time=t, operation="lossy_cavity_rates")
        ratio = self.g.derivative(t) / gval
        return -2.0 * ratio.imag, -2.0 * ratio.real

    def rate_samples(self, times) -> np.ndarray:
        times = np.asarray(times, dtype=float)
        gs = self.g.values(times)
        if np.min(np.abs(gs)) <= self.tols.zero_coherence:
            t_bad = float(times[np.argmin(np.abs(gs))])
            raise ZeroCrossingError(f"|G| vanishes at t = {t_bad}", time=t_bad,
                                    operation="lossy_cavity_rates")
        ratio = _cavity_G_derivative(self.gamma0, self.lam, self.detuning, times) / gs
        return (-2.0 * ratio.real)[np.newaxis, :]

    def generator(self) -> TimeLocalGenerator:
        def hamiltonian(t):
            s, _ = self.rates_at(float(t))
            return 0.25 * s * SIGMA_Z

        return TimeLocalGenerator(
            dim=2, hamiltonian=hamiltonian,
            channels=(Channel(SIGMA_MINUS, lambda t: self.rates_at(float(t))[1]),),
            tols=self.tols)


def lossy_cavity_map(j: SpectralDensity, t: float,
                     tols: Tolerances = DEFAULT) -> QuantumMap:
    return LossyCavityModel(j, tols).map_at(t)


def lossy_cavity_rates(j: SpectralDensity, t: float,
                       tols: Tolerances = DEFAULT) -> tuple[float, float]:
    """(S(t), gamma(t)) for the Lorentzian reservoir."""
    return LossyCavityModel(j, tols).rates_at(t)
