"""Photonic dephasing: frequency spectra, quartz-plate schedules, nonlocal
memory effects.

A photon's polarization dephases through its frequency distribution,

    G(t) = int dw |f(w)|^2 e^{i w Delta_n t},

so the spectrum shape dials the dynamics between Markovian (single
Gaussian peak) and non-Markovian (multi-peak revivals).  For a photon
pair with jointly Gaussian frequencies (variance C, correlation K) the
Bell-pair distinguishability under local plates is

    D(t) = exp[-(1/2) Delta_n^2 C (t1^2 + t2^2 - 2 |K| t1 t2)],

with t_i the interaction time photon i has accumulated; anticorrelated
frequencies (K < 0) revive D globally although each photon alone
dephases monotonically.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ..config import DEFAULT, Tolerances
from ..errors import ValidationError
from .dephasing import DecoherenceFunction, PureDephasingModel


@dataclass(frozen=True)
class FrequencySpectrum:
    """Normalized tabulated spectrum |f(w)|^2 on a frequency grid."""

    omegas: np.ndarray
    weights: np.ndarray
    tols: Tolerances = field(default=DEFAULT, repr=False, compare=False)

    def __post_init__(self):
        omegas = np.asarray(self.omegas, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        if omegas.shape != weights.shape or omegas.ndim != 1:
            raise ValidationError("spectrum needs matching 1-d omega and weight arrays")
        if np.any(weights < 0):
            raise ValidationError("spectral weights must be nonnegative")
        total = float(np.sum(weights))
        if abs(total - 1.0) > 1e-9:
            raise ValidationError(f"spectrum weights sum to {total}, expected 1 "
                                  "(normalize before constructing)")
        omegas.flags.writeable = False
        weights.flags.writeable = False
        object.__setattr__(self, "omegas", omegas)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def from_points(cls, omegas, weights) -> "FrequencySpectrum":
        weights = np.asarray(weights, dtype=float)
        return cls(np.asarray(omegas, dtype=float), weights / np.sum(weights))

    @classmethod
    def two_peak(cls, separation: float, weight_ratio: float = 0.5,
                 center: float = 0.0) -> "FrequencySpectrum":
        """Two delta-like peaks at center -/+ separation/2."""
        return cls.from_points(
            [center - 0.5 * separation, center + 0.5 * separation],
            [weight_ratio, 1.0 - weight_ratio])

    @classmethod
    def gaussian(cls, variance: float, center: float = 0.0, n_points: int = 801,
                 n_sigmas: float = 8.0) -> "FrequencySpectrum":
        sig = np.sqrt(variance)
        omegas = np.linspace(center - n_sigmas * sig, center + n_sigmas * sig, n_points)
        weights = np.exp(-0.5 * (omegas - center) ** 2 / variance)
        return cls.from_points(omegas, weights)

    @classmethod
    def from_text(cls, path) -> "FrequencySpectrum":
        """Two-column numeric text (omega, weight); '#' comments allowed."""
        data = np.loadtxt(path, comments="#", ndmin=2)
        if data.shape[1] != 2:
            raise ValidationError("spectrum file must have two columns")
        return cls.from_points(data[:, 0], data[:, 1])

    def mean(self) -> float:
        return float(np.dot(self.weights, self.omegas))

    def variance(self) -> float:
        mu = self.mean()
        return float(np.dot(self.weights, (self.omegas - mu) ** 2))


def spectrum_dephasing_G(f: FrequencySpectrum, delta_n: float, t):
    """Discrete Fourier sum G(t) = sum_k w_k e^{i w_k Delta_n t}."""
    scalar = np.isscalar(t)
    times = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.exp(1.0j * delta_n * np.outer(times, f.omegas)) @ f.weights
    return complex(out[0]) if scalar else out


@dataclass(frozen=True)
class FabryPerotParams:
    """Parametrization of the tilted-cavity transmission spectrum.

    The filtered spectrum is a Gaussian envelope times an Airy
    transmission with a tilt-dependent phase offset,

        w(omega) ~ exp[-(omega - center)^2 / (2 envelope_sigma^2)]
                   / (1 + finesse_coefficient *
                          sin^2(pi (omega - center) / free_spectral_range
                                + tilt_scale * theta^2)),

    The quadratic tilt dependence mirrors the cos(theta) shortening of
    the cavity round-trip phase.  theta = 0 transmits a single central
    peak; as the offset approaches pi/2 the comb teeth straddle the
    envelope center and a double peak appears.  This parametrization is
    ours (the experimental papers give none); see docs/config.md.
    """

    center: float = 0.0
    envelope_sigma: float = 1.0
    finesse_coefficient: float = 30.0
    free_spectral_range: float = 4.0
    tilt_scale: float = 0.0245     # phase offset per squared degree
    n_points: int = 2001
    n_sigmas: float = 5.0


def fabry_perot_spectrum(theta_degrees: float,
                         params: FabryPerotParams = FabryPerotParams()) -> FrequencySpectrum:
    """Transmission spectrum of the tilted Fabry-Perot cavity filter."""
    p = params
    omegas = np.linspace(p.center - p.n_sigmas * p.envelope_sigma,
                         p.center + p.n_sigmas * p.envelope_sigma, p.n_points)
    envelope = np.exp(-0.5 * (omegas - p.center) ** 2 / p.envelope_sigma ** 2)
    phase = np.pi * (omegas - p.center) / p.free_spectral_range \
        + p.tilt_scale * theta_degrees ** 2
    airy = 1.0 / (1.0 + p.finesse_coefficient * np.sin(phase) ** 2)
    return FrequencySpectrum.from_points(omegas, envelope * airy)


class SpectrumDephasingModel(PureDephasingModel):
    """Polarization qubit dephasing through a tabulated frequency spectrum."""

    def __init__(self, f: FrequencySpectrum, delta_n: float,
                 tols: Tolerances = DEFAULT):
        self.spectrum = f
        self.delta_n = delta_n
        spread = max(np.sqrt(f.variance()), 1e-12) * abs(delta_n)
        g = DecoherenceFunction(
            evaluator=lambda t: spectrum_dephasing_G(f, delta_n, t),
            vector_evaluator=lambda ts: spectrum_dephasing_G(f, delta_n, ts),
            derivative=lambda t: complex(
                (1.0j * delta_n * f.omegas * np.exp(1.0j * delta_n * f.omegas * t))
                @ f.weights),
            provenance="spectrum_fourier",
            t_scale=1.0 / spread if spread > 0 else 1.0, tols=tols)
        super().__init__(g, tols)


@dataclass(frozen=True)
class PlateSchedule:
    """Piecewise-linear interaction times (t1(t), t2(t)) of the two plates."""

    t1_of: Callable[[np.ndarray], np.ndarray]
    t2_of: Callable[[np.ndarray], np.ndarray]
    total_time: float

    @classmethod
    def consecutive(cls, duration2: float, duration1: float) -> "PlateSchedule":
        """Photon 2's plate acts first, then photon 1's."""

        def t2(t):
            return np.minimum(np.asarray(t, dtype=float), duration2)

        def t1(t):
            return np.clip(np.asarray(t, dtype=float) - duration2, 0.0, duration1)

        return cls(t1_of=t1, t2_of=t2, total_time=duration1 + duration2)

    @classmethod
    def simultaneous(cls, duration: float) -> "PlateSchedule":
        def same(t):
            return np.minimum(np.asarray(t, dtype=float), duration)

        return cls(t1_of=same, t2_of=same, total_time=duration)


@dataclass(frozen=True)
class NonlocalDephasingModel:
    """Photon pair with jointly Gaussian frequencies under local plates.

    Not a qubit map family: it exposes the Bell-pair global trajectory
    and the two local (single-photon) trajectories directly.
    """

    variance: float              # C
    correlation: float           # K in [-1, 1]
    delta_n: float
    schedule: PlateSchedule

    def __post_init__(self):
        if abs(self.correlation) > 1.0:
            raise ValidationError(f"|K| = {abs(self.correlation)} exceeds 1")
        if self.variance <= 0:
            raise ValidationError("frequency variance must be positive")

    def interaction_times(self, times) -> tuple[np.ndarray, np.ndarray]:
        times = np.asarray(times, dtype=float)
        return self.schedule.t1_of(times), self.schedule.t2_of(times)

    def global_distance(self, times) -> np.ndarray:
        """Bell-pair trace distance D(t) under the plate schedule."""
        t1, t2 = self.interaction_times(times)
        quad = t1 ** 2 + t2 ** 2 - 2.0 * abs(self.correlation) * t1 * t2
        return np.exp(-0.5 * self.delta_n ** 2 * self.variance * quad)

    def local_distance(self, times, photon: int) -> np.ndarray:
        """Optimal-pair trace distance of one photon alone (Gaussian decay)."""
        t1, t2 = self.interaction_times(times)
        ti = t1 if photon == 1 else t2
        return np.exp(-0.5 * self.delta_n ** 2 * self.variance * ti ** 2)


def nonlocal_dephasing_trajectory(variance: float, correlation: float,
                                  delta_n: float, schedule: PlateSchedule,
                                  times):
    """Bell-pair global trajectory plus the two local ones.

    Returns (global, local_1, local_2) as distinguishability
    trajectories; the locals are Gaussian-monotone in each photon's own
    interaction time while the global one revives for anticorrelated
    frequencies.
    """
    from ..measures.trajectory import DistinguishabilityTrajectory

    model = NonlocalDephasingModel(variance, correlation, delta_n, schedule)
    times = np.asarray(times, dtype=float)
    return (DistinguishabilityTrajectory(times, model.global_distance(times),
                                         pair_label="Bell pair (global)"),
            DistinguishabilityTrajectory(times, model.local_distance(times, 1),
                                         pair_label="photon 1"),
            DistinguishabilityTrajectory(times, model.local_distance(times, 2),
                                         pair_label="photon 2"))
