"""Pure dephasing: decoherence functions, rates and the qubit map family.

The dephasing map leaves populations untouched and multiplies the
coherence by the decoherence function,

    rho_11(t) = rho_11(0),     rho_10(t) = G(t) rho_10(0),

with the thermal-reservoir form

    G(t) = exp[ - int_0^inf dw J(w) coth(beta w / 2) (1 - cos(w t)) / w^2 ].
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.integrate import quad, quad_vec

from ..config import DEFAULT, Tolerances
from ..errors import DivergentIntegralError, ValidationError, ZeroCrossingError
from ..core.generators import Channel, TimeLocalGenerator
from ..core.maps import QuantumMap
from ..core.states import IDENTITY_2, SIGMA_Z
from .base import DynamicalModel
from .spectral import SpectralDensity

PROVENANCES = ("closed_form", "quadrature", "ode", "spectrum_fourier", "loschmidt_ed")


@dataclass(frozen=True)
class DecoherenceFunction:
    """Coherence factor G(t) with G(0) = 1 and |G| <= 1.

    ``derivative`` is the analytic dG/dt when the provenance supplies
    one; finite differences are used otherwise.
    """

    evaluator: Callable[[float], complex]
    provenance: str
    t_scale: float = 1.0
    derivative: Optional[Callable[[float], complex]] = None
    vector_evaluator: Optional[Callable[[np.ndarray], np.ndarray]] = None
    tols: Tolerances = field(default=DEFAULT, repr=False, compare=False)

    def __post_init__(self):
        if self.provenance not in PROVENANCES:
            raise ValidationError(f"unknown provenance {self.provenance!r}")
        g0 = complex(self.evaluator(0.0))
        if abs(g0 - 1.0) > 1e-9:
            raise ValidationError(f"G(0) = {g0}, expected 1")
        if self.t_scale <= 0:
            raise ValidationError("t_scale must be positive")

    def __call__(self, t: float) -> complex:
        return complex(self.evaluator(float(t)))

    def values(self, times) -> np.ndarray:
        times = np.asarray(times, dtype=float)
        if self.vector_evaluator is not None:
            out = np.asarray(self.vector_evaluator(times), dtype=complex)
        else:
            out = np.array([self.evaluator(float(t)) for t in times], dtype=complex)
        overshoot = np.max(np.abs(out)) - 1.0
        if overshoot > 1e-8:
            raise ValidationError(f"|G| exceeds 1 by {overshoot:.3e}")
        return out

    def derivative_at(self, t: float) -> complex:
        if self.derivative is not None:
            return complex(self.derivative(float(t)))
        h = 1e-6 * self.t_scale
        if t >= h:
            return (self(t + h) - self(t - h)) / (2.0 * h)
        return (self(t + h) - self(t)) / h

    def first_zero(self, t_max: float, threshold: float = 1e-12,
                   n_scan: int = 4096) -> Optional[float]:
        """Earliest time in (0, t_max] where |G| vanishes, or None.

        Scans the window, then refines every local minimum of |G| by
        bounded minimization; |G| below threshold counts as a zero
        (there the map family is singular).
        """
        from scipy.optimize import minimize_scalar

        ts = np.linspace(0.0, t_max, n_scan)
        mods = np.abs(self.values(ts))
        hit = np.flatnonzero(mods[1:] <= threshold)
        first_direct = ts[hit[0] + 1] if hit.size else np.inf

        interior = np.flatnonzero((mods[1:-1] < mods[:-2]) & (mods[1:-1] <= mods[2:])) + 1
        first_refined = np.inf
        xatol = 1e-13 * max(t_max, 1.0)
        for k in interior:
            if ts[k] >= min(first_direct, first_refined):
                break
            # |G|^2 is smooth (quadratic) at a zero where |G| has a kink
            res = minimize_scalar(lambda t: abs(self(t)) ** 2,
                                  bounds=(ts[k - 1], ts[k + 1]), method="bounded",
                                  options={"xatol": xatol})
            # at a true zero the residual is slope * (x error); a genuine
            # positive dip sits many orders above this optimizer floor
            slope = (mods[k - 1] + mods[k + 1]) / (ts[k + 1] - ts[k - 1])
            floor = 1e4 * xatol * slope
            if np.sqrt(max(res.fun, 0.0)) <= max(threshold, floor):
                first_refined = min(first_refined, float(res.x))
        first = min(first_direct, first_refined)
        return None if np.isinf(first) else float(first)


def _check_integrable(j: SpectralDensity, beta: Optional[float]) -> None:
    if j.kind == "ohmic_family" and j.exponent <= 0:
        raise DivergentIntegralError(
            f"spectral exponent s = {j.exponent} <= 0: J(w)(1-cos wt)/w^2 has a "
            "non-integrable infrared divergence", operation="dephasing_G_thermal")
    if beta is not None and not math.isinf(beta):
        if beta <= 0:
            raise DivergentIntegralError("inverse temperature must be positive "
                                         "(use beta=None or inf for T=0)",
                                         operation="dephasing_G_thermal")
        if j.zero_frequency_limit() > 0:
            raise DivergentIntegralError(
                "J(0) > 0 with coth(beta w/2) ~ 2/(beta w) gives a logarithmic "
                "infrared divergence at finite temperature",
                operation="dephasing_G_thermal")
        if j.kind == "ohmic_family" and j.exponent <= 0:
            raise DivergentIntegralError("s <= 0 diverges at finite temperature",
                                         operation="dephasing_G_thermal")


def thermal_decoherence_exponent(j: SpectralDensity, beta: Optional[float],
                                 times, rtol: float = 1e-8) -> np.ndarray:
    """Integral of J(w) coth(beta w/2) (1 - cos(w t)) / w^2 for each t.

    Adaptive (Gauss-Kronrod) quadrature with breakpoints at the
    oscillation nodes w = k pi / t_max of the fastest integrand.
    beta = None or inf selects the zero-temperature branch coth -> 1.
    """
    _check_integrable(j, beta)
    times = np.atleast_1d(np.asarray(times, dtype=float))
    if np.any(times < 0):
        raise ValidationError("times must be nonnegative")
    upper = j.support_upper()
    t_max = float(np.max(times))
    if t_max == 0.0:
        return np.zeros_like(times)
    zero_t = times == 0.0

    cold = beta is None or math.isinf(beta)

    def integrand(w):
        # 2 sin^2(wt/2) is the cancellation-safe form of 1 - cos(wt)
        base = j(w) / w ** 2 * 2.0 * np.sin(0.5 * w * times) ** 2
        if not cold:
            base = base * (1.0 / np.tanh(beta * w / 2.0))
        return base

    n_nodes = int(upper * t_max / np.pi)
    points = None
    if 0 < n_nodes:
        points = np.pi * np.arange(1, min(n_nodes, 1000) + 1) / t_max
    result, _ = quad_vec(integrand, 0.0, upper, epsrel=rtol,
                         epsabs=1e-14, points=points,
                         limit=max(400, 2 * (min(n_nodes, 1000) + 1)))
    result[zero_t] = 0.0
    return result


def dephasing_G_thermal(j: SpectralDensity, beta: Optional[float], t,
                        rtol: float = 1e-8):
    """G(t) for thermal dephasing; scalar in, scalar out (arrays pass through).

    beta = None or math.inf means T = 0.
    """
    scalar = np.isscalar(t)
    out = np.exp(-thermal_decoherence_exponent(j, beta, t, rtol))
    return float(out[0]) if scalar else out


def dephasing_rate(g: DecoherenceFunction, t: float,
                   tols: Tolerances = DEFAULT) -> float:
    """gamma(t) = -d/dt ln|G(t)| by central difference (step 1e-6 t_scale).

    The sign of gamma is opposite to the slope of |G|; a modulus below
    the invertibility cutoff raises ZeroCrossingError (the map family is
    singular there).
    """
    h = 1e-6 * g.t_scale
    mid = abs(g(t))
    if mid <= tols.zero_coherence:
        raise ZeroCrossingError(
            f"|G({t})| = {mid:.3e} below cutoff; map not invertible", time=t)
    if t >= h:
        lo, hi = abs(g(t - h)), abs(g(t + h))
        if min(lo, hi) <= tols.zero_coherence:
            raise ZeroCrossingError(
                f"|G| vanishes within the difference stencil at t = {t}", time=t)
        return -(math.log(hi) - math.log(lo)) / (2.0 * h)
    hi = abs(g(t + h))
    if hi <= tols.zero_coherence:
        raise ZeroCrossingError(f"|G| vanishes at t = {t + h}", time=t)
    return -(math.log(hi) - math.log(mid)) / h


class PureDephasingModel(DynamicalModel):
    """Qubit map family rho_10 -> G(t) rho_10 with populations frozen."""

    def __init__(self, g: DecoherenceFunction, tols: Tolerances = DEFAULT):
        self.g = g
        self.tols = tols

    @property
    def time_scale(self) -> float:
        return self.g.t_scale

    def decoherence_function(self) -> DecoherenceFunction:
        return self.g

    def superop_at(self, t: float) -> np.ndarray:
        return self.superops([t])[0]

    def superops(self, times) -> np.ndarray:
        gs = self.g.values(times)
        out = np.zeros((len(gs), 4, 4), dtype=complex)
        out[:, 0, 0] = 1.0
        out[:, 3, 3] = 1.0
        out[:, 1, 1] = gs            # rho_10 entry in column-stacking order
        out[:, 2, 2] = gs.conj()     # rho_01
        return out

    def map_at(self, t: float) -> QuantumMap:
        gval = self.g(t)
        mod = min(abs(gval), 1.0)
        phase = np.angle(gval) if mod > 0 else 0.0
        u = np.diag([np.exp(-0.5j * phase), np.exp(0.5j * phase)])
        k0 = np.sqrt((1.0 + mod) / 2.0) * u
        k1 = np.sqrt((1.0 - mod) / 2.0) * (u @ SIGMA_Z)
        return QuantumMap.from_kraus([k0, k1], tols=self.tols)

    def _log_derivative(self, t: float) -> complex:
        gval = self.g(t)
        if abs(gval) <= self.tols.zero_coherence:
            raise ZeroCrossingError(f"|G({t})| below cutoff", time=t)
        if self.g.derivative is not None:
            return complex(self.g.derivative(t)) / gval
        h = 1e-6 * self.g.t_scale
        lo = self.g(max(t - h, 0.0))
        hi = self.g(t + h)
        width = (t + h) - max(t - h, 0.0)
        if min(abs(lo), abs(hi)) <= self.tols.zero_coherence:
            raise ZeroCrossingError(f"|G| vanishes near t = {t}", time=t)
        return (np.log(abs(hi)) - np.log(abs(lo))) / width \
            + 1.0j * (np.angle(hi) - np.angle(lo)) / width

    def channel_rate(self, t: float) -> float:
        """Lindblad-form sigma_z channel rate: -(1/2) d ln|G|/dt."""
        return -0.5 * self._log_derivative(t).real

    def generator(self) -> TimeLocalGenerator:
        def hamiltonian(t):
            return 0.5 * self._log_derivative(t).imag * SIGMA_Z

        return TimeLocalGenerator(
            dim=2, hamiltonian=hamiltonian,
            channels=(Channel(SIGMA_Z, self.channel_rate),), tols=self.tols)

    def rate_samples(self, times) -> np.ndarray:
        """Vectorized sigma_z channel rate on a grid (one row)."""
        times = np.asarray(times, dtype=float)
        h = 1e-6 * self.g.t_scale
        hi = np.abs(self.g.values(times + h))
        lo_t = np.maximum(times - h, 0.0)
        lo = np.abs(self.g.values(lo_t))
        if np.min(hi) <= self.tols.zero_coherence or np.min(lo) <= self.tols.zero_coherence:
            t_bad = times[np.argmin(np.minimum(hi, lo))]
            raise ZeroCrossingError(f"|G| vanishes near t = {t_bad}", time=float(t_bad))
        rates = -0.5 * (np.log(hi) - np.log(lo)) / ((times + h) - lo_t)
        return rates[np.newaxis, :]

    # ---- constructors ----------------------------------------------------

    @classmethod
    def thermal(cls, j: SpectralDensity, beta: Optional[float],
                rtol: float = 1e-8, t_scale: Optional[float] = None,
                tols: Tolerances = DEFAULT) -> "PureDephasingModel":
        if t_scale is None:
            t_scale = 1.0 / j.cutoff if j.kind == "ohmic_family" else 1.0
        g = DecoherenceFunction(
            evaluator=lambda t: dephasing_G_thermal(j, beta, t, rtol),
            vector_evaluator=lambda ts: dephasing_G_thermal(j, beta, ts, rtol),
            provenance="quadrature", t_scale=t_scale, tols=tols)
        return cls(g, tols)

    @classmethod
    def from_function(cls, evaluator, provenance: str = "closed_form",
                      t_scale: float = 1.0, derivative=None, vector_evaluator=None,
                      tols: Tolerances = DEFAULT) -> "PureDephasingModel":
        g = DecoherenceFunction(evaluator=evaluator, provenance=provenance,
                                t_scale=t_scale, derivative=derivative,
                                vector_evaluator=vector_evaluator, tols=tols)
        return cls(g, tols)
