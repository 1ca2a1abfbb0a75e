"""Complete-positivity-violation (RHP) measure.

The instantaneous violation rate is

    g(t) = lim_{eps -> 0+} (|| (Phi_{t+eps,t} x I)(|Psi><Psi|) || - 1) / eps,

with |Psi> maximally entangled; the operator inside the norm is exactly
the normalized Choi state of the intermediate map, so g is computed
from its trace norm at finite eps (Richardson-extrapolated from two
step sizes) and integrated by trapezoid.  A singular map inside the
window makes the measure jump to infinity; the result then carries the
flag, the first singular time, and the finite integral up to it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..config import DEFAULT, Tolerances
from ..core.maps import _basis_unitary
from ..models.base import DynamicalModel


@dataclass(frozen=True)
class RHPResult:
    value: float                 # finite integral (up to the singular time if any)
    infinite: bool
    first_singular_time: Optional[float]
    epsilon: float
    times: np.ndarray
    g: np.ndarray

    def reported(self) -> float:
        return np.inf if self.infinite else self.value


def _batched_transfer(superops: np.ndarray) -> np.ndarray:
    d2 = superops.shape[-1]
    v = _basis_unitary(int(round(np.sqrt(d2))))
    return np.einsum("ai,tij,jb->tab", v.conj().T, superops, v).real


def _batched_choi_trace_norm(superops: np.ndarray) -> np.ndarray:
    t, d2, _ = superops.shape
    d = int(round(np.sqrt(d2)))
    choi = superops.reshape(t, d, d, d, d).transpose(0, 4, 2, 3, 1).reshape(t, d2, d2) / d
    choi = 0.5 * (choi + np.conj(choi.transpose(0, 2, 1)))
    return np.sum(np.abs(np.linalg.eigvalsh(choi)), axis=-1)


def _violation_rates(model: DynamicalModel, times: np.ndarray, eps: float,
                     tols: Tolerances) -> tuple[np.ndarray, Optional[int]]:
    """g(t) at finite eps for every grid time; index of first singular map."""
    r0 = _batched_transfer(model.superops(times))
    r1 = _batched_transfer(model.superops(times + eps))
    singular = np.linalg.svd(r0, compute_uv=False)
    cond = singular[:, 0] / np.maximum(singular[:, -1], 1e-300)
    cond_bad = np.flatnonzero(cond > tols.condition_cap)
    first_bad = int(cond_bad[0]) if cond_bad.size else None
    stop = first_bad if first_bad is not None else len(times)
    if stop == 0:
        return np.zeros(0), 0
    inter = r1[:stop] @ np.linalg.inv(r0[:stop])
    v = _basis_unitary(model.dim).astype(complex)
    superops = np.einsum("ia,tab,bj->tij", v, inter.astype(complex), v.conj().T)
    g = (_batched_choi_trace_norm(superops) - 1.0) / eps
    # inversion rounding enters the trace norm at the condition-number
    # level; readings below that floor are noise, not CP violation
    noise_floor = 50.0 * np.finfo(float).eps * cond[:stop] / eps
    g[g < noise_floor] = 0.0
    return g, first_bad


def rhp_measure(model: DynamicalModel, times, epsilon: Optional[float] = None,
                richardson: bool = True, tols: Tolerances = DEFAULT) -> RHPResult:
    """Integrated CP-violation rate of the intermediate maps."""
    times = np.asarray(times, dtype=float)
    if epsilon is None:
        epsilon = 1e-4 * model.time_scale

    # a vanishing decoherence function inside the window means the family
    # is singular there even if the zero falls between grid points
    g_fun = model.decoherence_function()
    zero_at = None
    if g_fun is not None:
        zero_at = g_fun.first_zero(float(times[-1]) + 2.0 * epsilon,
                                   threshold=tols.zero_coherence)
    if zero_at is not None:
        keep = times < zero_at - 2.0 * epsilon
        times_kept = times[keep]
    else:
        times_kept = times

    g1, bad1 = _violation_rates(model, times_kept, epsilon, tols)
    if richardson and len(g1):
        g2, bad2 = _violation_rates(model, times_kept[:len(g1)], 2.0 * epsilon, tols)
        n = min(len(g1), len(g2))
        g = 2.0 * g1[:n] - g2[:n]
        bad = bad1 if bad2 is None else (bad2 if bad1 is None else min(bad1, bad2))
    else:
        g, bad = g1, bad1
    g = np.clip(g, 0.0, None)

    if zero_at is None and bad is None:
        return RHPResult(float(np.trapezoid(g, times)), False, None,
                         epsilon, times, g)
    if bad is not None:
        g = g[:bad]
        singular_time = float(times_kept[bad])
    else:
        singular_time = float(zero_at)
    kept = times_kept[:len(g)]
    finite = float(np.trapezoid(g, kept)) if len(g) > 1 else 0.0
    return RHPResult(finite, True, singular_time, epsilon, kept, g)


def dephasing_rate_rhp(model: DynamicalModel, times,
                       tols: Tolerances = DEFAULT) -> float:
    """Rate-form RHP for a single-sigma_z-channel model:
    -2 int_{gamma<0} gamma(t) dt, trapezoid on the grid.

    Independent of the intermediate-map construction; serves as the
    cross-check route for invertible dephasing models.
    """
    times = np.asarray(times, dtype=float)
    rates = model.rate_samples(times)
    if rates is None or rates.shape[0] != 1:
        raise ValueError("rate-form RHP needs a single-channel model")
    negative = np.clip(rates[0], None, 0.0)
    return float(-2.0 * np.trapezoid(negative, times))
