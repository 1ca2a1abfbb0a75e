"""Trace-distance (BLP) and Helstrom-norm backflow measures.

Both maximize the integrated distinguishability gain over initial
preparations.  Optimal pairs are orthogonal, so the qubit search space
is

* BLP: antipodal pure pairs, i.e. Bloch directions n with
  D(t) = (1/2) ||Phi_t(n . sigma)||,
* Helstrom: weighted orthogonal pairs Delta = q P_+n - (1-q) P_-n (the
  unit trace-norm Hermitian sphere section), recovering the BLP domain
  at q = 1/2.

A deterministic direction grid seeds a Nelder-Mead ascent.  When the
model certifies monotonicity through its rates (single channel with
nonnegative rate on the window) the measure short-circuits to exactly
zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.optimize import minimize

from ..config import DEFAULT, Tolerances
from ..errors import ZeroCrossingError
from ..core.states import DensityMatrix, IDENTITY_2, PAULIS, antipodal_pair
from ..models.base import DynamicalModel
from .trajectory import DistinguishabilityTrajectory, backflow


@dataclass(frozen=True)
class SearchSettings:
    n_azimuthal: int = 24
    n_polar: int = 12
    refine: bool = True
    n_weights: int = 9          # Helstrom weight grid (includes q = 1/2 when odd)
    hysteresis: float = DEFAULT.hysteresis


@dataclass(frozen=True)
class BackflowResult:
    value: float
    direction: np.ndarray
    weight: float                        # q; 1/2 for the unbiased measure
    pair: tuple[DensityMatrix, DensityMatrix]
    trajectory: DistinguishabilityTrajectory
    certified_zero: bool = False
    refinement_error: float = 0.0
    n_candidates: int = 0

    @property
    def bloch_angles(self) -> tuple[float, float]:
        """(polar, azimuthal) angles of the optimal direction, radians."""
        n = self.direction
        return float(np.arccos(np.clip(n[2], -1, 1))), float(np.arctan2(n[1], n[0]))


def direction_grid(settings: SearchSettings) -> np.ndarray:
    """Deterministic half-sphere grid including the pole and the equator."""
    polars = np.linspace(0.0, np.pi / 2.0, settings.n_polar)
    azimuths = np.linspace(0.0, 2.0 * np.pi, settings.n_azimuthal, endpoint=False)
    dirs = [np.array([0.0, 0.0, 1.0])]
    for theta in polars[1:]:
        for phi in azimuths:
            dirs.append(np.array([np.sin(theta) * np.cos(phi),
                                  np.sin(theta) * np.sin(phi),
                                  np.cos(theta)]))
    return np.array(dirs)


def _direction_from_angles(theta: float, phi: float) -> np.ndarray:
    return np.array([np.sin(theta) * np.cos(phi),
                     np.sin(theta) * np.sin(phi),
                     np.cos(theta)])


def _delta_matrix(direction: np.ndarray, q: float = 0.5) -> np.ndarray:
    """q P_{+n} - (1-q) P_{-n}; unit trace norm for q in [0, 1].

    ||Phi_t(Delta)|| is the Helstrom-norm trajectory, and at q = 1/2 it
    equals the trace distance of the antipodal pair (the 1/2 of the
    trace-distance definition lives in Delta's normalization).
    """
    n_sigma = sum(nc * p for nc, p in zip(direction, PAULIS))
    return (q - 0.5) * IDENTITY_2 + 0.5 * n_sigma


def evolved_norms(superops: np.ndarray, deltas: np.ndarray) -> np.ndarray:
    """Trace norms ||Phi_t(Delta)|| for stacked superops and Deltas.

    superops: (T, d^2, d^2); deltas: (n, d, d) Hermitian.
    Returns (n, T).
    """
    d = deltas.shape[-1]
    # column-stacking vec: transpose each matrix before the C-order reshape
    vecs = deltas.transpose(0, 2, 1).reshape(deltas.shape[0], d * d)
    evolved = np.einsum("tij,nj->nti", superops, vecs)
    mats = evolved.reshape(*evolved.shape[:2], d, d).swapaxes(-1, -2)
    return np.sum(np.abs(np.linalg.eigvalsh(mats)), axis=-1)


def certified_monotone(model: DynamicalModel, times, tols: Tolerances = DEFAULT) -> bool:
    """True when a single-channel model has nonnegative rate on the grid."""
    try:
        rates = model.rate_samples(times)
    except ZeroCrossingError:
        return False
    if rates is None or rates.shape[0] != 1:
        return False
    return bool(np.all(rates >= -tols.rate_sign))


def _search(model: DynamicalModel, times, settings: SearchSettings,
            tols: Tolerances, weights: np.ndarray,
            seed_candidates=()) -> BackflowResult:
    times = np.asarray(times, dtype=float)
    superops = model.superops(times)
    dirs = direction_grid(settings)
    unbiased = len(weights) == 1 and weights[0] == 0.5

    candidates = [(q, n) for q in weights for n in dirs]
    candidates.extend(seed_candidates)
    deltas = np.array([_delta_matrix(n, q) for q, n in candidates])
    norms = evolved_norms(superops, deltas)
    values = np.array([backflow(times, row, settings.hysteresis) for row in norms])
    best = int(np.argmax(values))
    best_q, best_n = candidates[best]
    best_value = float(values[best])

    def objective(x) -> float:
        theta, phi = x[0], x[1]
        q = min(max(x[2], 0.0), 1.0) if len(x) == 3 else 0.5
        delta = _delta_matrix(_direction_from_angles(theta, phi), q)
        row = evolved_norms(superops, delta[np.newaxis])[0]
        return -backflow(times, row, settings.hysteresis)

    if settings.refine and best_value > 0.0:
        theta0 = np.arccos(np.clip(best_n[2], -1, 1))
        phi0 = np.arctan2(best_n[1], best_n[0])
        x0 = [theta0, phi0] if unbiased else [theta0, phi0, best_q]
        res = minimize(objective, x0, method="Nelder-Mead",
                       options={"xatol": 1e-5, "fatol": 1e-12, "maxiter": 400})
        if -res.fun > best_value:
            best_value = float(-res.fun)
            best_n = _direction_from_angles(res.x[0], res.x[1])
            if not unbiased:
                best_q = float(min(max(res.x[2], 0.0), 1.0))

    delta = _delta_matrix(best_n, best_q)
    row = evolved_norms(superops, delta[np.newaxis])[0]
    traj = DistinguishabilityTrajectory(times, row, pair_label="optimal pair",
                                        check_range=False, tols=tols)
    half = backflow(times[::2], row[::2], settings.hysteresis)
    plus, minus = antipodal_pair(best_n)
    return BackflowResult(
        value=best_value, direction=best_n / np.linalg.norm(best_n),
        weight=best_q, pair=(plus, minus), trajectory=traj,
        refinement_error=abs(best_value - half),
        n_candidates=len(candidates))


def blp_measure(model: DynamicalModel, times,
                settings: SearchSettings = SearchSettings(),
                tols: Tolerances = DEFAULT) -> BackflowResult:
    """Trace-distance backflow maximized over antipodal pure pairs."""
    times = np.asarray(times, dtype=float)
    if certified_monotone(model, times, tols):
        direction = np.array([1.0, 0.0, 0.0])
        superops = model.superops(times)
        row = evolved_norms(superops, _delta_matrix(direction)[np.newaxis])[0]
        traj = DistinguishabilityTrajectory(times, row, pair_label="representative pair",
                                            check_range=False, tols=tols)
        plus, minus = antipodal_pair(direction)
        return BackflowResult(value=0.0, direction=direction, weight=0.5,
                              pair=(plus, minus), trajectory=traj,
                              certified_zero=True)
    return _search(model, times, settings, tols, weights=np.array([0.5]))


def helstrom_measure(model: DynamicalModel, times,
                     settings: SearchSettings = SearchSettings(),
                     tols: Tolerances = DEFAULT,
                     seed: Optional[BackflowResult] = None) -> BackflowResult:
    """Helstrom-norm backflow over weighted orthogonal pairs.

    Passing the BLP result as seed guarantees the maximization domain
    contains the unbiased optimum.
    """
    times = np.asarray(times, dtype=float)
    if certified_monotone(model, times, tols):
        result = blp_measure(model, times, settings, tols)
        return result
    weights = np.linspace(0.0, 1.0, settings.n_weights)
    seeds = [(seed.weight, seed.direction)] if seed is not None else []
    return _search(model, times, settings, tols, weights=weights,
                   seed_candidates=seeds)


def blp_local_representation(model: DynamicalModel, times, radius: float = 0.1,
                             settings: SearchSettings = SearchSettings(),
                             tols: Tolerances = DEFAULT) -> float:
    """Validation mode: the measure from the local representation.

    One state runs over a sphere of trace-distance radius around the
    maximally mixed state; the scaled derivative divides by the initial
    distance.  Agrees with blp_measure for qubit families.
    """
    times = np.asarray(times, dtype=float)
    superops = model.superops(times)
    dirs = direction_grid(settings)
    deltas = np.array([radius * _delta_matrix(n) for n in dirs])
    norms = evolved_norms(superops, deltas)
    values = [backflow(times, row, settings.hysteresis) / radius for row in norms]
    return float(np.max(values))
