"""Divisibility classification and the Bloch-volume criterion.

Rate path (when the model exposes its generator): CP-divisible iff every
rate stays nonnegative; P-divisible iff

    sum_i gamma_i(t) |<n| A_i |m>|^2 >= 0

for all orthonormal bases {|n>} and n != m.  On a qubit the basis check
runs over the three Pauli eigenbases plus a Fibonacci grid of
directions; for the three-Pauli-channel model the condition reduces
exactly to the pairwise rate sums gamma_i + gamma_j >= 0.

Map path (no generator): short-step intermediate maps Phi_{t+dt,t} are
tested for complete positivity through their Choi spectrum and for
positivity by pure-state sampling.

A numerically singular map anywhere on the grid yields the separate
non_invertible class.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..config import DEFAULT, Tolerances
from ..errors import NonInvertibleError, ZeroCrossingError
from ..core.maps import intermediate_map, superop_to_choi, superop_to_transfer
from ..core.positivity import bloch_to_pure, fibonacci_bloch_grid
from ..models.base import DynamicalModel
from ..models.random_unitary import RandomUnitaryModel


class DivisibilityClass(str, enum.Enum):
    CP_DIVISIBLE = "CP_divisible"
    P_DIVISIBLE_ONLY = "P_divisible_only"
    NON_P_DIVISIBLE = "non_P_divisible"
    NON_INVERTIBLE = "non_invertible"

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return self.value


@dataclass(frozen=True)
class DivisibilityResult:
    classification: DivisibilityClass
    method: str                        # "rates" or "maps"
    first_violation_time: Optional[float] = None
    detail: str = ""


@dataclass(frozen=True)
class VolumeResult:
    monotone: bool
    first_violation_time: Optional[float]
    times: np.ndarray
    volumes: np.ndarray

    def __bool__(self) -> bool:
        return self.monotone


def _qubit_bases(n_grid: int = 48) -> list[np.ndarray]:
    """Orthonormal qubit bases: the three Pauli eigenbases plus a grid."""
    axes = [np.array([1.0, 0.0, 0.0]), np.array([0.0, 1.0, 0.0]),
            np.array([0.0, 0.0, 1.0])]
    dirs = list(axes) + list(fibonacci_bloch_grid(n_grid))
    bases = []
    for n in dirs:
        plus = bloch_to_pure(n)
        minus = bloch_to_pure(-n)
        bases.append(np.column_stack([plus, minus]))
    return bases


def _rate_path(model: DynamicalModel, times, tols: Tolerances
               ) -> Optional[DivisibilityResult]:
    g_fun = model.decoherence_function()
    if g_fun is not None:
        zero_at = g_fun.first_zero(float(np.max(times)), threshold=tols.zero_coherence)
        if zero_at is not None:
            return DivisibilityResult(DivisibilityClass.NON_INVERTIBLE, "rates",
                                      first_violation_time=zero_at,
                                      detail="decoherence function vanishes")
    try:
        rates = model.rate_samples(times)
    except ZeroCrossingError as err:
        return DivisibilityResult(DivisibilityClass.NON_INVERTIBLE, "rates",
                                  first_violation_time=err.time,
                                  detail="decoherence function crosses zero")
    if rates is None:
        return None
    times = np.asarray(times, dtype=float)
    tol = tols.rate_sign

    cp_bad = np.flatnonzero(np.min(rates, axis=0) < -tol)
    if cp_bad.size == 0:
        return DivisibilityResult(DivisibilityClass.CP_DIVISIBLE, "rates")

    if isinstance(model, RandomUnitaryModel):
        sums = np.array([model.pairwise_rate_sums(float(t)) for t in times]).T
        p_bad = np.flatnonzero(np.min(sums, axis=0) < -tol)
        detail = "pairwise rate sums"
    else:
        ops = model.channel_operators()
        worst = np.full(len(times), np.inf)
        for basis in _qubit_bases():
            # |<n|A_i|m>|^2 for the two off-diagonal pairs of this basis
            weights = np.array([
                [abs(basis[:, 0].conj() @ op @ basis[:, 1]) ** 2 for op in ops],
                [abs(basis[:, 1].conj() @ op @ basis[:, 0]) ** 2 for op in ops]])
            vals = weights @ rates      # (2, n_times)
            worst = np.minimum(worst, vals.min(axis=0))
        p_bad = np.flatnonzero(worst < -tol)
        detail = "basis-grid Kossakowski condition"

    if p_bad.size == 0:
        return DivisibilityResult(
            DivisibilityClass.P_DIVISIBLE_ONLY, "rates",
            first_violation_time=float(times[cp_bad[0]]),
            detail="negative rate with " + detail + " nonnegative")
    return DivisibilityResult(
        DivisibilityClass.NON_P_DIVISIBLE, "rates",
        first_violation_time=float(times[p_bad[0]]), detail=detail + " violated")


def _short_step_generator(model: DynamicalModel, t: float, dt: float,
                          tols: Tolerances) -> np.ndarray:
    """Superoperator of the local generator from short-step intermediate
    maps, Richardson-extrapolated: (4 Phi_{t+dt/2,t} - Phi_{t+dt,t} - 3 I)/dt
    cancels the O(dt^2) term exactly."""
    full = intermediate_map(model.map_at(t + dt), model.map_at(t), tols=tols)
    half = intermediate_map(model.map_at(t + 0.5 * dt), model.map_at(t), tols=tols)
    eye = np.eye(model.dim ** 2)
    return (4.0 * half.superop() - full.superop() - 3.0 * eye) / dt


def _map_path(model: DynamicalModel, times, tols: Tolerances) -> DivisibilityResult:
    """Divisibility from short-step intermediate maps.

    The extrapolated step generator L(t) is tested for conditional
    complete positivity (Choi of L projected off the maximally entangled
    state must be positive) and for the positivity condition
    <n| L(|m><m|) |n> >= 0 on orthogonal pure-state pairs, which is the
    instantaneous form of the Kossakowski criterion.
    """
    times = np.asarray(times, dtype=float)
    dt = 1e-3 * model.time_scale
    d = model.dim
    psi = np.eye(d).reshape(-1) / np.sqrt(d)  # vec of I/sqrt(d) = |psi+>
    perp = np.eye(d * d) - np.outer(psi, psi)
    pair_dirs = _qubit_bases() if d == 2 else None

    cp_violation: Optional[float] = None
    for t0 in times[:-1]:
        try:
            gen = _short_step_generator(model, float(t0), dt, tols)
        except NonInvertibleError:
            return DivisibilityResult(DivisibilityClass.NON_INVERTIBLE, "maps",
                                      first_violation_time=float(t0),
                                      detail="intermediate map singular")
        scale = max(float(np.max(np.abs(gen))), 1.0)
        tol = tols.rate_sign * scale + 10.0 * scale * (dt * scale) ** 2
        choi_l = superop_to_choi(gen) * d   # unnormalized Choi of the generator
        reduced = perp @ choi_l @ perp
        min_eig = float(np.linalg.eigvalsh(0.5 * (reduced + reduced.conj().T))[0])
        if min_eig < -tol:
            if cp_violation is None:
                cp_violation = float(t0)
            if not _step_positive(gen, pair_dirs, tol):
                return DivisibilityResult(
                    DivisibilityClass.NON_P_DIVISIBLE, "maps",
                    first_violation_time=float(t0),
                    detail="step generator violates the positivity condition")
    if cp_violation is None:
        return DivisibilityResult(DivisibilityClass.CP_DIVISIBLE, "maps")
    return DivisibilityResult(DivisibilityClass.P_DIVISIBLE_ONLY, "maps",
                              first_violation_time=cp_violation,
                              detail="Choi negativity with positive step outputs")


def _step_positive(gen: np.ndarray, bases, tol: float) -> bool:
    for basis in bases:
        for (n, m) in ((0, 1), (1, 0)):
            proj = np.outer(basis[:, m], basis[:, m].conj())
            image = (gen @ proj.reshape(-1, order="F")).reshape(2, 2, order="F")
            value = float((basis[:, n].conj() @ image @ basis[:, n]).real)
            if value < -tol:
                return False
    return True


def classify_divisibility(model: DynamicalModel, times,
                          tols: Tolerances = DEFAULT) -> DivisibilityResult:
    """Divisibility class over the window, preferring the rate path."""
    result = _rate_path(model, times, tols)
    if result is not None:
        return result
    return _map_path(model, times, tols)


def volume_monotone(model: DynamicalModel, times,
                    tols: Tolerances = DEFAULT) -> VolumeResult:
    """|det| of the Bloch affine contraction along the family.

    Growth of the accessible-state volume is a strictly weaker
    non-Markovianity signature than P- or CP-divisibility breaking.
    """
    times = np.asarray(times, dtype=float)
    superops = model.superops(times)
    volumes = np.empty(len(times))
    for k, s in enumerate(superops):
        r = superop_to_transfer(s)
        volumes[k] = abs(np.linalg.det(r[1:, 1:]))
    growth = np.diff(volumes) > tols.hysteresis * np.maximum(volumes[:-1], 1.0)
    if growth.any():
        first = int(np.argmax(growth))
        return VolumeResult(False, float(times[first]), times, volumes)
    return VolumeResult(True, None, times, volumes)
