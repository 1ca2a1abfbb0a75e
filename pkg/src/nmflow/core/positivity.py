"""Complete-positivity and positivity tests for quantum maps."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..config import DEFAULT, Tolerances
from .maps import QuantumMap
from .sampling import random_pure_state

_GOLDEN = (1.0 + np.sqrt(5.0)) / 2.0


@dataclass(frozen=True)
class CompletePositivityCheck:
    is_cp: bool
    min_choi_eigenvalue: float

    def __bool__(self) -> bool:
        return self.is_cp


@dataclass(frozen=True)
class PositivityCheck:
    is_positive: bool
    min_output_eigenvalue: float
    n_points: int
    deterministic: bool  # True only for qubit maps, where pure inputs are extremal

    def __bool__(self) -> bool:
        return self.is_positive


def is_completely_positive(m: QuantumMap, tol: float | None = None,
                           tols: Tolerances = DEFAULT) -> CompletePositivityCheck:
    """Choi criterion: CP iff the normalized Choi state is positive.

    Reports the minimum Choi eigenvalue alongside the verdict (the qubit
    transpose map yields exactly -1/2).
    """
    if tol is None:
        tol = tols.cp
    min_eig = float(np.linalg.eigvalsh(m.choi_matrix())[0])
    return CompletePositivityCheck(min_eig >= -tol, min_eig)


def fibonacci_bloch_grid(n: int) -> np.ndarray:
    """Deterministic Fibonacci lattice of n unit vectors on the sphere."""
    i = np.arange(n)
    z = 1.0 - (2.0 * i + 1.0) / n
    phi = 2.0 * np.pi * i / _GOLDEN
    s = np.sqrt(1.0 - z * z)
    return np.column_stack([s * np.cos(phi), s * np.sin(phi), z])


def bloch_to_pure(direction: np.ndarray) -> np.ndarray:
    """State vector of the pure qubit state at a Bloch direction."""
    x, y, z = direction
    theta = np.arccos(np.clip(z, -1.0, 1.0))
    phi = np.arctan2(y, x)
    return np.array([np.cos(theta / 2.0),
                     np.exp(1.0j * phi) * np.sin(theta / 2.0)])


def is_positive_map(m: QuantumMap, n_samples: int = 64, tol: float | None = None,
                    grid_size: int = 256, seed: int = 7,
                    tols: Tolerances = DEFAULT) -> PositivityCheck:
    """Positivity of a map by probing pure input states.

    For qubits the check runs over a deterministic Fibonacci-lattice
    grid of pure states plus ``n_samples`` random pure states; because
    the extremal inputs of a qubit are exactly the pure states this is
    exhaustive up to tolerance.  In higher dimension sampling cannot
    certify positivity, so the verdict means "sampled positive" and
    ``deterministic`` is False.
    """
    if tol is None:
        tol = tols.map_positivity
    rng = np.random.default_rng(seed)
    dim = m.dim_in
    vectors = []
    if dim == 2:
        vectors.extend(bloch_to_pure(d) for d in fibonacci_bloch_grid(grid_size))
    for _ in range(n_samples):
        vectors.append(random_pure_state(dim, rng))
    superop = m.superop()
    min_eig = np.inf
    for v in vectors:
        out = (superop @ np.outer(v, v.conj()).reshape(-1, order="F"))
        out = out.reshape(m.dim_out, m.dim_out, order="F")
        min_eig = min(min_eig, float(np.linalg.eigvalsh(out)[0]))
    return PositivityCheck(min_eig >= -tol, min_eig,
                           n_points=len(vectors), deterministic=(dim == 2))
