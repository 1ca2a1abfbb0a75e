"""Seeded random states, unitaries and channels (test and search inputs)."""

from __future__ import annotations

import numpy as np

from .maps import QuantumMap
from .states import DensityMatrix


def _rng(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def random_pure_state(dim: int, rng=None) -> np.ndarray:
    """Haar-random state vector."""
    gen = _rng(rng)
    v = gen.normal(size=dim) + 1.0j * gen.normal(size=dim)
    return v / np.linalg.norm(v)


def random_density_matrix(dim: int, rng=None) -> DensityMatrix:
    """Ginibre-ensemble mixed state."""
    gen = _rng(rng)
    g = gen.normal(size=(dim, dim)) + 1.0j * gen.normal(size=(dim, dim))
    mat = g @ g.conj().T
    return DensityMatrix(mat / np.trace(mat))

def random_unitary(dim: int, rng=None) -> np.ndarray:
    """Haar-random unitary via QR of a Ginibre matrix."""
    gen = _rng(rng)
    g = gen.normal(size=(dim, dim)) + 1.0j * gen.normal(size=(dim, dim))
    q, r = np.linalg.qr(g)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_cptp_map(dim: int, n_kraus: int = 4, rng=None) -> QuantumMap:
    """Random channel from a Haar-random isometry into dim * n_kraus."""
    gen = _rng(rng)
    u = random_unitary(dim * n_kraus, gen)
    isometry = u[:, :dim]
    kraus = [isometry[i * dim:(i + 1) * dim, :] for i in range(n_kraus)]
    return QuantumMap.from_kraus(kraus)
