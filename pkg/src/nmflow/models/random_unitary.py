"""Qubit with three Pauli decoherence channels (random unitary dynamics).

The master equation (1/2) sum_i gamma_i(t) (sigma_i rho sigma_i - rho)
integrates to the mixture

    Phi_t(rho) = sum_{i=0..3} p_i(t) sigma_i rho sigma_i,

with A_ij(t) = exp[-(Gamma_i + Gamma_j)], Gamma_k the integrated rates:

    p_0 = (1/4)[1 + A_12 + A_13 + A_23],
    p_1 = (1/4)[1 - A_12 - A_13 + A_23],
    p_2 = (1/4)[1 - A_12 + A_13 - A_23],
    p_3 = (1/4)[1 + A_12 - A_13 - A_23].

The Bloch component along axis i contracts by A_jk (the two other
indices), so relaxation times are T_i = 1/(gamma_j + gamma_k).  Negative
p_i means the family is not completely positive; that is reported, not
raised, because the rate hierarchy diagnostics deliberately probe such
instances.
"""

from __future__ import annotations

from typing import Callable, Sequence, Union

import numpy as np
from scipy.integrate import quad

from ..config import DEFAULT, Tolerances
from ..core.generators import Channel, TimeLocalGenerator
from ..core.maps import QuantumMap
from ..core.states import IDENTITY_2, PAULIS
from .base import DynamicalModel

RateLike = Union[float, Callable[[float], float]]

_PAULI4 = (IDENTITY_2,) + PAULIS
_PAIRS = ((1, 2), (1, 3), (2, 3))  # index pairs of A_12, A_13, A_23
_SIGNS = np.array([[1, 1, 1],      # p0
                   [-1, -1, 1],    # p1
                   [-1, 1, -1],    # p2
                   [1, -1, -1]])   # p3


def _as_rate(rate: RateLike) -> Callable[[float], float]:
    if callable(rate):
        return rate
    value = float(rate)
    return lambda t: value


class RandomUnitaryModel(DynamicalModel):
    def __init__(self, gamma1: RateLike, gamma2: RateLike, gamma3: RateLike,
                 tols: Tolerances = DEFAULT):
        self.rates = tuple(_as_rate(g) for g in (gamma1, gamma2, gamma3))
        self.tols = tols
        self._gamma_cache: dict[float, np.ndarray] = {}

    def integrated_rates(self, t: float) -> np.ndarray:
        """Gamma_i(t) by adaptive quadrature (cached per time)."""
        t = float(t)
        if t not in self._gamma_cache:
            if t == 0.0:
                out = np.zeros(3)
            else:
                out = np.array([
                    quad(r, 0.0, t, epsabs=self.tols.rate_quadrature,
                         epsrel=self.tols.rate_quadrature, limit=200)[0]
                    for r in self.rates])
            self._gamma_cache[t] = out
        return self._gamma_cache[t]

    def contractions(self, t: float) -> np.ndarray:
        """(A_12, A_13, A_23): the Bloch contraction factors of axes 3, 2, 1."""
        gam = self.integrated_rates(t)
        return np.array([np.exp(-(gam[i - 1] + gam[j - 1])) for i, j in _PAIRS])

    def coefficients(self, t: float) -> np.ndarray:
        """Mixture weights p_0..p_3; they sum to 1 by construction."""
        return 0.25 * (1.0 + _SIGNS @ self.contractions(t))

    def relaxation_times(self, t: float) -> np.ndarray:
        """T_i(t) = 1/(gamma_j(t) + gamma_k(t)); inf where the sum vanishes."""
        g = np.array([r(t) for r in self.rates])
        sums = np.array([g[1] + g[2], g[0] + g[2], g[0] + g[1]])
        with np.errstate(divide="ignore"):
            return np.where(sums != 0.0, 1.0 / sums, np.inf)

    def superop_at(self, t: float) -> np.ndarray:
        p = self.coefficients(t)
        out = np.zeros((4, 4), dtype=complex)
        for pi, sigma in zip(p, _PAULI4):
            out += pi * np.kron(sigma.conj(), sigma)
        return out

    def map_at(self, t: float) -> QuantumMap:
        p = self.coefficients(t)
        if np.all(p >= 0.0):
            ops = [np.sqrt(pi) * sigma for pi, sigma in zip(p, _PAULI4) if pi > 0.0]
            return QuantumMap.from_kraus(ops, tols=self.tols)
        return QuantumMap.from_superop(self.superop_at(t), tols=self.tols)

    def generator(self) -> TimeLocalGenerator:
        ops = [sigma / np.sqrt(2.0) for sigma in PAULIS]
        return TimeLocalGenerator(
            dim=2, hamiltonian=None,
            channels=tuple(Channel(op, rate) for op, rate in zip(ops, self.rates)),
            tols=self.tols)

    def pairwise_rate_sums(self, t: float) -> np.ndarray:
        """gamma_i + gamma_j for i < j; positivity of all three is the
        P-divisibility condition for this model."""
        g = np.array([r(t) for r in self.rates])
        return np.array([g[0] + g[1], g[0] + g[2], g[1] + g[2]])
