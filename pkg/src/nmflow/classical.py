"""Classical Markov jump processes and the quantum-to-classical bridge.

Pauli master equation for the one-point probabilities,

    d/dt P(x, t) = sum_z [ W_xz(t) P(z, t) - W_zx(t) P(x, t) ],

conditional transition matrices from delta initial conditions, the
(generalized, weighted) Kolmogorov distance, and the reduction of a
diagonality-preserving quantum generator to classical rates

    W_nm(t) = sum_i gamma_i(t) |<n| A_i |m>|^2.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence, Union

import numpy as np
from scipy.integrate import solve_ivp

from .config import DEFAULT, Tolerances
from .core.generators import TimeLocalGenerator
from .errors import ValidationError

MatrixLike = Union[np.ndarray, Callable[[float], np.ndarray]]


@dataclass(frozen=True)
class RateMatrix:
    """Off-diagonal transition rates W_xz(t) >= 0 (column z feeds row x)."""

    n_states: int
    rates: MatrixLike

    def __call__(self, t: float) -> np.ndarray:
        w = self.rates(t) if callable(self.rates) else self.rates
        w = np.asarray(w, dtype=float)
        if w.shape != (self.n_states, self.n_states):
            raise ValidationError(f"rate matrix shape {w.shape} does not match "
                                  f"n_states {self.n_states}")
        off = w - np.diag(np.diag(w))
        if np.min(off) < 0:
            raise ValidationError(f"negative rate {np.min(off):.3e} at t = {t}")
        return off

    def generator(self, t: float) -> np.ndarray:
        """W minus the column-sum diagonal; columns sum to zero."""
        w = self(t)
        return w - np.diag(w.sum(axis=0))


@dataclass(frozen=True)
class TransitionMatrix:
    """Column-stochastic conditional probability matrix."""

    matrix: np.ndarray
    tols: Tolerances = field(default=DEFAULT, repr=False, compare=False)

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=float)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValidationError("transition matrix must be square")
        col_defect = np.max(np.abs(mat.sum(axis=0) - 1.0))
        if col_defect > self.tols.trace:
            raise ValidationError(f"columns sum to 1 within {self.tols.trace}; "
                                  f"defect {col_defect:.3e}")
        if np.min(mat) < -self.tols.state_psd or np.max(mat) > 1.0 + self.tols.state_psd:
            raise ValidationError("transition probabilities outside [0, 1]")
        mat.flags.writeable = False
        object.__setattr__(self, "matrix", mat)

    @property
    def n_states(self) -> int:
        return self.matrix.shape[0]


def pauli_evolve(w: RateMatrix, p0: Sequence[float], t_grid,
                 rtol: float = 1e-11, atol: float = 1e-13) -> np.ndarray:
    """Probability trajectories (len(t_grid), n_states).

    Normalization is preserved by the generator structure; the result is
    checked to stay normalized and nonnegative within tolerance.
    """
    p0 = np.asarray(p0, dtype=float)
    if abs(p0.sum() - 1.0) > DEFAULT.trace:
        raise ValidationError(f"initial distribution sums to {p0.sum()}")
    if np.min(p0) < -DEFAULT.state_psd:
        raise ValidationError("initial distribution has negative entries")
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid[-1] == 0.0:
        return np.tile(p0, (len(t_grid), 1))

    sol = solve_ivp(lambda t, p: w.generator(t) @ p, (0.0, float(t_grid[-1])),
                    p0, t_eval=t_grid, rtol=rtol, atol=atol, method="DOP853")
    if not sol.success:
        raise ValidationError(f"master equation integration failed: {sol.message}")
    out = sol.y.T
    if np.max(np.abs(out.sum(axis=1) - 1.0)) > 1e-9:
        raise ValidationError("normalization drifted beyond 1e-9")
    if np.min(out) < -1e-9:
        raise ValidationError("negative probability beyond 1e-9")
    return out


def transition_matrices(w: RateMatrix, t_grid) -> list[TransitionMatrix]:
    """T(t, 0) on the grid, columns evolved from delta initial conditions."""
    n = w.n_states
    cols = [pauli_evolve(w, np.eye(n)[:, y], t_grid) for y in range(n)]
    return [TransitionMatrix(np.column_stack([cols[y][k] for y in range(n)]))
            for k in range(len(np.atleast_1d(t_grid)))]


def kolmogorov_distance(p1: Sequence[float], p2: Sequence[float],
                        weights: tuple[float, float] = (0.5, 0.5)) -> float:
    """Weighted L1 bias K = sum_x |w1 p1(x) - w2 p2(x)|.

    Monotone nonincreasing under every stochastic matrix; the classical
    shadow of the Helstrom norm.
    """
    p1 = np.asarray(p1, dtype=float)
    p2 = np.asarray(p2, dtype=float)
    if p1.shape != p2.shape:
        raise ValidationError("distributions must have equal length")
    for p in (p1, p2):
        if abs(p.sum() - 1.0) > 1e-9:
            raise ValidationError("distributions must be normalized")
    return float(np.sum(np.abs(weights[0] * p1 - weights[1] * p2)))


def quantum_to_classical(gen: TimeLocalGenerator, basis: np.ndarray,
                         tols: Tolerances = DEFAULT,
                         check_times: Sequence[float] = (0.0, 0.5, 1.0)) -> RateMatrix:
    """Classical rates W_nm(t) = sum_i gamma_i(t) |<n|A_i|m>|^2.

    Requires the generator to preserve diagonality in the given basis
    (columns of ``basis``): applying it to each basis projector must
    leave no off-diagonal component beyond tolerance.
    """
    basis = np.asarray(basis, dtype=complex)
    dim = gen.dim
    if basis.shape != (dim, dim):
        raise ValidationError("basis must be a square matrix of column vectors")

    for t in check_times:
        for n in range(dim):
            proj = np.outer(basis[:, n], basis[:, n].conj())
            image = gen.apply(float(t), proj)
            rotated = basis.conj().T @ image @ basis
            off = rotated - np.diag(np.diag(rotated))
            if np.max(np.abs(off)) > 1e-10:
                raise ValidationError(
                    f"generator leaks off-diagonal weight {np.max(np.abs(off)):.3e} "
                    f"at t = {t}: not diagonality-preserving in this basis")

    elements = np.empty((len(gen.channels), dim, dim))
    for i, ch in enumerate(gen.channels):
        elements[i] = np.abs(basis.conj().T @ ch.operator @ basis) ** 2

    def rates(t: float) -> np.ndarray:
        gammas = gen.rates(t)
        w = np.einsum("i,inm->nm", gammas, elements)
        return w - np.diag(np.diag(w))

    return RateMatrix(dim, rates)
