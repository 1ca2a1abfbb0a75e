"""Time-local master-equation generators.

A generator consists of a (possibly time-dependent) system Hamiltonian
and decay channels (A_i, gamma_i(t)); its action is

    d rho / dt = -i [H(t), rho]
                 + sum_i gamma_i(t) (A_i rho A_i^dag
                                     - (1/2) {A_i^dag A_i, rho}).

Rates may go negative; that is exactly the regime the divisibility
classifiers care about.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.integrate import solve_ivp

from ..config import DEFAULT, Tolerances
from ..errors import ValidationError
from .maps import QuantumMap, superop_to_choi, vec
from .states import DensityMatrix, hermiticity_defect


@dataclass(frozen=True)
class Channel:
    """One decay channel: a Lindblad operator and its rate gamma_i(t)."""

    operator: np.ndarray
    rate: Callable[[float], float]

    def __post_init__(self):
        op = np.asarray(self.operator, dtype=complex)
        op.flags.writeable = False
        object.__setattr__(self, "operator", op)


@dataclass(frozen=True)
class TimeLocalGenerator:
    dim: int
    hamiltonian: Optional[Callable[[float], np.ndarray]]
    channels: tuple[Channel, ...]
    tols: Tolerances = field(default=DEFAULT, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "channels", tuple(self.channels))
        if self.channels:
            gram = np.array([[np.trace(a.operator.conj().T @ b.operator)
                              for b in self.channels] for a in self.channels])
            smallest = np.linalg.svd(gram, compute_uv=False)[-1]
            if smallest < self.tols.gram_independence:
                raise ValidationError(
                    "Lindblad operators are not linearly independent "
                    f"(Gram smallest singular value {smallest:.3e})")
        if self.hamiltonian is not None:
            for t in (0.0, 0.37, 1.0):
                h = np.asarray(self.hamiltonian(t), dtype=complex)
                if hermiticity_defect(h) > self.tols.hermiticity:
                    raise ValidationError(f"hamiltonian({t}) is not Hermitian")

    def rates(self, t: float) -> np.ndarray:
        return np.array([c.rate(t) for c in self.channels], dtype=float)

    def liouvillian(self, t: float) -> np.ndarray:
        """Superoperator L(t) with vec(d rho/dt) = L(t) vec(rho)."""
        d = self.dim
        eye = np.eye(d, dtype=complex)
        l = np.zeros((d * d, d * d), dtype=complex)
        if self.hamiltonian is not None:
            h = np.asarray(self.hamiltonian(t), dtype=complex)
            l += -1.0j * (np.kron(eye, h) - np.kron(h.T, eye))
        for c in self.channels:
            a = c.operator
            ada = a.conj().T @ a
            l += c.rate(t) * (np.kron(a.conj(), a)
                              - 0.5 * (np.kron(eye, ada) + np.kron(ada.T, eye)))
        return l

    def apply(self, t: float, rho: np.ndarray) -> np.ndarray:
        """K_t acting on an operator."""
        d = self.dim
        out = self.liouvillian(t) @ vec(rho)
        return out.reshape(d, d, order="F")

    def propagator_superops(self, times: Sequence[float], rtol: float = 1e-10,
                            atol: float = 1e-12) -> np.ndarray:
        """Superoperators of Phi_t on a grid (t=0 entry included if present).

        Integrates the matrix equation dM/dt = L(t) M from the earliest
        requested time with M = identity at t = 0.
        """
        times = np.asarray(times, dtype=float)
        d2 = self.dim * self.dim
        if times[-1] == 0.0:
            return np.broadcast_to(np.eye(d2, dtype=complex), (len(times), d2, d2)).copy()

        def rhs(t, y):
            m = y.reshape(d2, d2)
            return (self.liouvillian(t) @ m).ravel()

        y0 = np.eye(d2, dtype=complex).ravel()
        sol = solve_ivp(rhs, (0.0, float(times[-1])), y0, t_eval=times,
                        rtol=rtol, atol=atol, method="DOP853")
        if not sol.success:
            raise ValidationError(f"propagator integration failed: {sol.message}")
        return sol.y.T.reshape(len(times), d2, d2)

    def propagators(self, times: Sequence[float]) -> list[QuantumMap]:
        return [QuantumMap.from_choi(superop_to_choi(s), tols=self.tols)
                for s in self.propagator_superops(times)]

    def evolve(self, rho0: DensityMatrix, times: Sequence[float],
               rtol: float = 1e-10, atol: float = 1e-12) -> np.ndarray:
        """State trajectory (len(times), dim, dim) from an initial state."""
        times = np.asarray(times, dtype=float)

        def rhs(t, y):
            rho = y.reshape(self.dim, self.dim)
            ldot = self.apply(t, rho)
            return ldot.ravel()

        sol = solve_ivp(rhs, (0.0, float(times[-1])), rho0.matrix.ravel().astype(complex),
                        t_eval=times, rtol=rtol, atol=atol, method="DOP853")
        if not sol.success:
            raise ValidationError(f"state integration failed: {sol.message}")
        return sol.y.T.reshape(len(times), self.dim, self.dim)
