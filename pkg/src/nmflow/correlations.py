"""Total-system unitary simulation: information flow, initial-correlation
witness, discord lower bound.

The information inside the open system is the distinguishability of the
reduced states, I_int(t) = D(rho_S^1(t), rho_S^2(t)); I_ext(t) is the
distinguishability of the total states minus I_int.  Unitarity keeps
their sum constant, and I_ext is bounded by two correlation terms plus
the environmental distinguishability.  An increase of the local trace
distance above its initial value therefore witnesses initial
correlations; with a local dephasing in the eigenbasis of rho_S(0) it
lower-bounds the quantum-discord-like correlation measure
C = D(rho_SE, dephased rho_SE).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .config import DEFAULT, Tolerances
from .core.maps import QuantumMap
from .core.states import DensityMatrix, kron_all, partial_trace, trace_distance
from .errors import (DegenerateBasisError, DimensionMismatchError, NumericalError,
                     ValidationError)

DIM_CAP = 4096


@dataclass(frozen=True)
class TotalSystem:
    """System + environment with H = H_S x I + I x H_E + H_I."""

    dim_s: int
    dim_e: int
    h_s: np.ndarray
    h_e: np.ndarray
    h_i: np.ndarray
    rho1: DensityMatrix
    rho2: Optional[DensityMatrix] = None
    tols: Tolerances = field(default=DEFAULT, repr=False, compare=False)

    def __post_init__(self):
        d = self.dim_s * self.dim_e
        if d > DIM_CAP:
            raise DimensionMismatchError(
                f"composite dimension {d} exceeds the cap {DIM_CAP}")
        for name, h, dim in (("h_s", self.h_s, self.dim_s),
                             ("h_e", self.h_e, self.dim_e),
                             ("h_i", self.h_i, d)):
            h = np.asarray(h, dtype=complex)
            if h.shape != (dim, dim):
                raise DimensionMismatchError(f"{name} has shape {h.shape}")
            if np.max(np.abs(h - h.conj().T)) > self.tols.hermiticity:
                raise ValidationError(f"{name} is not Hermitian")
            object.__setattr__(self, name, h)
        for name, rho in (("rho1", self.rho1), ("rho2", self.rho2)):
            if rho is not None and rho.dim != d:
                raise DimensionMismatchError(f"{name} lives on dimension {rho.dim}, "
                                             f"expected {d}")

    def hamiltonian(self) -> np.ndarray:
        eye_s = np.eye(self.dim_s, dtype=complex)
        eye_e = np.eye(self.dim_e, dtype=complex)
        return kron_all(self.h_s, eye_e) + kron_all(eye_s, self.h_e) + self.h_i

    @classmethod
    def from_product(cls, h_s, h_e, h_i, rho_s1: DensityMatrix, rho_s2: DensityMatrix,
                     rho_env: DensityMatrix, tols: Tolerances = DEFAULT) -> "TotalSystem":
        """Two product initial states sharing the same environment state."""
        rho1 = DensityMatrix(kron_all(rho_s1.matrix, rho_env.matrix), tols)
        rho2 = DensityMatrix(kron_all(rho_s2.matrix, rho_env.matrix), tols)
        return cls(rho_s1.dim, rho_env.dim, h_s, h_e, h_i, rho1, rho2, tols)


@dataclass(frozen=True)
class TotalTrajectory:
    times: np.ndarray
    rho_se1: np.ndarray          # (T, d, d)
    rho_se2: Optional[np.ndarray]
    rho_s1: np.ndarray
    rho_s2: Optional[np.ndarray]
    rho_e1: np.ndarray
    rho_e2: Optional[np.ndarray]


def _propagators(h: np.ndarray, times: np.ndarray,
                 tols: Tolerances) -> np.ndarray:
    vals, vecs = np.linalg.eigh(h)
    phases = np.exp(-1.0j * np.outer(times, vals))
    us = np.einsum("ik,tk,jk->tij", vecs, phases, vecs.conj())
    drift = np.max(np.abs(np.einsum("tik,tjk->tij", us, us.conj())
                          - np.eye(h.shape[0])))
    if drift > tols.unitarity_drift * 10:
        raise NumericalError(f"unitarity drift {drift:.2e}", operation="evolve_total")
    return us


def evolve_total(ts: TotalSystem, t_grid) -> TotalTrajectory:
    """Unitary trajectories of the total, system and environment states."""
    times = np.asarray(t_grid, dtype=float)
    us = _propagators(ts.hamiltonian(), times, ts.tols)
    dims = (ts.dim_s, ts.dim_e)

    def run(rho0: DensityMatrix):
        rho_t = np.einsum("tij,jk,tlk->til", us, rho0.matrix, us.conj())
        red_s = np.stack([partial_trace(r, dims, keep=0) for r in rho_t])
        red_e = np.stack([partial_trace(r, dims, keep=1) for r in rho_t])
        return rho_t, red_s, red_e

    rho1_t, s1, e1 = run(ts.rho1)
    if ts.rho2 is not None:
        rho2_t, s2, e2 = run(ts.rho2)
    else:
        rho2_t = s2 = e2 = None
    return TotalTrajectory(times, rho1_t, rho2_t, s1, s2, e1, e2)


def _distance(a: np.ndarray, b: np.ndarray) -> float:
    return 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(a - b))))


@dataclass(frozen=True)
class InfoFlowRecord:
    times: np.ndarray
    i_int: np.ndarray
    i_ext: np.ndarray
    correlation_1: np.ndarray    # D(rho_SE^1, rho_S^1 x rho_E^1)
    correlation_2: np.ndarray
    environment: np.ndarray      # D(rho_E^1, rho_E^2)

    def bound_satisfied(self, slack: float = 1e-9) -> bool:
        bound = self.correlation_1 + self.correlation_2 + self.environment
        return bool(np.all(self.i_ext <= bound + slack))

    def conservation_defect(self) -> float:
        total = self.i_int + self.i_ext
        return float(np.max(np.abs(total - total[0])))


def info_flow(ts: TotalSystem, t_grid) -> InfoFlowRecord:
    """I_int / I_ext split with the correlation bound terms.

    Raises if the bound inequality is violated beyond tolerance (it is a
    theorem, so a violation means the numerics are broken).
    """
    if ts.rho2 is None:
        raise ValidationError("info_flow needs two total initial states")
    traj = evolve_total(ts, t_grid)
    n = len(traj.times)
    i_int = np.empty(n)
    i_tot = np.empty(n)
    corr1 = np.empty(n)
    corr2 = np.empty(n)
    env = np.empty(n)
    for k in range(n):
        i_int[k] = _distance(traj.rho_s1[k], traj.rho_s2[k])
        i_tot[k] = _distance(traj.rho_se1[k], traj.rho_se2[k])
        corr1[k] = _distance(traj.rho_se1[k],
                             kron_all(traj.rho_s1[k], traj.rho_e1[k]))
        corr2[k] = _distance(traj.rho_se2[k],
                             kron_all(traj.rho_s2[k], traj.rho_e2[k]))
        env[k] = _distance(traj.rho_e1[k], traj.rho_e2[k])
    record = InfoFlowRecord(traj.times, i_int, i_tot - i_int, corr1, corr2, env)
    if not record.bound_satisfied(1e-9):
        raise NumericalError("information-flow bound violated beyond tolerance",
                             operation="info_flow")
    return record


def _embed_local(lam: QuantumMap, dim_e: int) -> QuantumMap:
    """Lift a system-local map to the composite space (Lambda x I)."""
    eye = np.eye(dim_e, dtype=complex)
    if lam.kraus_ops is not None:
        return QuantumMap.from_kraus([kron_all(k, eye) for k in lam.kraus_ops],
                                     trace_preserving=lam.trace_preserving)
    # fall back through the Kraus form of the Choi state
    from .core.maps import choi_to_kraus
    ops = choi_to_kraus(lam.choi_matrix())
    return QuantumMap.from_kraus([kron_all(k, eye) for k in ops],
                                 trace_preserving=lam.trace_preserving)


def initial_correlation_witness(ts: TotalSystem, lam_local: QuantumMap, t_grid,
                                tols: Tolerances = DEFAULT
                                ) -> tuple[np.ndarray, bool]:
    """Trace-distance excursion above its initial value, and the verdict.

    The second reference state is (Lambda x I) rho_SE^1; an excursion
    beyond tolerance witnesses initial system-environment correlations.
    """
    if lam_local.dim_in != ts.dim_s:
        raise DimensionMismatchError("local operation must act on the system")
    lifted = _embed_local(lam_local, ts.dim_e)
    rho2 = DensityMatrix(lifted.apply_matrix(ts.rho1.matrix), tols)
    pair = TotalSystem(ts.dim_s, ts.dim_e, ts.h_s, ts.h_e, ts.h_i,
                       ts.rho1, rho2, tols)
    traj = evolve_total(pair, t_grid)
    distances = np.array([_distance(traj.rho_s1[k], traj.rho_s2[k])
                          for k in range(len(traj.times))])
    excursion = distances - distances[0]
    return excursion, bool(np.max(excursion) > tols.witness)


def dephasing_map_in_basis(eigvecs: np.ndarray) -> QuantumMap:
    """Projective dephasing sum_k P_k rho P_k in the given column basis."""
    ops = [np.outer(eigvecs[:, k], eigvecs[:, k].conj())
           for k in range(eigvecs.shape[1])]
    return QuantumMap.from_kraus(ops)


@dataclass(frozen=True)
class DiscordBound:
    lower_bound: float           # max_t D(rho_S^1(t), rho_S^2(t))
    correlation_measure: float   # C = D(rho_SE, dephased rho_SE)
    times: np.ndarray
    distances: np.ndarray


def discord_lower_bound(ts: TotalSystem, t_grid,
                        basis: Optional[np.ndarray] = None,
                        tols: Tolerances = DEFAULT) -> DiscordBound:
    """Locally accessible lower bound on the discord-like correlation C.

    The local operation is complete dephasing in the eigenbasis of
    rho_S(0); a degenerate reduced state needs an explicit basis (the
    construction is ambiguous otherwise).
    """
    rho_s0 = partial_trace(ts.rho1.matrix, (ts.dim_s, ts.dim_e), keep=0)
    if basis is None:
        eigvals, eigvecs = np.linalg.eigh(rho_s0)
        if np.min(np.diff(eigvals)) < tols.degeneracy_gap:
            raise DegenerateBasisError(
                "reduced state eigenbasis is degenerate; pass an explicit basis")
        basis = eigvecs
    lam = dephasing_map_in_basis(np.asarray(basis, dtype=complex))
    lifted = _embed_local(lam, ts.dim_e)
    dephased = lifted.apply_matrix(ts.rho1.matrix)
    c_measure = _distance(ts.rho1.matrix, dephased)

    pair = TotalSystem(ts.dim_s, ts.dim_e, ts.h_s, ts.h_e, ts.h_i,
                       ts.rho1, DensityMatrix(dephased, tols), tols)
    traj = evolve_total(pair, t_grid)
    distances = np.array([_distance(traj.rho_s1[k], traj.rho_s2[k])
                          for k in range(len(traj.times))])
    bound = float(np.max(distances))
    if bound > c_measure + 1e-9:
        raise NumericalError(
            f"lower bound {bound} exceeds the correlation measure {c_measure}",
            operation="discord_lower_bound")
    return DiscordBound(bound, c_measure, traj.times, distances)
