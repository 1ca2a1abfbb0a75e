"""Spin-environment probes: transverse-field Ising chain and the XX chain.

A probe qubit coupled to an Ising chain dephases with

    G(t) = <Phi| e^{i H_g t} e^{-i H_e t} |Phi>,

where |Phi> is the environment ground state, H_g = H_E and H_e carries
the shifted transverse field lambda* = lambda + delta.  |G|^2 is the
Loschmidt echo and sqrt(L) the optimal-pair distinguishability, which
makes the probe sensitive to environment criticality.

For the XX chain at matched local fields the optimal-pair trace
distance is D(t) = |J_1(2t)| / t with the analytic rate

    sigma(t) = -(2/t) sgn[J_1(2t)] J_2(2t).
"""

from __future__ import annotations

from dataclasses import dataclass
from dataclasses import field as _field
from typing import Optional

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import eigsh, expm_multiply
from scipy.special import jv

from ..config import DEFAULT, Tolerances
from ..errors import ValidationError
from .base import DynamicalModel
from .dephasing import DecoherenceFunction, PureDephasingModel

MAX_SPINS = 12
_DENSE_LIMIT = 10  # full eigendecomposition up to here, Krylov stepping beyond

_SX = sp.csr_matrix(np.array([[0.0, 1.0], [1.0, 0.0]]))
_SZ = sp.csr_matrix(np.array([[1.0, 0.0], [0.0, -1.0]]))


@dataclass(frozen=True)
class SpinChainSpec:
    """Ising environment plus probe coupling.

    field is the bare transverse field lambda; the probe shifts it to
    lambda* = lambda + probe_coupling when the qubit sits in the excited
    state.
    """

    n_spins: int
    coupling: float = 1.0           # J
    field: float = 1.0              # lambda (dimensionless)
    probe_coupling: float = 0.1     # delta (dimensionless)
    boundary: str = "periodic"
    initial_state: Optional[np.ndarray] = _field(default=None, repr=False)

    def __post_init__(self):
        if not 1 <= self.n_spins <= MAX_SPINS:
            raise ValidationError(
                f"n_spins = {self.n_spins} outside the supported range 1..{MAX_SPINS}")
        if self.boundary not in ("periodic", "open"):
            raise ValidationError("boundary must be 'periodic' or 'open'")
        if self.initial_state is not None:
            vec = np.asarray(self.initial_state, dtype=complex)
            if vec.shape != (2 ** self.n_spins,):
                raise ValidationError("initial state has the wrong dimension")
            object.__setattr__(self, "initial_state", vec / np.linalg.norm(vec))

    @property
    def field_shifted(self) -> float:
        return self.field + self.probe_coupling

    @classmethod
    def at_shifted_field(cls, n_spins: int, field_shifted: float,
                         probe_coupling: float = 0.1, coupling: float = 1.0,
                         boundary: str = "periodic") -> "SpinChainSpec":
        """Build the spec from lambda* directly (sweep-friendly)."""
        return cls(n_spins=n_spins, coupling=coupling,
                   field=field_shifted - probe_coupling,
                   probe_coupling=probe_coupling, boundary=boundary)


def _site_operator(op: sp.csr_matrix, site: int, n: int) -> sp.csr_matrix:
    mats = [sp.identity(2, format="csr")] * n
    mats[site] = op
    out = mats[0]
    for m in mats[1:]:
        out = sp.kron(out, m, format="csr")
    return out


def ising_hamiltonian(n: int, coupling: float, transverse_field: float,
                      boundary: str = "periodic") -> sp.csr_matrix:
    """H = -J sum_j (sigma^z_j sigma^z_{j+1} + lambda sigma^x_j)."""
    dim = 2 ** n
    h = sp.csr_matrix((dim, dim))
    bonds = n if (boundary == "periodic" and n > 1) else n - 1
    for j in range(bonds):
        h = h - coupling * (_site_operator(_SZ, j, n)
                            @ _site_operator(_SZ, (j + 1) % n, n))
    for j in range(n):
        h = h - coupling * transverse_field * _site_operator(_SX, j, n)
    return h


def _environment_hamiltonians(spec: SpinChainSpec) -> tuple[sp.csr_matrix, sp.csr_matrix]:
    h_g = ising_hamiltonian(spec.n_spins, spec.coupling, spec.field, spec.boundary)
    h_e = ising_hamiltonian(spec.n_spins, spec.coupling, spec.field_shifted,
                            spec.boundary)
    return h_g, h_e


def chain_ground_state(spec: SpinChainSpec) -> tuple[float, np.ndarray]:
    """Ground energy and state of H_E (dense below 2^8, Lanczos above)."""
    h_g, _ = _environment_hamiltonians(spec)
    if spec.n_spins <= 8:
        vals, vecs = np.linalg.eigh(h_g.toarray())
        return float(vals[0]), vecs[:, 0]
    vals, vecs = eigsh(h_g, k=1, which="SA")
    return float(vals[0]), vecs[:, 0]


def ising_probe_G(spec: SpinChainSpec, times, tols: Tolerances = DEFAULT) -> np.ndarray:
    """Loschmidt amplitude G(t) = <Phi| e^{i H_g t} e^{-i H_e t} |Phi>."""
    scalar = np.isscalar(times)
    times = np.atleast_1d(np.asarray(times, dtype=float))
    h_g, h_e = _environment_hamiltonians(spec)
    if spec.initial_state is not None:
        phi = spec.initial_state
        e_g = None
    else:
        e_g, phi = chain_ground_state(spec)

    if spec.n_spins <= _DENSE_LIMIT:
        vals_e, vecs_e = np.linalg.eigh(h_e.toarray())
        amp = vecs_e.conj().T @ phi
        if e_g is None:
            # initial state not an H_g eigenstate: evolve both branches densely
            vals_g, vecs_g = np.linalg.eigh(h_g.toarray())
            amp_g = vecs_g.conj().T @ phi
            left = vecs_g @ (np.exp(-1.0j * np.outer(vals_g, times)) * amp_g[:, None])
            right = vecs_e @ (np.exp(-1.0j * np.outer(vals_e, times)) * amp[:, None])
            out = np.einsum("it,it->t", left.conj(), right)
        else:
            # |Phi> is an H_g eigenstate, so only H_e overlaps matter
            weights = np.abs(amp) ** 2
            out = np.exp(1.0j * e_g * times) * (
                weights @ np.exp(-1.0j * np.outer(vals_e, times)))
    else:
        out = _krylov_overlaps(h_g, h_e, phi, times, tols)
    return complex(out[0]) if scalar else out


def _krylov_overlaps(h_g, h_e, phi, times, tols: Tolerances) -> np.ndarray:
    """Sequential expm_multiply stepping for N = 11, 12."""
    order = np.argsort(times)
    sorted_times = times[order]
    out = np.empty(len(times), dtype=complex)
    left = phi.astype(complex)
    right = phi.astype(complex)
    t_prev = 0.0
    for rank, t in zip(order, sorted_times):
        dt = t - t_prev
        if dt > 0:
            left = expm_multiply(-1.0j * h_g * dt, left)
            right = expm_multiply(-1.0j * h_e * dt, right)
            t_prev = t
        drift = max(abs(np.linalg.norm(left) - 1.0), abs(np.linalg.norm(right) - 1.0))
        if drift > tols.unitarity_drift:
            raise ValidationError(f"Krylov unitarity drift {drift:.2e} exceeds bound")
        out[rank] = np.vdot(left, right)
    return out


class IsingProbeModel(PureDephasingModel):
    """Pure dephasing of the probe qubit with G from exact diagonalization."""

    def __init__(self, spec: SpinChainSpec, tols: Tolerances = DEFAULT):
        self.spec = spec
        if spec.n_spins <= _DENSE_LIMIT and spec.initial_state is None:
            e_g, phi = chain_ground_state(spec)
            _, h_e = _environment_hamiltonians(spec)
            vals_e, vecs_e = np.linalg.eigh(h_e.toarray())
            weights = np.abs(vecs_e.conj().T @ phi) ** 2
            freqs = vals_e - e_g

            def vector_eval(ts):
                ts = np.asarray(ts, dtype=float)
                return np.exp(-1.0j * np.outer(ts, freqs)) @ weights

            g = DecoherenceFunction(
                evaluator=lambda t: complex(vector_eval(np.atleast_1d(t))[0]),
                vector_evaluator=vector_eval,
                provenance="loschmidt_ed",
                t_scale=1.0 / max(abs(spec.coupling), 1e-12), tols=tols)
        else:
            g = DecoherenceFunction(
                evaluator=lambda t: ising_probe_G(spec, t, tols),
                vector_evaluator=lambda ts: ising_probe_G(spec, ts, tols),
                provenance="loschmidt_ed",
                t_scale=1.0 / max(abs(spec.coupling), 1e-12), tols=tols)
        super().__init__(g, tols)

    def loschmidt_echo(self, times) -> np.ndarray:
        """L(t) = |G(t)|^2."""
        return np.abs(self.g.values(times)) ** 2


def xx_chain_sigma(t):
    """Analytic optimal-pair trace-distance rate of the XX-chain probe
    at matched fields: sigma(t) = -(2/t) sgn[J_1(2t)] J_2(2t); 0 at t=0."""
    scalar = np.isscalar(t)
    times = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.zeros_like(times)
    pos = times > 0
    x = 2.0 * times[pos]
    out[pos] = -(2.0 / times[pos]) * np.sign(jv(1, x)) * jv(2, x)
    if scalar:
        return float(out[0])
    return out


def xx_chain_distance(t):
    """Optimal-pair trace distance D(t) = |J_1(2t)| / t (1 at t = 0);
    its derivative is xx_chain_sigma."""
    scalar = np.isscalar(t)
    times = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.ones_like(times)
    pos = times > 0
    out[pos] = np.abs(jv(1, 2.0 * times[pos])) / times[pos]
    if scalar:
        return float(out[0])
    return out
