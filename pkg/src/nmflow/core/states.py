"""Quantum states, Helstrom matrices and state-space metrics.

Conventions used throughout the package:

* computational basis ``|0> = (1, 0)``, ``|1> = (0, 1)``; for two-level
  models ``|1>`` is the excited state, so ``rho[1, 1]`` is the excited
  population and ``rho[1, 0]`` the coherence that decoherence functions
  multiply,
* standard Pauli matrices with ``sigma_z |0> = +|0>``; the lowering
  operator is ``SIGMA_MINUS = |0><1|``,
* Bloch decomposition ``rho = (I + r . sigma) / 2``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..config import DEFAULT, Tolerances
from ..errors import DimensionMismatchError, ValidationError

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
IDENTITY_2 = np.eye(2, dtype=complex)
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)
SIGMA_MINUS = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)  # |0><1|
SIGMA_PLUS = SIGMA_MINUS.conj().T                                # |1><0|


def _as_square_complex(matrix) -> np.ndarray:
    out = np.array(matrix, dtype=complex)
    if out.ndim != 2 or out.shape[0] != out.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {out.shape}")
    return out


def hermiticity_defect(matrix: np.ndarray) -> float:
    """Max entrywise deviation of a matrix from its adjoint."""
    return float(np.max(np.abs(matrix - matrix.conj().T)))


def trace_norm(matrix: np.ndarray, tols: Tolerances = DEFAULT) -> float:
    """Trace norm ||A|| = tr|A|.

    Hermitian inputs go through the symmetric eigensolver (sum of
    absolute eigenvalues); anything else falls back to singular values.
    """
    matrix = np.asarray(matrix, dtype=complex)
    if hermiticity_defect(matrix) <= max(tols.hermiticity, 1e-13 * _scale(matrix)):
        return float(np.sum(np.abs(np.linalg.eigvalsh(matrix))))
    return float(np.sum(np.linalg.svd(matrix, compute_uv=False)))


def _scale(matrix: np.ndarray) -> float:
    return float(max(np.max(np.abs(matrix)), 1.0))


def hermitian_trace_norms(matrices: np.ndarray) -> np.ndarray:
    """Trace norms of a stacked array (..., d, d) of Hermitian matrices."""
    return np.sum(np.abs(np.linalg.eigvalsh(matrices)), axis=-1)


@dataclass(frozen=True)
class DensityMatrix:
    """A physical state: Hermitian, unit trace, positive within tolerance."""

    matrix: np.ndarray
    tols: Tolerances = field(default=DEFAULT, repr=False, compare=False)

    def __post_init__(self):
        mat = _as_square_complex(self.matrix)
        if hermiticity_defect(mat) > self.tols.hermiticity:
            raise ValidationError(
                f"state not Hermitian: defect {hermiticity_defect(mat):.3e}")
        tr = np.trace(mat)
        if abs(tr - 1.0) > self.tols.trace:
            raise ValidationError(f"state trace {tr} differs from 1 beyond tolerance")
        min_eig = float(np.linalg.eigvalsh(mat)[0])
        if min_eig < -self.tols.state_psd:
            raise ValidationError(f"state has negative eigenvalue {min_eig:.3e}")
        mat = 0.5 * (mat + mat.conj().T)
        mat.flags.writeable = False
        object.__setattr__(self, "matrix", mat)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def pure(cls, amplitudes: Sequence[complex], tols: Tolerances = DEFAULT) -> "DensityMatrix":
        """Projector onto a (normalized) state vector."""
        vec = np.asarray(amplitudes, dtype=complex)
        vec = vec / np.linalg.norm(vec)
        return cls(np.outer(vec, vec.conj()), tols)

    @classmethod
    def basis_state(cls, index: int, dim: int = 2) -> "DensityMatrix":
        vec = np.zeros(dim, dtype=complex)
        vec[index] = 1.0
        return cls.pure(vec)

    @classmethod
    def maximally_mixed(cls, dim: int = 2) -> "DensityMatrix":
        return cls(np.eye(dim, dtype=complex) / dim)

    @classmethod
    def from_bloch(cls, vector: Sequence[float], tols: Tolerances = DEFAULT) -> "DensityMatrix":
        """Qubit state (I + r . sigma)/2; requires |r| <= 1."""
        r = np.asarray(vector, dtype=float)
        if r.shape != (3,):
            raise ValidationError("Bloch vector must have three components")
        if np.linalg.norm(r) > 1.0 + tols.state_psd:
            raise ValidationError(f"Bloch vector length {np.linalg.norm(r):.6f} > 1")
        mat = 0.5 * (IDENTITY_2 + r[0] * SIGMA_X + r[1] * SIGMA_Y + r[2] * SIGMA_Z)
        return cls(mat, tols)

    def bloch_vector(self) -> np.ndarray:
        """Bloch components (qubit only)."""
        if self.dim != 2:
            raise DimensionMismatchError("Bloch vector defined for qubits only")
        return np.array([np.trace(p @ self.matrix).real for p in PAULIS])

    def excited_population(self) -> float:
        """rho_11, the population of the excited level (qubit only)."""
        if self.dim != 2:
            raise DimensionMismatchError("population accessor defined for qubits only")
        return float(self.matrix[1, 1].real)

    def coherence(self) -> complex:
        """rho_10 = <1|rho|0> (qubit only)."""
        if self.dim != 2:
            raise DimensionMismatchError("coherence accessor defined for qubits only")
        return complex(self.matrix[1, 0])


def antipodal_pair(direction: Sequence[float]) -> tuple[DensityMatrix, DensityMatrix]:
    """The pure-state pair at +n and -n on the Bloch sphere."""
    n = np.asarray(direction, dtype=float)
    n = n / np.linalg.norm(n)
    return DensityMatrix.from_bloch(n), DensityMatrix.from_bloch(-n)


def pair_population_coherence_differences(r1: DensityMatrix, r2: DensityMatrix) -> tuple[float, complex]:
    """(a, b) = (rho_11^1 - rho_11^2, rho_10^1 - rho_10^2) for a qubit pair."""
    return (r1.excited_population() - r2.excited_population(),
            r1.coherence() - r2.coherence())


@dataclass(frozen=True)
class HelstromMatrix:
    """Weighted state difference Delta = p1 rho1 - p2 rho2.

    The constituents are retained so the defining identity can be
    checked; the trace norm of Delta is the bias of an optimal biased
    discrimination measurement.
    """

    rho1: DensityMatrix
    rho2: DensityMatrix
    p1: float
    p2: float
    tols: Tolerances = field(default=DEFAULT, repr=False, compare=False)

    def __post_init__(self):
        if abs(self.p1 + self.p2 - 1.0) > self.tols.trace:
            raise ValidationError(f"weights {self.p1}, {self.p2} do not sum to 1")
        if self.p1 < 0 or self.p2 < 0:
            raise ValidationError("weights must be probabilities")
        if self.rho1.dim != self.rho2.dim:
            raise DimensionMismatchError("constituent states have different dimensions")
        mat = self.p1 * self.rho1.matrix - self.p2 * self.rho2.matrix
        if hermiticity_defect(mat) > self.tols.hermiticity:
            raise ValidationError("Helstrom matrix not Hermitian within tolerance")
        mat.flags.writeable = False
        object.__setattr__(self, "matrix", mat)

    matrix: np.ndarray = field(init=False)

    @property
    def dim(self) -> int:
        return self.rho1.dim


def trace_distance(r1: DensityMatrix, r2: DensityMatrix,
                   tols: Tolerances = DEFAULT) -> float:
    """D(rho1, rho2) = (1/2) ||rho1 - rho2||, in [0, 1]."""
    if r1.dim != r2.dim:
        raise DimensionMismatchError(
            f"states of dimension {r1.dim} and {r2.dim} cannot be compared")
    diff = r1.matrix - r2.matrix
    if hermiticity_defect(diff) > tols.hermiticity:
        raise ValidationError("state difference not Hermitian within tolerance")
    return 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(diff))))


def helstrom_norm(h: HelstromMatrix) -> float:
    """Trace norm of the Helstrom matrix.

    Reduces to the trace distance of the constituent states when
    p1 = p2 = 1/2.
    """
    return float(np.sum(np.abs(np.linalg.eigvalsh(h.matrix))))


def states_orthogonal(r1: DensityMatrix, r2: DensityMatrix,
                      tols: Tolerances = DEFAULT) -> bool:
    """Whether two states have orthogonal supports, i.e. D = 1 within
    the configured support_overlap tolerance."""
    return trace_distance(r1, r2, tols) >= 1.0 - tols.support_overlap


def kron_all(*operators: np.ndarray) -> np.ndarray:
    """Tensor product of a sequence of operators, left to right."""
    out = np.asarray(operators[0], dtype=complex)
    for op in operators[1:]:
        out = np.kron(out, np.asarray(op, dtype=complex))
    return out


def partial_trace(matrix: np.ndarray, dims: tuple[int, int], keep: int) -> np.ndarray:
    """Partial trace of an operator on a bipartite space.

    dims = (d_first, d_second); keep = 0 retains the first factor,
    keep = 1 the second.
    """
    d0, d1 = dims
    mat = np.asarray(matrix, dtype=complex).reshape(d0, d1, d0, d1)
    if keep == 0:
        return np.einsum("ijkj->ik", mat)
    if keep == 1:
        return np.einsum("ijik->jk", mat)
    raise ValueError("keep must be 0 or 1")
