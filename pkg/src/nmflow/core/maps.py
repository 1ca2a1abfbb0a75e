"""Linear maps on operators: Kraus, Choi, superoperator and transfer forms.

Conventions:

* ``vec`` stacks columns, so ``vec(A B C) = (C^T kron A) vec(B)`` and the
  superoperator of a Kraus set is ``sum_i conj(K_i) kron K_i``,
* the stored Choi matrix is the *normalized* Choi state
  ``(id kron Phi)(|psi+><psi+|)`` with the ancilla as the first tensor
  factor; its trace is 1 for trace-preserving maps and its minimum
  eigenvalue witnesses complete positivity (the transpose map gives
  exactly -1/2 on a qubit),
* the transfer matrix is taken in an orthonormal Hermitian operator
  basis ``{B_a}`` whose first element is ``I/sqrt(d)``; it is real for
  Hermiticity-preserving maps and carries the Bloch affine form in its
  lower-right block.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from ..config import DEFAULT, Tolerances
from ..errors import DimensionMismatchError, NonInvertibleError, ValidationError
from .states import DensityMatrix, hermiticity_defect


def vec(matrix: np.ndarray) -> np.ndarray:
    """Column-stack a matrix into a vector."""
    return np.asarray(matrix, dtype=complex).reshape(-1, order="F")


def unvec(vector: np.ndarray, shape: Optional[tuple[int, int]] = None) -> np.ndarray:
    """Inverse of :func:`vec`."""
    vector = np.asarray(vector, dtype=complex).ravel()
    if shape is None:
        d = int(round(np.sqrt(vector.size)))
        shape = (d, d)
    return vector.reshape(shape, order="F")


def kraus_to_superop(kraus_ops: Sequence[np.ndarray]) -> np.ndarray:
    ops = [np.asarray(k, dtype=complex) for k in kraus_ops]
    rows, cols = ops[0].shape
    out = np.zeros((rows * rows, cols * cols), dtype=complex)
    for k in ops:
        out += np.kron(k.conj(), k)
    return out


def kraus_to_choi(kraus_ops: Sequence[np.ndarray]) -> np.ndarray:
    """Normalized Choi state of a Kraus set."""
    ops = [np.asarray(k, dtype=complex) for k in kraus_ops]
    dim_in = ops[0].shape[1]
    out = sum(np.outer(vec(k), vec(k).conj()) for k in ops)
    return out / dim_in


def superop_to_choi(superop: np.ndarray) -> np.ndarray:
    """Normalized Choi state from a superoperator (square maps)."""
    d = int(round(np.sqrt(superop.shape[0])))
    choi = superop.reshape(d, d, d, d).swapaxes(0, 3).reshape(d * d, d * d)
    return choi / d


def choi_to_superop(choi: np.ndarray) -> np.ndarray:
    d = int(round(np.sqrt(choi.shape[0])))
    return (choi * d).reshape(d, d, d, d).swapaxes(0, 3).reshape(d * d, d * d)


def choi_to_kraus(choi: np.ndarray, tol: float = 1e-12) -> list[np.ndarray]:
    """Kraus operators from a (completely positive) normalized Choi state.

    Eigenvectors with eigenvalue below ``tol`` are dropped; small negative
    eigenvalues within ``tol`` are treated as zero.
    """
    d = int(round(np.sqrt(choi.shape[0])))
    eigvals, eigvecs = np.linalg.eigh(choi)
    if eigvals[0] < -max(tol, 1e-10):
        raise ValidationError(
            f"Choi matrix has negative eigenvalue {eigvals[0]:.3e}; map is not CP")
    ops = []
    for lam, v in zip(eigvals, eigvecs.T):
        if lam > tol:
            ops.append(np.sqrt(lam * d) * unvec(v, (d, d)))
    return ops


@lru_cache(maxsize=16)
def hermitian_basis(dim: int) -> tuple[np.ndarray, ...]:
    """Orthonormal Hermitian operator basis with B_0 = I/sqrt(dim).

    The remaining elements are the generalized Gell-Mann matrices
    normalized to Tr[B_a B_b] = delta_ab.
    """
    basis = [np.eye(dim, dtype=complex) / np.sqrt(dim)]
    for j in range(dim):
        for k in range(j + 1, dim):
            sym = np.zeros((dim, dim), dtype=complex)
            sym[j, k] = sym[k, j] = 1.0 / np.sqrt(2.0)
            basis.append(sym)
            asym = np.zeros((dim, dim), dtype=complex)
            asym[j, k] = -1.0j / np.sqrt(2.0)
            asym[k, j] = 1.0j / np.sqrt(2.0)
            basis.append(asym)
    for l in range(1, dim):
        diag = np.zeros(dim, dtype=complex)
        diag[:l] = 1.0
        diag[l] = -l
        diag /= np.sqrt(l * (l + 1))
        basis.append(np.diag(diag))
    for b in basis:
        b.flags.writeable = False
    return tuple(basis)


@lru_cache(maxsize=16)
def _basis_unitary(dim: int) -> np.ndarray:
    """Unitary whose columns are the vectorized basis elements."""
    cols = [vec(b) for b in hermitian_basis(dim)]
    out = np.column_stack(cols)
    out.flags.writeable = False
    return out


def superop_to_transfer(superop: np.ndarray) -> np.ndarray:
    """Real transfer matrix R_ab = Tr[B_a Phi(B_b)] from a superoperator."""
    d = int(round(np.sqrt(superop.shape[0])))
    v = _basis_unitary(d)
    r = v.conj().T @ superop @ v
    return r.real


def transfer_to_superop(transfer: np.ndarray) -> np.ndarray:
    d = int(round(np.sqrt(transfer.shape[0])))
    v = _basis_unitary(d)
    return v @ transfer.astype(complex) @ v.conj().T


@dataclass(frozen=True)
class QuantumMap:
    """A linear map on operators with optional Kraus and Choi forms.

    At least one representation must be present.  Non-CP maps (such as
    intermediate maps of a non-divisible family) carry only a Choi
    matrix.
    """

    dim_in: int
    dim_out: int
    kraus_ops: Optional[tuple[np.ndarray, ...]] = None
    choi: Optional[np.ndarray] = None
    trace_preserving: bool = True
    tols: Tolerances = field(default=DEFAULT, repr=False, compare=False)

    def __post_init__(self):
        if self.kraus_ops is None and self.choi is None:
            raise ValidationError("a map needs a Kraus or a Choi representation")
        if self.kraus_ops is not None:
            ops = tuple(np.asarray(k, dtype=complex) for k in self.kraus_ops)
            for k in ops:
                if k.shape != (self.dim_out, self.dim_in):
                    raise DimensionMismatchError(
                        f"Kraus operator shape {k.shape} does not match "
                        f"({self.dim_out}, {self.dim_in})")
                k.flags.writeable = False
            object.__setattr__(self, "kraus_ops", ops)
            if self.trace_preserving:
                total = sum(k.conj().T @ k for k in ops)
                defect = np.max(np.abs(total - np.eye(self.dim_in)))
                if defect > self.tols.kraus_completeness:
                    raise ValidationError(
                        f"Kraus set not trace preserving: defect {defect:.3e}")
        if self.choi is not None:
            choi = np.asarray(self.choi, dtype=complex)
            choi = 0.5 * (choi + choi.conj().T)
            choi.flags.writeable = False
            object.__setattr__(self, "choi", choi)
        if self.kraus_ops is not None and self.choi is not None:
            rebuilt = kraus_to_choi(self.kraus_ops)
            defect = np.max(np.abs(rebuilt - self.choi))
            if defect > self.tols.representation_match:
                raise ValidationError(
                    f"Kraus and Choi representations disagree: defect {defect:.3e}")

    # ---- constructors -------------------------------------------------

    @classmethod
    def from_kraus(cls, kraus_ops: Sequence[np.ndarray], trace_preserving: bool = True,
                   tols: Tolerances = DEFAULT) -> "QuantumMap":
        first = np.asarray(kraus_ops[0])
        return cls(first.shape[1], first.shape[0],
                   kraus_ops=tuple(kraus_ops), trace_preserving=trace_preserving,
                   tols=tols)

    @classmethod
    def from_choi(cls, choi: np.ndarray, trace_preserving: bool = True,
                  tols: Tolerances = DEFAULT) -> "QuantumMap":
        d = int(round(np.sqrt(np.asarray(choi).shape[0])))
        return cls(d, d, choi=np.asarray(choi), trace_preserving=trace_preserving,
                   tols=tols)

    @classmethod
    def from_superop(cls, superop: np.ndarray, trace_preserving: bool = True,
                     tols: Tolerances = DEFAULT) -> "QuantumMap":
        return cls.from_choi(superop_to_choi(np.asarray(superop, dtype=complex)),
                             trace_preserving, tols)

    @classmethod
    def identity(cls, dim: int) -> "QuantumMap":
        return cls.from_kraus([np.eye(dim, dtype=complex)])

    @classmethod
    def unitary(cls, u: np.ndarray) -> "QuantumMap":
        return cls.from_kraus([np.asarray(u, dtype=complex)])

    # ---- representations ----------------------------------------------

    def superop(self) -> np.ndarray:
        if self.kraus_ops is not None:
            return kraus_to_superop(self.kraus_ops)
        return choi_to_superop(self.choi)

    def choi_matrix(self) -> np.ndarray:
        if self.choi is not None:
            return self.choi
        return kraus_to_choi(self.kraus_ops)

    def transfer_matrix(self) -> np.ndarray:
        if self.dim_in != self.dim_out:
            raise DimensionMismatchError("transfer matrix requires a square map")
        return superop_to_transfer(self.superop())

    def bloch_affine(self) -> tuple[np.ndarray, np.ndarray]:
        """Qubit Bloch-ball action r -> M r + v; returns (M, v)."""
        if self.dim_in != 2 or self.dim_out != 2:
            raise DimensionMismatchError("Bloch affine form requires a qubit map")
        r = self.transfer_matrix()
        return r[1:, 1:].copy(), r[1:, 0].copy()

    # ---- action --------------------------------------------------------

    def apply_matrix(self, operator: np.ndarray) -> np.ndarray:
        """Apply the map to an arbitrary operator (no state validation)."""
        op = np.asarray(operator, dtype=complex)
        if op.shape != (self.dim_in, self.dim_in):
            raise DimensionMismatchError(
                f"operator shape {op.shape} does not match map input dim {self.dim_in}")
        if self.kraus_ops is not None:
            return sum(k @ op @ k.conj().T for k in self.kraus_ops)
        out = unvec(self.superop() @ vec(op), (self.dim_out, self.dim_out))
        return out


def apply_map(m: QuantumMap, r: DensityMatrix) -> DensityMatrix:
    """Image of a state under a map; validates the output as a state."""
    return DensityMatrix(m.apply_matrix(r.matrix), r.tols)


def compose(m2: QuantumMap, m1: QuantumMap, tols: Tolerances = DEFAULT) -> QuantumMap:
    """The map m2 after m1 (Kraus concatenation when both sets exist)."""
    if m1.dim_out != m2.dim_in:
        raise DimensionMismatchError("maps not composable: inner dimensions differ")
    tp = m1.trace_preserving and m2.trace_preserving
    if m1.kraus_ops is not None and m2.kraus_ops is not None:
        ops = tuple(k2 @ k1 for k2 in m2.kraus_ops for k1 in m1.kraus_ops)
        return QuantumMap(m1.dim_in, m2.dim_out, kraus_ops=ops,
                          trace_preserving=tp, tols=tols)
    superop = m2.superop() @ m1.superop()
    return QuantumMap(m1.dim_in, m2.dim_out, choi=superop_to_choi(superop),
                      trace_preserving=tp, tols=tols)


def intermediate_map(phi_t: QuantumMap, phi_s: QuantumMap,
                     tols: Tolerances = DEFAULT) -> QuantumMap:
    """The two-parameter map Phi_t o Phi_s^{-1}.

    Inversion happens on the real transfer-matrix representation.  A
    condition number above ``tols.condition_cap`` raises
    :class:`NonInvertibleError` carrying the smallest singular value;
    that is the regime where divisibility stops being defined.
    The result is generally not completely positive and is stored via
    its Choi matrix.
    """
    if phi_t.dim_in != phi_s.dim_in or phi_t.dim_out != phi_s.dim_out:
        raise DimensionMismatchError("maps of different dimensions")
    r_t = phi_t.transfer_matrix()
    r_s = phi_s.transfer_matrix()
    singulars = np.linalg.svd(r_s, compute_uv=False)
    smallest = float(singulars[-1])
    if smallest == 0.0 or singulars[0] / smallest > tols.condition_cap:
        raise NonInvertibleError(
            f"map numerically singular: smallest singular value {smallest:.3e}",
            smallest_singular_value=smallest)
    r = r_t @ np.linalg.inv(r_s)
    superop = transfer_to_superop(r)
    return QuantumMap(phi_s.dim_in, phi_t.dim_out,
                      choi=superop_to_choi(superop),
                      trace_preserving=phi_t.trace_preserving and phi_s.trace_preserving,
                      tols=tols)


def choi_trace_norm(m: QuantumMap) -> float:
    """Trace norm of the normalized Choi state (1 for CP trace-preserving maps)."""
    return float(np.sum(np.abs(np.linalg.eigvalsh(m.choi_matrix()))))


def hermitian_defect_of_choi(m: QuantumMap) -> float:
    return hermiticity_defect(m.choi_matrix())
