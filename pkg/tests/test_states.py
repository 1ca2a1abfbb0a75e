"""State primitives: validation, metrics, Helstrom norm."""

import numpy as np
import pytest

from nmflow.core import (DensityMatrix, HelstromMatrix, SIGMA_X, SIGMA_Z,
                         antipodal_pair, helstrom_norm, kron_all, partial_trace,
                         states_orthogonal, trace_distance, trace_norm)
from nmflow.core.sampling import random_density_matrix, random_unitary
from nmflow.errors import DimensionMismatchError, ValidationError


class TestDensityMatrixValidation:
    def test_accepts_valid_state(self):
        rho = DensityMatrix(np.array([[0.7, 0.2], [0.2, 0.3]]))
        assert rho.dim == 2

    def test_rejects_non_hermitian(self):
        with pytest.raises(ValidationError, match="Hermitian"):
            DensityMatrix(np.array([[0.5, 0.3], [0.1, 0.5]]))

    def test_rejects_wrong_trace(self):
        with pytest.raises(ValidationError, match="trace"):
            DensityMatrix(np.array([[0.6, 0.0], [0.0, 0.6]]))

    def test_rejects_negative_eigenvalue(self):
        with pytest.raises(ValidationError, match="negative"):
            DensityMatrix(np.array([[1.2, 0.0], [0.0, -0.2]]))

    def test_bloch_round_trip(self):
        r = np.array([0.3, -0.5, 0.4])
        assert np.allclose(DensityMatrix.from_bloch(r).bloch_vector(), r)

    def test_rejects_long_bloch_vector(self):
        with pytest.raises(ValidationError):
            DensityMatrix.from_bloch([1.2, 0.0, 0.0])

    def test_population_and_coherence_accessors(self):
        rho = DensityMatrix(np.array([[0.4, 0.1 - 0.2j], [0.1 + 0.2j, 0.6]]))
        assert rho.excited_population() == pytest.approx(0.6)
        assert rho.coherence() == pytest.approx(0.1 + 0.2j)


class TestTraceDistance:
    def test_identical_states_give_zero(self):
        rho = random_density_matrix(3, 11)
        assert trace_distance(rho, rho) == 0.0

    def test_orthogonal_pure_states_give_one(self):
        assert trace_distance(DensityMatrix.basis_state(0),
                              DensityMatrix.basis_state(1)) == pytest.approx(1.0)

    def test_bloch_pair_point_six(self):
        # eigenvalue oracle: the difference is 1.2 * sigma_x / 2
        r1 = DensityMatrix.from_bloch([0.6, 0.0, 0.0])
        r2 = DensityMatrix.from_bloch([-0.6, 0.0, 0.0])
        assert trace_distance(r1, r2) == pytest.approx(0.6, abs=1e-14)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            trace_distance(DensityMatrix.maximally_mixed(2),
                           DensityMatrix.maximally_mixed(3))

    def test_unitary_invariance(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            r1 = random_density_matrix(3, rng)
            r2 = random_density_matrix(3, rng)
            u = random_unitary(3, rng)
            r1u = DensityMatrix(u @ r1.matrix @ u.conj().T)
            r2u = DensityMatrix(u @ r2.matrix @ u.conj().T)
            assert trace_distance(r1u, r2u) == pytest.approx(
                trace_distance(r1, r2), abs=1e-12)

    def test_orthogonality_predicate(self):
        assert states_orthogonal(DensityMatrix.basis_state(0),
                                 DensityMatrix.basis_state(1))
        assert not states_orthogonal(DensityMatrix.basis_state(0),
                                     DensityMatrix.maximally_mixed(2))


class TestHelstrom:
    def test_equal_states_equal_weights_give_zero(self):
        rho = random_density_matrix(2, 2)
        assert helstrom_norm(HelstromMatrix(rho, rho, 0.5, 0.5)) == pytest.approx(0.0)

    def test_orthogonal_pure_states_give_one(self):
        h = HelstromMatrix(DensityMatrix.basis_state(0),
                           DensityMatrix.basis_state(1), 0.5, 0.5)
        assert helstrom_norm(h) == pytest.approx(1.0)

    def test_biased_maximally_mixed(self):
        # Delta = 0.2 I / 2, trace norm 0.4 by direct eigenvalues
        mixed = DensityMatrix.maximally_mixed(2)
        h = HelstromMatrix(mixed, mixed, 0.7, 0.3)
        assert helstrom_norm(h) == pytest.approx(0.4, abs=1e-14)

    def test_weights_must_sum_to_one(self):
        mixed = DensityMatrix.maximally_mixed(2)
        with pytest.raises(ValidationError):
            HelstromMatrix(mixed, mixed, 0.7, 0.4)

    def test_unbiased_equals_trace_distance(self):
        rng = np.random.default_rng(8)
        for _ in range(30):
            r1 = random_density_matrix(2, rng)
            r2 = random_density_matrix(2, rng)
            h = HelstromMatrix(r1, r2, 0.5, 0.5)
            assert helstrom_norm(h) == pytest.approx(
                trace_distance(r1, r2), abs=1e-12)


def test_trace_norm_hermitian_vs_svd_paths():
    rng = np.random.default_rng(3)
    herm = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    herm = herm + herm.conj().T
    svd_value = float(np.sum(np.linalg.svd(herm, compute_uv=False)))
    assert trace_norm(herm) == pytest.approx(svd_value, abs=1e-10)
    non_herm = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    assert trace_norm(non_herm) == pytest.approx(
        float(np.sum(np.linalg.svd(non_herm, compute_uv=False))), abs=1e-12)


def test_partial_trace_of_product_recovers_factors():
    rng = np.random.default_rng(4)
    a = random_density_matrix(2, rng)
    b = random_density_matrix(3, rng)
    joint = kron_all(a.matrix, b.matrix)
    assert np.allclose(partial_trace(joint, (2, 3), keep=0), a.matrix)
    assert np.allclose(partial_trace(joint, (2, 3), keep=1), b.matrix)


def test_antipodal_pair_is_orthogonal():
    plus, minus = antipodal_pair([1.0, 1.0, 0.0])
    assert trace_distance(plus, minus) == pytest.approx(1.0, abs=1e-12)
