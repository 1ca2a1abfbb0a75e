"""Map representations, application, composition and intermediate maps."""

import numpy as np
import pytest

from nmflow.core import (DensityMatrix, QuantumMap, apply_map, choi_to_kraus,
                         compose, intermediate_map, kraus_to_choi, superop_to_choi,
                         superop_to_transfer, trace_distance, transfer_to_superop,
                         unvec, vec)
from nmflow.core.sampling import random_cptp_map, random_density_matrix
from nmflow.errors import NonInvertibleError, ValidationError

SZ = np.diag([1.0, -1.0]).astype(complex)


def dephasing_map(g: float) -> QuantumMap:
    return QuantumMap.from_kraus([np.sqrt((1 + g) / 2) * np.eye(2),
                                  np.sqrt((1 - g) / 2) * SZ])


class TestApplyMap:
    def test_identity_kraus(self):
        rho = random_density_matrix(2, 0)
        out = apply_map(QuantumMap.identity(2), rho)
        assert np.allclose(out.matrix, rho.matrix)

    def test_dephasing_p_one_is_identity(self):
        rho = random_density_matrix(2, 1)
        out = apply_map(dephasing_map(1.0), rho)
        assert np.allclose(out.matrix, rho.matrix, atol=1e-14)

    def test_full_dephasing_kills_coherence(self):
        rho = DensityMatrix(np.array([[0.7, 0.25j], [-0.25j, 0.3]]))
        out = apply_map(dephasing_map(0.0), rho)
        assert out.matrix[1, 0] == pytest.approx(0.0, abs=1e-14)
        assert out.matrix[0, 0] == pytest.approx(0.7)
        assert out.matrix[1, 1] == pytest.approx(0.3)

    def test_trace_preserved(self):
        rng = np.random.default_rng(7)
        for _ in range(10):
            m = random_cptp_map(3, 4, rng)
            rho = random_density_matrix(3, rng)
            assert np.trace(m.apply_matrix(rho.matrix)).real == pytest.approx(
                1.0, abs=1e-10)

    def test_linearity_over_mixtures(self):
        rng = np.random.default_rng(9)
        m = random_cptp_map(2, 3, rng)
        r1 = random_density_matrix(2, rng)
        r2 = random_density_matrix(2, rng)
        mix = DensityMatrix(0.3 * r1.matrix + 0.7 * r2.matrix)
        direct = m.apply_matrix(mix.matrix)
        split = 0.3 * m.apply_matrix(r1.matrix) + 0.7 * m.apply_matrix(r2.matrix)
        assert np.max(np.abs(direct - split)) < 1e-10

    def test_requires_some_representation(self):
        with pytest.raises(ValidationError):
            QuantumMap(2, 2)


class TestRepresentations:
    def test_vec_unvec_round_trip(self):
        rng = np.random.default_rng(2)
        mat = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        assert np.allclose(unvec(vec(mat)), mat)

    def test_kraus_choi_round_trip(self):
        rng = np.random.default_rng(21)
        for dim, n_k in ((2, 3), (3, 2)):
            m = random_cptp_map(dim, n_k, rng)
            choi = m.choi_matrix()
            rebuilt = kraus_to_choi(choi_to_kraus(choi))
            assert np.max(np.abs(rebuilt - choi)) < 1e-10

    def test_apply_via_kraus_equals_apply_via_choi(self):
        rng = np.random.default_rng(23)
        for _ in range(10):
            m = random_cptp_map(2, 4, rng)
            rho = random_density_matrix(2, rng)
            via_choi = QuantumMap.from_choi(m.choi_matrix()).apply_matrix(rho.matrix)
            assert np.max(np.abs(m.apply_matrix(rho.matrix) - via_choi)) < 1e-10

    def test_superop_choi_bijection(self):
        rng = np.random.default_rng(5)
        sup = rng.normal(size=(9, 9)) + 1j * rng.normal(size=(9, 9))
        assert np.allclose(superop_to_choi(np.asarray(
            transfer_to_superop(superop_to_transfer(sup + sup.conj().T)))).shape,
            (9, 9))
        sup2 = np.asarray(sup)
        from nmflow.core.maps import choi_to_superop
        assert np.allclose(choi_to_superop(superop_to_choi(sup2)), sup2)

    def test_transfer_is_real_for_hermiticity_preserving_maps(self):
        m = random_cptp_map(2, 3, 4)
        r = superop_to_transfer(m.superop())
        assert r.dtype == np.float64
        # trace preservation makes the first row (1, 0, 0, 0)
        assert np.allclose(r[0], [1.0, 0.0, 0.0, 0.0], atol=1e-12)

    def test_representation_mismatch_rejected(self):
        m = dephasing_map(0.5)
        wrong = np.eye(4) / 2
        with pytest.raises(ValidationError, match="disagree"):
            QuantumMap(2, 2, kraus_ops=m.kraus_ops, choi=wrong)

    def test_incomplete_kraus_set_rejected(self):
        with pytest.raises(ValidationError, match="trace preserving"):
            QuantumMap.from_kraus([0.9 * np.eye(2)])


class TestComposeAndIntermediate:
    def test_compose_concatenates_kraus(self):
        m1, m2 = dephasing_map(0.8), dephasing_map(0.5)
        composed = compose(m2, m1)
        assert len(composed.kraus_ops) == 4
        rho = random_density_matrix(2, 3)
        assert np.allclose(composed.apply_matrix(rho.matrix),
                           m2.apply_matrix(m1.apply_matrix(rho.matrix)))

    def test_intermediate_of_identity_is_original(self):
        m = dephasing_map(0.6)
        inter = intermediate_map(m, QuantumMap.identity(2))
        rho = random_density_matrix(2, 6)
        assert np.max(np.abs(inter.apply_matrix(rho.matrix)
                             - m.apply_matrix(rho.matrix))) < 1e-12

    def test_semigroup_intermediate_is_shifted_element(self):
        # dephasing semigroup G = e^{-kt}: Phi_{t,s} = e^{L(t-s)}
        kappa, s, t = 0.8, 0.4, 1.1
        phi = lambda u: dephasing_map(np.exp(-kappa * u))
        inter = intermediate_map(phi(t), phi(s))
        expected = phi(t - s)
        assert np.max(np.abs(inter.choi_matrix() - expected.choi_matrix())) < 1e-12
        from nmflow.core import is_completely_positive
        assert is_completely_positive(inter).is_cp

    def test_dephasing_intermediate_scales_coherence(self):
        inter = intermediate_map(dephasing_map(0.8), dephasing_map(0.5))
        coh = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
        out = inter.apply_matrix(coh)
        assert out[0, 1] == pytest.approx(1.6, abs=1e-12)
        from nmflow.core import is_completely_positive
        assert not is_completely_positive(inter).is_cp

    def test_divisibility_identity(self):
        # Phi_{t,0} = Phi_{t,s} Phi_{s,0} for an invertible family
        phi = lambda u: dephasing_map(np.exp(-0.5 * u) * np.cos(0.4 * u))
        s, t = 0.7, 1.9
        inter = intermediate_map(phi(t), phi(s))
        recomposed = compose(inter, phi(s))
        assert np.max(np.abs(recomposed.choi_matrix()
                             - phi(t).choi_matrix())) < 1e-8

    def test_singular_map_raises_with_singular_value(self):
        with pytest.raises(NonInvertibleError) as err:
            intermediate_map(dephasing_map(0.5), dephasing_map(0.0))
        assert err.value.smallest_singular_value == pytest.approx(0.0, abs=1e-300)
