"""Core 3x3 kernels checked against numpy.linalg and self-residuals."""

import numpy as np
import pytest

from isotropykit.lin3 import (
    conjugate,
    eig_sym,
    haar_rotation,
    rotation_matrix,
    skew_matrix,
    svd3,
    sym_matrix,
    tensor_system,
    vec3,
)


def random_sym(rng, scale=1.0):
    m = rng.standard_normal((3, 3)) * scale
    return 0.5 * (m + m.T)


class TestConstructors:
    def test_vec3_rejects_nan(self):
        with pytest.raises(ValueError):
            vec3([1.0, np.nan, 0.0])

    def test_sym_matrix_rejects_asymmetric(self):
        with pytest.raises(ValueError):
            sym_matrix([[0, 1, 0], [0, 0, 0], [0, 0, 0]])

    def test_skew_matrix_exact(self):
        w = skew_matrix([[0, 2, -1], [-2, 0, 3], [1, -3, 0]])
        assert np.array_equal(w, -w.T)
        assert np.array_equal(np.diag(w), np.zeros(3))

    def test_rotation_matrix_rejects_reflection(self):
        r = np.diag([1.0, 1.0, -1.0])
        with pytest.raises(ValueError):
            rotation_matrix(r)


class TestEigSym:
    def test_identity(self):
        lams, v, groups = eig_sym(np.eye(3))
        np.testing.assert_allclose(lams, [1.0, 1.0, 1.0], atol=1e-14)
        assert groups == ((0, 1, 2),)

    def test_diagonal(self):
        lams, v, groups = eig_sym(np.diag([3.0, 2.0, 1.0]))
        np.testing.assert_allclose(lams, [3.0, 2.0, 1.0], atol=1e-14)
        # coordinate axes up to the sign convention (largest component positive)
        np.testing.assert_allclose(np.abs(v), np.eye(3), atol=1e-14)
        assert groups == ((0,), (1,), (2,))

    def test_reconstruction_random(self):
        rng = np.random.default_rng(7)
        for _ in range(200):
            a = random_sym(rng, scale=rng.uniform(0.1, 10.0))
            lams, v, _ = eig_sym(a)
            rebuilt = sum(lams[i] * np.outer(v[i], v[i]) for i in range(3))
            assert np.linalg.norm(a - rebuilt) <= 1e-12 * (1.0 + np.linalg.norm(a))

    def test_orthonormal_and_right_handed(self):
        rng = np.random.default_rng(3)
        for _ in range(100):
            _, v, _ = eig_sym(random_sym(rng))
            np.testing.assert_allclose(v @ v.T, np.eye(3), atol=1e-12)
            np.testing.assert_allclose(np.cross(v[0], v[1]), v[2], atol=1e-12)

    def test_values_match_numpy(self):
        rng = np.random.default_rng(11)
        for _ in range(100):
            a = random_sym(rng)
            lams, _, _ = eig_sym(a)
            ref = np.linalg.eigvalsh(a)[::-1]
            np.testing.assert_allclose(lams, ref, atol=1e-12)

    def test_sorted_descending(self):
        rng = np.random.default_rng(5)
        for _ in range(50):
            lams, _, _ = eig_sym(random_sym(rng))
            assert lams[0] >= lams[1] >= lams[2]

    def test_near_degenerate_pair(self):
        # tiny gap: reconstruction must still be machine accurate
        rng = np.random.default_rng(2)
        q = haar_rotation(rng)
        a = q @ np.diag([2.0, 2.0 + 1e-13, -1.0]) @ q.T
        a = 0.5 * (a + a.T)
        lams, v, groups = eig_sym(a, tol_rel=1e-8)
        rebuilt = sum(lams[i] * np.outer(v[i], v[i]) for i in range(3))
        assert np.linalg.norm(a - rebuilt) <= 1e-12 * (1.0 + np.linalg.norm(a))
        assert groups == ((0, 1), (2,))

    def test_spectrum_invariant_under_rotation(self):
        rng = np.random.default_rng(17)
        a = random_sym(rng)
        lams, _, _ = eig_sym(a)
        for _ in range(100):
            q = haar_rotation(rng)
            b = 0.5 * ((q @ a @ q.T) + (q @ a @ q.T).T)
            lams_rot, _, _ = eig_sym(b)
            np.testing.assert_allclose(lams_rot, lams, atol=1e-10)

    def test_rejects_nonfinite(self):
        a = np.full((3, 3), np.inf)
        with pytest.raises(ValueError):
            eig_sym(a)


class TestSvd3:
    def test_identity(self):
        sv, v, u = svd3(np.eye(3))
        np.testing.assert_allclose(sv, [1.0, 1.0, 1.0], atol=1e-14)

    def test_rank_deficient_diagonal(self):
        sv, v, u = svd3(np.diag([2.0, 1.0, 0.0]))
        np.testing.assert_allclose(sv, [2.0, 1.0, 0.0], atol=1e-14)

    def test_reconstruction_random(self):
        rng = np.random.default_rng(23)
        for _ in range(200):
            f = rng.standard_normal((3, 3)) * rng.uniform(0.1, 5.0)
            sv, v, u = svd3(f)
            rebuilt = sum(sv[i] * np.outer(v[i], u[i]) for i in range(3))
            assert np.linalg.norm(f - rebuilt) <= 1e-12 * (1.0 + np.linalg.norm(f))
            assert sv[0] >= sv[1] >= sv[2] >= 0.0
            np.testing.assert_allclose(v @ v.T, np.eye(3), atol=1e-12)
            np.testing.assert_allclose(u @ u.T, np.eye(3), atol=1e-12)

    def test_values_match_numpy(self):
        rng = np.random.default_rng(29)
        for _ in range(100):
            f = rng.standard_normal((3, 3))
            sv, _, _ = svd3(f)
            np.testing.assert_allclose(sv, np.linalg.svd(f, compute_uv=False), atol=1e-12)

    def test_negative_determinant(self):
        rng = np.random.default_rng(31)
        f = rng.standard_normal((3, 3))
        if np.linalg.det(f) > 0:
            f[0] = -f[0]
        sv, v, u = svd3(f)
        rebuilt = sum(sv[i] * np.outer(v[i], u[i]) for i in range(3))
        assert np.linalg.norm(f - rebuilt) <= 1e-12 * (1.0 + np.linalg.norm(f))
        assert all(s >= 0.0 for s in sv)

    def test_singular_values_rotation_invariant(self):
        rng = np.random.default_rng(37)
        f = rng.standard_normal((3, 3))
        sv, _, _ = svd3(f)
        for _ in range(50):
            q1, q2 = haar_rotation(rng), haar_rotation(rng)
            sv_rot, _, _ = svd3(q1 @ f @ q2.T)
            np.testing.assert_allclose(sv_rot, sv, atol=1e-10)

    def test_zero_matrix(self):
        sv, v, u = svd3(np.zeros((3, 3)))
        np.testing.assert_allclose(sv, np.zeros(3), atol=0)
        np.testing.assert_allclose(v @ v.T, np.eye(3), atol=1e-14)
        np.testing.assert_allclose(u @ u.T, np.eye(3), atol=1e-14)


class TestHaarRotation:
    def test_is_rotation(self):
        rng = np.random.default_rng(41)
        for _ in range(200):
            q = haar_rotation(rng)
            assert np.linalg.norm(q @ q.T - np.eye(3)) <= 1e-12
            assert abs(np.linalg.det(q) - 1.0) <= 1e-12

    def test_deterministic_given_seed(self):
        q1 = haar_rotation(np.random.default_rng(99))
        q2 = haar_rotation(np.random.default_rng(99))
        assert np.array_equal(q1, q2)

    def test_mean_near_zero(self):
        # Haar mean of Q is the zero matrix
        rng = np.random.default_rng(43)
        acc = np.zeros((3, 3))
        n = 100_000
        for _ in range(n):
            acc += haar_rotation(rng)
        assert np.linalg.norm(acc / n) <= 0.02


class TestConjugate:
    def test_identity_rotation(self):
        rng = np.random.default_rng(47)
        sys0 = tensor_system(
            sym=[random_sym(rng)],
            nonsym=[rng.standard_normal((3, 3))],
            vecs=[rng.standard_normal(3)],
        )
        sys1 = conjugate(np.eye(3), sys0)
        np.testing.assert_allclose(sys1.sym[0], sys0.sym[0], atol=1e-15)
        np.testing.assert_allclose(sys1.nonsym[0], sys0.nonsym[0], atol=1e-15)
        np.testing.assert_allclose(sys1.vecs[0], sys0.vecs[0], atol=1e-15)

    def test_half_turn_about_z(self):
        q = np.diag([-1.0, -1.0, 1.0])
        sys0 = tensor_system(vecs=[[1.0, 0.0, 0.0]])
        sys1 = conjugate(q, sys0)
        np.testing.assert_allclose(sys1.vecs[0], [-1.0, 0.0, 0.0], atol=0)

    def test_preserves_symmetry_class_exactly(self):
        rng = np.random.default_rng(53)
        w = rng.standard_normal((3, 3))
        sys0 = tensor_system(sym=[random_sym(rng)], nonsym=[0.5 * (w - w.T)], skew=[True])
        sys1 = conjugate(haar_rotation(rng), sys0)
        assert np.array_equal(sys1.sym[0], sys1.sym[0].T)
        assert np.array_equal(sys1.nonsym[0], -sys1.nonsym[0].T)

    def test_spectrum_preserved(self):
        rng = np.random.default_rng(59)
        a = random_sym(rng)
        sys0 = tensor_system(sym=[a])
        lams, _, _ = eig_sym(a)
        for _ in range(100):
            sys1 = conjugate(haar_rotation(rng), sys0)
            lams_rot, _, _ = eig_sym(sys1.sym[0])
            np.testing.assert_allclose(lams_rot, lams, atol=1e-10)


class TestTensorSystem:
    def test_requires_argument(self):
        with pytest.raises(ValueError):
            tensor_system()

    def test_unit_flag_renormalizes(self):
        sys0 = tensor_system(vecs=[[1.0 + 5e-10, 0.0, 0.0]], unit=[True])
        assert np.linalg.norm(sys0.vecs[0]) == 1.0

    def test_unit_flag_rejects_far_from_unit(self):
        with pytest.raises(ValueError):
            tensor_system(vecs=[[2.0, 0.0, 0.0]], unit=[True])

    def test_arrays_read_only(self):
        sys0 = tensor_system(sym=[np.eye(3)])
        with pytest.raises(ValueError):
            sys0.sym[0][0, 0] = 5.0
