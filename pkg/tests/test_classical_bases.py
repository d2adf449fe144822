"""Classical basis enumeration: counts, values, isotropy/equivariance."""

import numpy as np
import pytest

from isotropykit.lin3 import conjugate, haar_rotation, tensor_system
from isotropykit.classical_bases import (
    boehler_scalars,
    smith_sym_tensors,
    smith_vectors,
)


def random_system(rng, n_sym, n_skew, n_vec):
    sym = [0.5 * (m + m.T) for m in rng.standard_normal((n_sym, 3, 3))]
    skw = [0.5 * (m - m.T) for m in rng.standard_normal((n_skew, 3, 3))]
    vecs = list(rng.standard_normal((n_vec, 3)))
    return tensor_system(sym=sym, nonsym=skw, skew=[True] * n_skew, vecs=vecs)


class TestScalarEnumeration:
    def test_one_tensor_one_vector(self):
        basis = boehler_scalars(1, 0, 1)
        assert basis.labels() == (
            "a1.a1", "tr(A1)", "tr(A1^2)", "tr(A1^3)", "a1.A1.a1", "a1.A1^2.a1",
        )

    def test_diagonal_traces(self):
        basis = boehler_scalars(1, 0, 0)
        sys0 = tensor_system(sym=[np.diag([2.0, 1.0, 0.0])])
        np.testing.assert_allclose(basis.evaluate(sys0), [3.0, 5.0, 9.0], atol=0)

    def test_two_tensor_count_includes_cross_trace(self):
        basis = boehler_scalars(2, 0, 0)
        assert len(basis) == 10
        assert "tr(A1*A2)" in basis.labels()

    def test_two_tensor_two_vector_count(self):
        # enumeration of the implemented list; the literature quotes 37 for
        # this configuration without itemizing it
        assert len(boehler_scalars(2, 0, 2)) == 28

    def test_skew_block_count_single(self):
        # one symmetric + one skew tensor: traces of A plus the mixed items
        basis = boehler_scalars(1, 1, 0)
        assert basis.labels() == (
            "tr(A1)", "tr(A1^2)", "tr(A1^3)", "tr(W1^2)",
            "tr(A1*W1^2)", "tr(A1^2*W1^2)", "tr(A1^2*W1^2*A1*W1)",
        )

    def test_labels_unique_large_config(self):
        basis = boehler_scalars(3, 3, 3)
        assert len(set(basis.labels())) == len(basis)

    def test_isotropy(self):
        rng = np.random.default_rng(127)
        basis = boehler_scalars(2, 1, 2)
        sys0 = random_system(rng, 2, 1, 2)
        base = basis.evaluate(sys0)
        for _ in range(50):
            rot = basis.evaluate(conjugate(haar_rotation(rng), sys0))
            assert np.max(np.abs(rot - base) / (1.0 + np.abs(base))) <= 1e-9

    def test_shape_mismatch_rejected(self):
        basis = boehler_scalars(1, 0, 0)
        with pytest.raises(ValueError):
            basis.evaluate(tensor_system(sym=[np.eye(3)], vecs=[[1.0, 0, 0]]))


class TestVectorEnumeration:
    def test_one_tensor_one_vector(self):
        basis = smith_vectors(1, 0, 1)
        assert basis.labels() == ("a1", "A1.a1", "A1^2.a1")

    def test_matrix_action(self):
        basis = smith_vectors(1, 0, 1)
        sys0 = tensor_system(sym=[np.diag([2.0, 1.0, 0.0])], vecs=[[1.0, 1.0, 1.0]])
        vals = basis.evaluate(sys0)
        np.testing.assert_allclose(vals[1], [2.0, 1.0, 0.0], atol=0)

    def test_two_tensor_two_vector_count(self):
        assert len(smith_vectors(2, 0, 2)) == 12

    def test_equivariance(self):
        rng = np.random.default_rng(131)
        basis = smith_vectors(2, 1, 2)
        sys0 = random_system(rng, 2, 1, 2)
        base = basis.evaluate(sys0)
        for _ in range(50):
            q = haar_rotation(rng)
            rot = basis.evaluate(conjugate(q, sys0))
            for g0, g1 in zip(base, rot):
                assert np.linalg.norm(g1 - q @ g0) <= 1e-9 * (1.0 + np.linalg.norm(g0))


class TestTensorEnumeration:
    def test_single_tensor_generators(self):
        basis = smith_sym_tensors(1, 0, 0)
        assert basis.labels() == ("I", "A1", "A1^2")

    def test_two_tensor_two_vector_count(self):
        # enumeration of the implemented list; the literature quotes 36
        assert len(smith_sym_tensors(2, 0, 2)) == 21

    def test_every_generator_exactly_symmetric(self):
        rng = np.random.default_rng(137)
        basis = smith_sym_tensors(2, 1, 2)
        sys0 = random_system(rng, 2, 1, 2)
        for t in basis.evaluate(sys0):
            assert np.array_equal(t, t.T)

    def test_equivariance(self):
        rng = np.random.default_rng(139)
        basis = smith_sym_tensors(1, 1, 1)
        sys0 = random_system(rng, 1, 1, 1)
        base = basis.evaluate(sys0)
        for _ in range(50):
            q = haar_rotation(rng)
            rot = basis.evaluate(conjugate(q, sys0))
            for g0, g1 in zip(base, rot):
                scale = 1.0 + np.linalg.norm(g0)
                assert np.linalg.norm(g1 - q @ g0 @ q.T) <= 1e-9 * scale
