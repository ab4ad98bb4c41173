import numpy as np
import pytest

from rbashift.kernels import KernelSpec, gram, joint_kernel, kernel_eval

LINEAR = KernelSpec("linear")
POLY2 = KernelSpec("polynomial", degree=2)
GAUSS = KernelSpec("gaussian", bandwidth=0.5)


class TestKernelEval:
    def test_linear_dot(self):
        assert kernel_eval(LINEAR, [1.0, 2.0], [3.0, 4.0]) == 11.0

    def test_polynomial_hand_value(self):
        # (11 + 1)^2 with the default offset 1
        assert kernel_eval(POLY2, [1.0, 2.0], [3.0, 4.0]) == 144.0

    def test_polynomial_offset_zero(self):
        spec = KernelSpec("polynomial", degree=3, offset=0.0)
        assert kernel_eval(spec, [2.0], [3.0]) == 216.0

    def test_gaussian_same_point_is_one(self, rng):
        x = rng.normal(size=5)
        assert kernel_eval(GAUSS, x, x) == 1.0

    def test_gaussian_known_distance(self):
        # distance^2 = 2 at bandwidth 1 -> exp(-1)
        spec = KernelSpec("gaussian", bandwidth=1.0)
        value = kernel_eval(spec, [0.0, 0.0], [1.0, 1.0])
        assert value == pytest.approx(np.exp(-1.0), rel=1e-12)

    def test_symmetry(self, rng):
        for spec in (LINEAR, POLY2, GAUSS):
            x, x2 = rng.normal(size=4), rng.normal(size=4)
            assert kernel_eval(spec, x, x2) == kernel_eval(spec, x2, x)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            kernel_eval(LINEAR, [1.0], [1.0, 2.0])


class TestGram:
    def test_linear_1x1(self):
        assert gram(LINEAR, np.array([[2.0]]), np.array([[5.0]])).tolist() == [[10.0]]

    def test_matches_pairwise_eval(self, rng):
        X = rng.normal(size=(7, 3))
        X2 = rng.normal(size=(5, 3))
        for spec in (LINEAR, POLY2, GAUSS):
            G = gram(spec, X, X2)
            for i in range(7):
                for j in range(5):
                    assert G[i, j] == pytest.approx(
                        kernel_eval(spec, X[i], X2[j]), rel=1e-12, abs=1e-12
                    )

    def test_linear_gram_is_xxt(self, rng):
        X = rng.normal(size=(6, 4))
        np.testing.assert_array_equal(gram(LINEAR, X, X), X @ X.T)

    def test_gaussian_diagonal_ones_and_range(self, rng):
        X = rng.normal(size=(15, 3))
        G = gram(GAUSS, X, X)
        np.testing.assert_allclose(np.diag(G), 1.0, atol=1e-12)
        assert G.min() > 0.0
        assert G.max() <= 1.0

    def test_symmetry_and_psd(self, rng):
        X = rng.normal(size=(25, 4))
        for spec in (LINEAR, POLY2, GAUSS):
            G = gram(spec, X, X)
            assert np.max(np.abs(G - G.T)) <= 1e-12 * max(1.0, np.abs(G).max())
            assert np.linalg.eigvalsh(G).min() >= -1e-8

    def test_cauchy_schwarz(self, rng):
        X = rng.normal(size=(12, 3))
        for spec in (LINEAR, POLY2, GAUSS):
            G = gram(spec, X, X)
            for i in range(12):
                for j in range(12):
                    assert G[i, j] ** 2 <= G[i, i] * G[j, j] + 1e-9

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            gram(LINEAR, np.ones((2, 3)), np.ones((2, 4)))


class TestJointKernel:
    def test_label_delta(self, rng):
        x, x2 = rng.normal(size=3), rng.normal(size=3)
        assert joint_kernel(LINEAR, x, 0, x2, 1) == 0.0
        assert joint_kernel(LINEAR, x, 2, x2, 2) == pytest.approx(float(x @ x2))

    def test_gaussian_same_pair(self, rng):
        x = rng.normal(size=3)
        assert joint_kernel(GAUSS, x, 1, x, 1) == 1.0

    def test_negative_label_rejected(self):
        with pytest.raises(ValueError):
            joint_kernel(LINEAR, [1.0], -1, [1.0], 0)


class TestKernelSpec:
    def test_parameter_presence_enforced(self):
        with pytest.raises(ValueError):
            KernelSpec("linear", degree=2)
        with pytest.raises(ValueError):
            KernelSpec("polynomial")
        with pytest.raises(ValueError):
            KernelSpec("polynomial", degree=0)
        with pytest.raises(ValueError):
            KernelSpec("gaussian")
        with pytest.raises(ValueError):
            KernelSpec("gaussian", bandwidth=0.0)
        with pytest.raises(ValueError):
            KernelSpec("gaussian", bandwidth=1.0, degree=2)
        with pytest.raises(ValueError):
            KernelSpec("sigmoid")

    def test_polynomial_default_offset(self):
        assert KernelSpec("polynomial", degree=2).offset == 1.0

    def test_dict_round_trip(self):
        for spec in (LINEAR, POLY2, GAUSS, KernelSpec("polynomial", degree=4, offset=0.5)):
            assert KernelSpec.from_dict(spec.to_dict()) == spec
