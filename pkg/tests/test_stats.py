import numpy as np
import pytest
from scipy import stats as sps

from rbashift.stats import paired_t_test, t_cdf


class TestTCdf:
    def test_matches_scipy_within_1e6(self):
        worst = 0.0
        for df in (1, 2, 3, 5, 10, 19, 30, 100):
            for t in (-8.0, -2.5, -1.0, -0.3, 0.0, 0.4, 1.0, 2.2, 4.0, 9.0):
                ours = t_cdf(t, df)
                ref = float(sps.t.cdf(t, df))
                worst = max(worst, abs(ours - ref))
        assert worst <= 1e-6

    def test_symmetry(self):
        for df in (2, 7, 19):
            for t in (0.5, 1.7, 3.0):
                assert t_cdf(-t, df) == pytest.approx(1.0 - t_cdf(t, df), abs=1e-12)

    def test_median_is_half(self):
        assert t_cdf(0.0, 5) == pytest.approx(0.5, abs=1e-12)

    def test_df_validation(self):
        with pytest.raises(ValueError):
            t_cdf(1.0, 0)


class TestPairedTTest:
    def test_matches_scipy(self, rng):
        for _ in range(10):
            a = rng.normal(size=12)
            b = a + rng.normal(scale=0.5, size=12) + 0.2
            t, p = paired_t_test(a, b)
            ref = sps.ttest_rel(a, b)
            assert t == pytest.approx(float(ref.statistic), abs=1e-9)
            assert p == pytest.approx(float(ref.pvalue), abs=1e-6)

    def test_degenerate_equal_vectors(self):
        a = np.array([1.0, 2.0, 3.0])
        t, p = paired_t_test(a, a.copy())
        assert t == 0.0
        assert p == 1.0

    def test_degenerate_constant_shift(self):
        a = np.array([1.0, 2.0, 3.0])
        _, p = paired_t_test(a, a + 1.0)
        assert p == 0.0

    def test_errors(self):
        with pytest.raises(ValueError):
            paired_t_test([1.0], [2.0])
        with pytest.raises(ValueError):
            paired_t_test([1.0, 2.0], [1.0, 2.0, 3.0])
