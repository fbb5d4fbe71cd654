import math

import numpy as np
import pytest
from scipy import stats as sp_stats

from asws import (
    DegenerateSample,
    InvalidDegreesOfFreedom,
    InvalidSampleSize,
    shapiro_wilk,
    student_t_tail,
    t_test_one_sample,
)

# 19-point pseudo-random normal sample, generated once with
# numpy.random.default_rng(20210515).normal(0, 1, 19) and frozen here
# together with the reference implementation's (W, p).
GOLDEN_SAMPLE_19 = [
    -0.548188461934174, 1.0136180340343677, -0.6207347223016737,
    -0.6006352453917726, -1.5769047414303505, 0.4718067610022287,
    -2.502527550964988, 0.4165736079811092, -0.22040012318188285,
    0.9142862343478048, 1.0390826503044674, 1.0422042471254318,
    1.2627509585106258, -0.1590758974038598, 0.10990037093102378,
    -1.585896425603451, -1.4687204459057621, -0.4332836562642684,
    0.2935728358539161,
]
GOLDEN_W = 0.9407768917616681
GOLDEN_P = 0.2723175813425908


class TestShapiroWilk:
    def test_zero_variance_is_degenerate(self):
        with pytest.raises(DegenerateSample):
            shapiro_wilk([1.0, 1.0, 1.0])

    def test_below_minimum_size(self):
        with pytest.raises(InvalidSampleSize):
            shapiro_wilk([0.4, 0.9])

    def test_above_maximum_size(self):
        with pytest.raises(InvalidSampleSize):
            shapiro_wilk(np.zeros(5001) + np.arange(5001))

    def test_golden_sample(self):
        w, p = shapiro_wilk(GOLDEN_SAMPLE_19)
        assert w == pytest.approx(GOLDEN_W, abs=1e-6)
        assert p == pytest.approx(GOLDEN_P, abs=1e-4)

    def test_matches_reference_across_sizes(self):
        rng = np.random.default_rng(17)
        for trial in range(200):
            n = int(rng.integers(3, 51))
            x = rng.normal(size=n) if trial % 2 else rng.uniform(size=n)
            w_ref, p_ref = sp_stats.shapiro(x)
            mine = shapiro_wilk(x)
            assert mine.statistic == pytest.approx(w_ref, abs=1e-6)
            assert mine.p_value == pytest.approx(p_ref, abs=1e-4)

    def test_affine_invariance(self):
        rng = np.random.default_rng(8)
        x = rng.normal(size=25)
        base = shapiro_wilk(x)
        for a, b in [(2.0, 0.0), (0.001, 5.0), (731.0, -3.25)]:
            res = shapiro_wilk(a * x + b)
            assert res.statistic == pytest.approx(base.statistic, abs=1e-10)
            assert res.p_value == pytest.approx(base.p_value, abs=1e-10)

    def test_w_bounds(self):
        rng = np.random.default_rng(9)
        for _ in range(50):
            w, p = shapiro_wilk(rng.normal(size=int(rng.integers(3, 120))))
            assert 0.0 < w <= 1.0
            assert 0.0 <= p <= 1.0

    def test_ties_are_tolerated(self):
        w, p = shapiro_wilk([0.5, 0.5, 0.5, 0.5, 0.9, 0.1, 0.5])
        assert 0.0 < w <= 1.0

    def test_power_against_uniform(self):
        # strong rejection rate on clearly non-normal data
        rng = np.random.default_rng(10)
        trials = 10_000
        rejections = sum(
            shapiro_wilk(rng.uniform(size=50)).p_value < 0.05 for _ in range(trials)
        )
        assert rejections / trials >= 0.30


class TestTTestOneSample:
    def test_mean_equals_center(self):
        t, p = t_test_one_sample([-1.0, 0.0, 1.0], 0.0)
        assert t == 0.0
        assert p == 1.0

    def test_zero_variance(self):
        with pytest.raises(DegenerateSample):
            t_test_one_sample([2.0, 2.0, 2.0], 0.0)

    def test_too_small(self):
        with pytest.raises(InvalidSampleSize):
            t_test_one_sample([1.0], 0.0)

    def test_derived_example(self):
        t, p = t_test_one_sample([0.1, 0.2, 0.3, 0.4], 0.0)
        assert t == pytest.approx(3.872983346207417, abs=1e-9)
        assert p == pytest.approx(0.03046629166217096, abs=1e-6)

    def test_matches_reference(self):
        rng = np.random.default_rng(18)
        for _ in range(200):
            n = int(rng.integers(2, 60))
            x = rng.normal(loc=rng.normal(), scale=rng.uniform(0.1, 3.0), size=n)
            center = float(rng.normal())
            t_ref, p_ref = sp_stats.ttest_1samp(x, center)
            mine = t_test_one_sample(x, center)
            assert mine.statistic == pytest.approx(t_ref, abs=1e-9)
            assert mine.p_value == pytest.approx(p_ref, abs=1e-6)

    def test_shift_invariance(self):
        rng = np.random.default_rng(19)
        x = rng.normal(size=12)
        base = t_test_one_sample(x, 0.25)
        shifted = t_test_one_sample(x + 1.5, 0.25 + 1.5)
        assert shifted.p_value == pytest.approx(base.p_value, abs=1e-9)


class TestStudentTTail:
    def test_zero_statistic(self):
        for df in (1, 2, 10, 500):
            assert student_t_tail(0.0, df) == 1.0

    def test_cauchy_quartile(self):
        assert student_t_tail(1.0, 1) == pytest.approx(0.5, abs=1e-12)

    def test_derived_value(self):
        assert student_t_tail(3.873, 3) == pytest.approx(0.030465951601013, abs=1e-9)

    def test_invalid_df(self):
        with pytest.raises(InvalidDegreesOfFreedom):
            student_t_tail(1.0, 0)

    def test_strictly_decreasing_in_abs_t(self):
        for df in (1, 5, 30):
            ts = [0.0, 0.1, 0.5, 1.0, 2.0, 4.0, 8.0]
            ps = [student_t_tail(t, df) for t in ts]
            assert all(a > b for a, b in zip(ps, ps[1:]))
            assert student_t_tail(-2.0, df) == student_t_tail(2.0, df)

    def test_normal_limit(self):
        for t in (0.3, 1.0, 1.96, 3.0):
            normal_tail = 2.0 * (1.0 - sp_stats.norm.cdf(abs(t)))
            assert student_t_tail(t, 1000) == pytest.approx(normal_tail, abs=1e-3)
