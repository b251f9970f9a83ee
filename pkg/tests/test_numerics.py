import math

import mpmath as mp
import numpy as np
import pytest

from majlab.numerics import (
    CONVOLUTION_CAP,
    ConvolutionCapError,
    anticoncentration_report,
    binomial_pmf,
    diff_cdf,
    diff_distribution,
    log_binomial_pmf,
    std_normal_cdf,
)


class TestBinomialPmf:
    def test_small_exact(self):
        np.testing.assert_allclose(
            binomial_pmf(2, 0.5), [0.25, 0.5, 0.25], atol=1e-15
        )
        np.testing.assert_allclose(
            binomial_pmf(3, 0.2), [0.512, 0.384, 0.096, 0.008], atol=1e-15
        )

    def test_log_pmf_consistent(self):
        pmf = binomial_pmf(20, 0.3)
        for k in range(21):
            assert math.exp(log_binomial_pmf(20, 0.3, k)) == pytest.approx(
                pmf[k], abs=1e-15
            )

    def test_log_pmf_outside_support(self):
        assert log_binomial_pmf(5, 0.4, -1) == -math.inf
        assert log_binomial_pmf(5, 0.4, 6) == -math.inf

    def test_invalid_p(self):
        with pytest.raises(ValueError):
            binomial_pmf(3, 0.0)
        with pytest.raises(ValueError):
            log_binomial_pmf(3, 1.0, 1)


class TestDiffDistribution:
    def test_symmetric_three_exact(self):
        # P(Bin(3,1/2) = Bin(3,1/2)) = sum_k C(3,k)^2 / 64 = 20/64
        d = diff_distribution(3, 3, 0.5)
        assert d.prob_at(0) == pytest.approx(20 / 64, abs=1e-14)

    def test_one_vs_one(self):
        d = diff_distribution(1, 1, 0.5)
        np.testing.assert_allclose(d.pmf, [0.25, 0.5, 0.25], atol=1e-15)
        assert d.support_min == -1 and d.support_max == 1

    def test_degenerate_point_mass(self):
        d = diff_distribution(0, 0, 0.3)
        assert d.prob_at(0) == 1.0
        assert d.prob_le(0) == 1.0 and d.prob_ge(0) == 1.0

    def test_normalization_random(self):
        rng = np.random.default_rng(12345)
        for _ in range(200):
            n = int(rng.integers(0, 1000))
            m = int(rng.integers(0, 1000))
            if n + m > 2000:
                continue
            p = float(rng.uniform(0.01, 0.99))
            d = diff_distribution(n, m, p)
            assert math.fsum(d.pmf) == pytest.approx(1.0, abs=1e-10)
            assert (d.pmf >= 0).all()

    def test_reflection_symmetry(self):
        d1 = diff_distribution(7, 4, 0.35)
        d2 = diff_distribution(4, 7, 0.35)
        for t in range(-4, 8):
            assert d1.prob_at(t) == pytest.approx(d2.prob_at(-t), abs=1e-14)

    def test_mean_and_variance(self):
        for n, m, p in [(10, 10, 0.5), (30, 12, 0.2), (5, 40, 0.8)]:
            d = diff_distribution(n, m, p)
            support = np.arange(-m, n + 1)
            mean = float(support @ d.pmf)
            var = float((support - mean) ** 2 @ d.pmf)
            assert mean == pytest.approx((n - m) * p, abs=1e-10)
            assert var == pytest.approx((n + m) * p * (1 - p), abs=1e-9)

    def test_cdf_complement(self):
        d = diff_distribution(12, 9, 0.4)
        for t in range(-9, 13):
            total = d.prob_le(t) + d.prob_ge(t) - d.prob_at(t)
            assert total == pytest.approx(1.0, abs=1e-12)
        assert diff_cdf(d, -100) == 0.0
        assert diff_cdf(d, 100) == 1.0

    def test_cap_enforced(self):
        with pytest.raises(ConvolutionCapError):
            diff_distribution(CONVOLUTION_CAP, 1, 0.5)

    def test_invalid_args(self):
        with pytest.raises(ValueError):
            diff_distribution(-1, 3, 0.5)
        with pytest.raises(ValueError):
            diff_distribution(3, 3, 1.5)


class TestStdNormalCdf:
    def test_against_mpmath_grid(self):
        mp.mp.dps = 30
        for t in np.linspace(-8.0, 8.0, 1000):
            oracle = float(0.5 * mp.erfc(-mp.mpf(float(t)) / mp.sqrt(2)))
            assert abs(std_normal_cdf(float(t)) - oracle) <= 1e-12

    def test_basic_values(self):
        assert std_normal_cdf(0.0) == pytest.approx(0.5, abs=1e-15)
        assert std_normal_cdf(10.0) == pytest.approx(1.0, abs=1e-15)

    def test_nonfinite_rejected(self):
        with pytest.raises(ValueError):
            std_normal_cdf(math.inf)
        with pytest.raises(ValueError):
            std_normal_cdf(math.nan)


class TestAnticoncentration:
    def test_balanced_sup_value(self):
        # sup_t P(W = t) at n = m = 25, p = 1/2 is attained at t = 0:
        # sum_k P(Bin(25,1/2) = k)^2, frozen from a 40-digit evaluation
        rep = anticoncentration_report(25, 25, 0.5)
        assert rep.sup_pmf == pytest.approx(0.11227517265921705, abs=1e-13)

    def test_scaling_sweep(self):
        # sup_t P(W=t) * sqrt((m+n)p(1-p)) stays bounded as sizes grow
        for total in (50, 200, 800):
            for p in (0.2, 0.5, 0.8):
                rep = anticoncentration_report(total // 2, total // 2, p)
                assert 0.1 < rep.implied_c1 < 0.5
                assert 0.0 <= rep.implied_c2 < 1.0

    def test_adjacent_diff_nonnegative(self):
        rep = anticoncentration_report(10, 7, 0.3)
        assert rep.max_adjacent_diff > 0.0
        assert rep.sup_pmf >= rep.max_adjacent_diff
