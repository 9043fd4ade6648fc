"""Unit tests for the chi(2k) limit law and the time-length formulas."""

import math

import numpy as np
import pytest

from extbranch.asymptotics import (
    CDF_GRID,
    asymptotic_kth_time_mean,
    asymptotic_mean,
    asymptotic_var,
    chi_cdf_even,
    chi_moment,
    chi_pdf_even,
    expected_external_time,
    limit_kth_time_mean,
    local_pmf_approx,
    rescale,
    rescaled_cdf_exact,
    rescaled_moment_exact,
)
from extbranch.errors import SupportError
from extbranch.exact_dist import distribution_table


class TestRescale:
    def test_value(self):
        """Test that s = n - sqrt(n/2) maps to x = 1."""
        r = rescale(200, 190)
        assert r.x == pytest.approx(1.0)
        assert (r.n, r.s) == (200, 190)

    def test_bounds(self):
        """Test that x runs from 0 at s = n to sqrt(2n) at s = 0."""
        assert rescale(50, 50).x == 0
        assert rescale(50, 0).x == pytest.approx(math.sqrt(100))

    def test_rejects_out_of_range(self):
        """Test that s above n is rejected."""
        with pytest.raises(SupportError):
            rescale(10, 11)


class TestChiDistribution:
    """Tests for chi_cdf_even, chi_pdf_even and chi_moment."""

    def test_rayleigh_cdf(self):
        """Test that k = 1 is the Rayleigh cdf."""
        for x in (0.3, 1.0, 2.5):
            assert chi_cdf_even(1, x) == pytest.approx(1 - math.exp(-x * x / 2))

    def test_zero(self):
        """Test that cdf and pdf vanish at the origin."""
        for k in range(1, 6):
            assert chi_cdf_even(k, 0.0) == 0.0
            assert chi_pdf_even(k, 0.0) == 0.0

    def test_k2_value(self):
        """Test that chi(4) at x = 2 equals 1 - 3 e^-2."""
        assert chi_cdf_even(2, 2.0) == pytest.approx(1 - 3 * math.exp(-2), abs=1e-12)
        assert chi_cdf_even(2, 2.0) == pytest.approx(0.59399, abs=1e-5)

    def test_cdf_monotone_to_one(self):
        """Test that the cdf is non-decreasing and reaches 1."""
        for k in (1, 3, 6):
            values = [chi_cdf_even(k, x) for x in np.linspace(0, 12, 200)]
            assert all(a <= b for a, b in zip(values, values[1:]))
            assert values[-1] == pytest.approx(1.0, abs=1e-12)

    def test_rayleigh_pdf(self):
        """Test that the k = 1 density is x exp(-x^2/2)."""
        assert chi_pdf_even(1, 1.5) == pytest.approx(1.5 * math.exp(-1.125))

    def test_pdf_integrates_to_one(self):
        """Test that the density integrates to one."""
        xs = np.linspace(0, 20, 20_001)
        for k in (1, 2, 3, 5):
            ys = np.array([chi_pdf_even(k, x) for x in xs])
            area = float(np.sum((ys[1:] + ys[:-1]) / 2 * np.diff(xs)))
            assert area == pytest.approx(1.0, abs=1e-6)

    def test_pdf_is_cdf_derivative(self):
        """Test that the pdf is the numerical derivative of the cdf."""
        h = 1e-5
        for k in (1, 2, 4):
            for x in np.linspace(0.1, 5, 25):
                slope = (chi_cdf_even(k, x + h) - chi_cdf_even(k, x - h)) / (2 * h)
                assert slope == pytest.approx(chi_pdf_even(k, x), abs=1e-6)

    def test_moments(self):
        """Test known chi moments including E[X^2] = 2k."""
        assert chi_moment(1, 1) == pytest.approx(math.sqrt(math.pi / 2))
        assert chi_moment(1, 2) == pytest.approx(2.0)
        for k in range(1, 11):
            assert chi_moment(k, 0) == pytest.approx(1.0)
            assert chi_moment(k, 2) == pytest.approx(2 * k)

    @pytest.mark.parametrize('k,x', [(0, 1.0), (1, -0.1)])
    def test_rejects_bad_arguments(self, k, x):
        """Test that k below 1 and negative x are rejected."""
        with pytest.raises(SupportError):
            chi_cdf_even(k, x)
        with pytest.raises(SupportError):
            chi_pdf_even(k, x)


class TestMeanAndVariance:
    """Tests for asymptotic_mean and asymptotic_var."""

    def test_k1_mean(self):
        """Test that the k = 1 mean is n - sqrt(pi n)/2."""
        assert asymptotic_mean(1000, 1) == pytest.approx(1000 - math.sqrt(math.pi * 1000) / 2)

    def test_crude_mean(self):
        """Test that the crude mean is n - sqrt(kn)."""
        assert asymptotic_mean(1000, 1, crude=True) == pytest.approx(1000 - math.sqrt(1000))

    def test_variants_agree(self):
        """Test that refined and crude means agree within 5% at n = 1000."""
        for k in (1, 2, 3):
            refined, crude = asymptotic_mean(1000, k), asymptotic_mean(1000, k, crude=True)
            assert abs(refined - crude) / refined < 0.05

    def test_variance_coefficients(self):
        """Test the variance coefficients for k = 1 and k = 2."""
        assert asymptotic_var(1000, 1) == pytest.approx((1 - math.pi / 4) * 1000)
        assert asymptotic_var(1000, 2) == pytest.approx((2 - 9 * math.pi / 16) * 1000)

    def test_mean_matches_chi_moment(self):
        """Test the mean coefficient equals E[X] for chi(2k)."""
        for k in range(1, 8):
            gap = (1000 - asymptotic_mean(1000, k)) / math.sqrt(500)
            assert gap == pytest.approx(chi_moment(k, 1))


class TestLocalApproximation:
    def test_within_ten_percent(self):
        """Test that the local approximation is within 10% at x near 1."""
        from extbranch.exact_dist import pmf_ell1
        approx = local_pmf_approx(1000, 1, 969)
        exact = float(pmf_ell1(1000, 969))
        assert approx == pytest.approx(exact, rel=0.10)

    def test_zero_at_top(self):
        """Test that the approximation vanishes at s = n."""
        for k in (1, 2, 3):
            assert local_pmf_approx(500, k, 500) == 0.0

    def test_out_of_range_is_none(self):
        """Test that x above n^(1/7) gives None."""
        # x = 800 / sqrt(500) is far above 1000^(1/7)
        assert local_pmf_approx(1000, 1, 200) is None


class TestTimeLengths:
    """Tests for the coalescent time formulas."""

    def test_expected_external_time(self):
        """Test that E(time) = 2/(n-s) - 2/n at n=10, s=4."""
        assert expected_external_time(10, 4) == pytest.approx(2 / 15)

    def test_single_layer(self):
        """Test s=1 gives E(tau_n) = 1/C(n,2)."""
        assert expected_external_time(30, 1) == pytest.approx(1 / math.comb(30, 2))

    def test_rejects_s_at_n(self):
        """Test that s = n has no external branch."""
        with pytest.raises(SupportError):
            expected_external_time(10, 10)

    def test_plug_in_value(self):
        """Test that the plug-in time is 2/sqrt(kn)."""
        assert asymptotic_kth_time_mean(10_000, 1) == pytest.approx(0.02)
        assert asymptotic_kth_time_mean(10_000, 4) == pytest.approx(0.01)

    def test_plug_in_consistency(self):
        """Test the time at the crude mean length against 2/sqrt(kn)."""
        n = 10_000
        for k in (1, 2, 3):
            s = round(asymptotic_mean(n, k, crude=True))
            assert expected_external_time(n, s) == pytest.approx(
                asymptotic_kth_time_mean(n, k), rel=0.15)

    def test_limit_exceeds_plug_in(self):
        """Test averaging 1/(n - l_k) is larger than inverting the mean."""
        n = 10_000
        ratio = (limit_kth_time_mean(n, 1) + 2 / n) / asymptotic_kth_time_mean(n, 1)
        assert ratio == pytest.approx(math.sqrt(math.pi), rel=1e-12)


class TestExactOnRescaledAxis:
    """Tests for rescaled_cdf_exact and rescaled_moment_exact."""

    def test_cdf_at_zero_is_zero(self):
        """Test that the rescaled cdf is 0 at x = 0."""
        assert rescaled_cdf_exact(distribution_table(100, 1), 0.0) == 0.0

    def test_cdf_reaches_one(self):
        """Test that the rescaled cdf reaches 1 far out."""
        assert rescaled_cdf_exact(distribution_table(100, 2), 50.0) == pytest.approx(1.0)

    def test_ceiling_convention(self):
        """Test P(l_1 >= ceil(n - x sqrt(n/2))) on a hand-picked grid point."""
        table = distribution_table(200, 1)
        # n - x*10 = 190 exactly at x = 1
        assert rescaled_cdf_exact(table, 1.0) == pytest.approx(
            float(sum(p for s, p in table.entries.items() if s >= 190)))

    def test_grid(self):
        """Test that the grid has 26 points from 0 to 5."""
        assert len(CDF_GRID) == 26
        assert CDF_GRID[0] == 0 and CDF_GRID[-1] == 5.0

    def test_moment_zero(self):
        """Test that the zeroth moment is the total mass."""
        assert rescaled_moment_exact(distribution_table(50, 2), 0) == pytest.approx(1.0)

    def test_float_and_exact_moments_agree(self):
        """Test that float and exact tables give the same second moment."""
        exact = rescaled_moment_exact(distribution_table(300, 2), 2)
        floats = rescaled_moment_exact(distribution_table(300, 2, backend='float'), 2)
        assert floats == pytest.approx(exact, rel=1e-9)
