"""
Integration tests: Monte Carlo samplers against exact results.

Seeds are fixed, so every assertion here is deterministic; the bounds are
wide enough that the chosen seeds are not special.
"""

import math
from collections import Counter

import numpy as np
import pytest
from scipy.stats import chi2

from extbranch.asymptotics import exact_kth_time_mean, expected_external_time
from extbranch.cli import default_length_grid
from extbranch.exact_dist import distribution_table
from extbranch.histories import sample_uniform, sample_yule_growth
from extbranch.montecarlo import (
    external_time_by_length,
    gof_compare,
    kth_time_length_stats,
    sample_coalescent,
    simulate,
)
from extbranch.seeding import replicate_seed
from tests.fixtures import slow

CHI2_23_999 = chi2.ppf(0.999, 23)


class TestSamplerAgainstExact:
    """Simulated l_k histograms against exact tables."""

    @pytest.mark.parametrize('n', [20, 100])
    def test_ks_distance(self, n):
        """Test that KS and TV distances stay small for k = 1..3."""
        replicates = 20_000
        for emp in simulate(n, 3, replicates, seed=2024):
            report = gof_compare(emp, distribution_table(n, emp.k))
            assert report.ks < 2.0 / math.sqrt(replicates), report.to_dict()
            assert report.tv < 0.05

    @slow
    @pytest.mark.parametrize('n', [20, 100])
    def test_ks_distance_full(self, n):
        """Test that the 1% KS criterion holds at 10^5 replicates."""
        for emp in simulate(n, 3, 100_000, seed=7, workers=4):
            report = gof_compare(emp, distribution_table(n, emp.k))
            assert report.ks_passes, report.to_dict()

    def test_longest_branch_n4(self):
        """Test P(l_1 = 3) = 2/3 at n = 4 within 4 sigma."""
        replicates = 50_000
        (emp,) = simulate(4, 1, replicates, seed=99)
        sigma = math.sqrt(2 / 3 * 1 / 3 / replicates)
        assert abs(emp.freq(3) - 2 / 3) < 4 * sigma

    @pytest.mark.parametrize('sampler', [sample_uniform, sample_yule_growth])
    def test_samplers_uniform_over_ordered_histories(self, sampler):
        """Test each sampler is uniform over the 24 ordered histories of size 5."""
        replicates = 24_000
        counts = Counter(sampler(5, replicate_seed(31, r)) for r in range(replicates))
        assert len(counts) == 24
        expected = replicates / 24
        chi_square = sum((c - expected) ** 2 / expected for c in counts.values())
        assert chi_square < CHI2_23_999


class TestCoalescentTimes:
    """Simulated time lengths against 2/(n-s) - 2/n."""

    def test_last_layer_mean(self):
        """Test E(tau_n) = 1/45 at n = 10."""
        taus = np.array([sample_coalescent(10, replicate_seed(3, r)).layer_times[-1]
                         for r in range(20_000)])
        stderr = taus.std(ddof=1) / math.sqrt(taus.size)
        assert abs(taus.mean() - 1 / 45) < 4 * stderr

    def test_length_grid_n50(self):
        """Test that mean time lengths on the default grid match 2/(n-s) - 2/n."""
        stats = external_time_by_length(50, default_length_grid(50), 20_000, seed=17)
        assert list(stats) == [1, 13, 25, 37, 49]
        for s, st in stats.items():
            assert st.replicates > 100
            assert abs(st.mean - expected_external_time(50, s)) < 4 * st.stderr, s

    def test_length_five_n20(self):
        """Test that length 5 at n=20 has mean time 1/30."""
        stats = external_time_by_length(20, [5], 20_000, seed=5)
        assert abs(stats[5].mean - 1 / 30) < 4 * stats[5].stderr

    @slow
    def test_length_grid_n50_full(self):
        """Test the grid at 10^5 replicates within 3 standard errors."""
        stats = external_time_by_length(50, default_length_grid(50), 100_000, seed=1)
        for s, st in stats.items():
            assert abs(st.mean - expected_external_time(50, s)) < 3 * st.stderr, s

    @pytest.mark.parametrize('k', [1, 2])
    def test_kth_time_matches_exact_mean(self, k):
        """Test that simulated time at l_k matches the exact mean."""
        st = kth_time_length_stats(500, k, 5_000, seed=11)
        assert abs(st.mean - exact_kth_time_mean(500, k)) < 4 * st.stderr

    @slow
    @pytest.mark.parametrize('k', [1, 4])
    def test_kth_time_n10000(self, k):
        """Test the time at l_1 and l_4 for n = 10^4."""
        st = kth_time_length_stats(10_000, k, 10_000, seed=12)
        assert abs(st.mean - exact_kth_time_mean(10_000, k)) < 4 * st.stderr
