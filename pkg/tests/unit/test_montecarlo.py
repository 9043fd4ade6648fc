"""Unit tests for the Monte Carlo module.

Determinism, data type invariants, GOF arithmetic and coalescent samples.
Statistical agreement checks live in tests/integration/test_simulation.py.
"""

import pytest
from scipy.stats import chi2

from extbranch.errors import GofMismatchError, SupportError
from extbranch.exact_dist import distribution_table
from extbranch.montecarlo import (
    CoalescentSample,
    EmpiricalDistribution,
    GofReport,
    _pooled_cells,
    external_time_by_length,
    gof_compare,
    kth_time_length_stats,
    sample_coalescent,
    sample_from_table,
    simulate,
)


class TestEmpiricalDistribution:
    def test_counts_must_sum_to_replicates(self):
        """Test that counts must add up to the replicate count."""
        with pytest.raises(ValueError):
            EmpiricalDistribution(n=10, k=1, replicates=5, seed=0, counts={6: 4})

    def test_support_bounds(self):
        """Test that counts outside [1, n-k] are rejected."""
        with pytest.raises(ValueError):
            EmpiricalDistribution(n=10, k=2, replicates=1, seed=0, counts={9: 1})

    def test_freq_and_ecdf(self):
        """Test empirical frequency and ecdf on a two-point sample."""
        emp = EmpiricalDistribution(n=10, k=1, replicates=4, seed=0, counts={6: 1, 8: 3})
        assert emp.freq(8) == 0.75
        assert emp.freq(7) == 0
        assert emp.ecdf(7) == 0.25


class TestSimulate:
    """Tests for simulate."""

    def test_single_replicate(self):
        """Test that one replicate yields one observation."""
        (emp,) = simulate(20, 1, 1, seed=3)
        assert emp.replicates == 1
        assert sum(emp.counts.values()) == 1

    def test_one_distribution_per_k(self):
        """Test that k_max = 3 yields distributions for k = 1, 2, 3 with the seed."""
        result = simulate(20, 3, 50, seed=3)
        assert [e.k for e in result] == [1, 2, 3]
        assert all(e.seed == 3 for e in result)

    def test_deterministic_for_seed(self):
        """Test that a fixed seed reproduces the counts."""
        a = simulate(30, 2, 200, seed=11)
        b = simulate(30, 2, 200, seed=11)
        assert [e.counts for e in a] == [e.counts for e in b]

    def test_different_seeds_differ(self):
        """Test that different seeds give different counts."""
        a = simulate(50, 1, 300, seed=1)
        b = simulate(50, 1, 300, seed=2)
        assert a[0].counts != b[0].counts

    def test_workers_do_not_change_results(self):
        """Test the same seed gives identical counts for 1 and 3 workers."""
        serial = simulate(40, 3, 301, seed=42, workers=1)
        parallel = simulate(40, 3, 301, seed=42, workers=3)
        assert [e.counts for e in serial] == [e.counts for e in parallel]

    def test_seed_recorded_when_absent(self):
        """Test that a drawn seed is recorded and reproduces the run."""
        (emp,) = simulate(10, 1, 5)
        assert isinstance(emp.seed, int)
        again = simulate(10, 1, 5, seed=emp.seed)
        assert again[0].counts == emp.counts

    def test_rejects_k_max_above_half(self):
        """Test that k_max above ceil(n/2) is rejected."""
        with pytest.raises(SupportError):
            simulate(10, 6, 10, seed=0)

    def test_rejects_zero_replicates(self):
        """Test that zero replicates are rejected."""
        with pytest.raises(SupportError):
            simulate(10, 1, 0, seed=0)


class TestGofCompare:
    """Tests for gof_compare."""

    def test_exact_counts_give_zero_distance(self):
        """Test that counts proportional to the table give zero distances."""
        table = distribution_table(4, 1)
        emp = EmpiricalDistribution(n=4, k=1, replicates=3, seed=0, counts={2: 1, 3: 2})
        report = gof_compare(emp, table, min_expected=1.0)
        assert report.tv == pytest.approx(0.0, abs=1e-15)
        assert report.ks == pytest.approx(0.0, abs=1e-15)
        assert report.chi_square == pytest.approx(0.0, abs=1e-15)
        assert report.ks_passes

    def test_point_mass_tv(self):
        """Test TV = 1 - p(point) for a degenerate sample."""
        table = distribution_table(8, 1)
        emp = EmpiricalDistribution(n=8, k=1, replicates=10, seed=0, counts={6: 10})
        report = gof_compare(emp, table)
        assert report.tv == pytest.approx(1 - float(table.prob(6)))

    def test_mismatch_rejected(self):
        """Test that tables of a different k are refused."""
        emp = EmpiricalDistribution(n=8, k=1, replicates=1, seed=0, counts={6: 1})
        with pytest.raises(GofMismatchError):
            gof_compare(emp, distribution_table(8, 2))

    def test_ks_critical_value(self):
        """Test the 1% KS critical value 1.63/sqrt(R)."""
        table = distribution_table(4, 1)
        emp = EmpiricalDistribution(n=4, k=1, replicates=100, seed=0, counts={2: 33, 3: 67})
        report = gof_compare(emp, table)
        assert report.ks_critical_1pct == pytest.approx(0.163)
        assert report.to_dict()['dof'] == report.dof

    def test_sample_from_table_close(self):
        """Test that direct sampling from a table lands within TV 0.02."""
        table = distribution_table(100, 1)
        emp = sample_from_table(table, 100_000, seed=5)
        assert gof_compare(emp, table).tv < 0.02

    def test_chi_square_pvalue(self):
        """Test that the p-value is the chi-square upper tail and is absent with one cell."""
        report = GofReport(n=10, k=1, replicates=100, seed=0, tv=0.0, ks=0.0,
                           chi_square=3.84, dof=1)
        assert report.chi_square_pvalue == pytest.approx(chi2.sf(3.84, 1))
        assert report.chi_square_pvalue == pytest.approx(0.05, abs=1e-3)
        assert report.to_dict()['chi_square_pvalue'] == report.chi_square_pvalue
        single = GofReport(n=3, k=1, replicates=5, seed=0, tv=0.0, ks=0.0, chi_square=0.0, dof=0)
        assert single.chi_square_pvalue is None

    def test_exact_counts_have_pvalue_one(self):
        """Test that a sample matching the table exactly gets p-value 1."""
        table = distribution_table(4, 1)
        emp = EmpiricalDistribution(n=4, k=1, replicates=300, seed=0, counts={2: 100, 3: 200})
        assert gof_compare(emp, table).chi_square_pvalue == pytest.approx(1.0)

    def test_pooling(self):
        """Test small cells merge left to right and a short tail joins the last cell."""
        cells = _pooled_cells([1, 2, 10, 1], [1.0, 4.5, 9.0, 0.5], 5.0)
        assert cells == [(3, 5.5), (11, 9.5)]


class TestCoalescent:
    """Tests for sample_coalescent and the time statistics."""

    def test_layer_count(self):
        """Test that a sample has n-1 positive layer times."""
        sample = sample_coalescent(12, 7)
        assert sample.tree.n == 12
        assert len(sample.layer_times) == 11
        assert all(t > 0 for t in sample.layer_times)

    def test_deterministic(self):
        """Test that a seed reproduces the sample."""
        assert sample_coalescent(15, 99) == sample_coalescent(15, 99)

    def test_rejects_small_n(self):
        """Test that n below 2 is rejected."""
        with pytest.raises(SupportError):
            sample_coalescent(1, 0)

    def test_node_times_increase_with_rank(self):
        """Test that node times grow with rank up to the root height."""
        sample = sample_coalescent(10, 1)
        times = [sample.node_time(r) for r in range(1, 10)]
        assert all(a < b for a, b in zip(times, times[1:]))
        assert times[-1] == pytest.approx(sum(sample.layer_times))
        assert times[0] == pytest.approx(sample.layer_times[-1])

    def test_external_branch_times_keys(self):
        """Test that external times are keyed like the length profile."""
        from extbranch.histories import external_branch_profile
        sample = sample_coalescent(20, 4)
        assert list(sample.external_branch_times()) == list(external_branch_profile(sample.tree))

    def test_rejects_bad_layer_times(self, cherry2):
        """Test that layer counts and non-positive times are rejected."""
        with pytest.raises(ValueError):
            CoalescentSample(tree=cherry2, layer_times=(1.0, 2.0))
        with pytest.raises(ValueError):
            CoalescentSample(tree=cherry2, layer_times=(0.0,))

    def test_stats_deterministic(self):
        """Test that statistics at l_k are reproducible."""
        a = kth_time_length_stats(50, 2, 200, seed=8)
        b = kth_time_length_stats(50, 2, 200, seed=8)
        assert a == b
        assert a.replicates == 200

    def test_kth_stats_rejects_k(self):
        """Test that k above ceil(n/2) is rejected."""
        with pytest.raises(SupportError):
            kth_time_length_stats(10, 6, 10, seed=0)

    def test_kth_stats_rejects_small_n(self):
        """Test that a single leaf is a support error, not an index error."""
        with pytest.raises(SupportError, match='n must be >= 2'):
            kth_time_length_stats(1, 1, 10, seed=0)

    def test_external_time_rejects_lengths(self):
        """Test that lengths outside [1, n-1] are rejected."""
        with pytest.raises(SupportError):
            external_time_by_length(10, [10], 5, seed=0)

    def test_length_one_always_present(self):
        """Test that length 1 occurs in every replicate."""
        stats = external_time_by_length(25, [1], 100, seed=2)
        assert stats[1].replicates == 100
