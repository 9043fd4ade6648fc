"""
extbranch

Distribution of the k-th largest external branch length of Yule histories:
exact rational tables, chi(2k) asymptotics, samplers and Monte Carlo checks.

Usage:
    python -m extbranch.cli exact-table --n 8 --k 1
"""

__version__ = '0.1.0'

from .errors import (
    BackendError,
    EnumerationBoundError,
    ExtBranchError,
    GofMismatchError,
    InvalidHistoryError,
    InvalidPermutationError,
    RecursionRangeError,
    SupportError,
)

from .histories import (
    LEAF,
    BranchLengthProfile,
    OrderedHistory,
    canonical_form,
    cherry_count,
    enumerate_ordered,
    external_branch_profile,
    from_newick,
    sample_uniform,
    sample_yule_growth,
    to_newick,
    yule_probability,
)

from .permutations import (
    Permutation,
    format_permutation,
    kth_largest_non_peak,
    non_peak_values,
    parse_permutation,
    peak_values,
    permutation_to_tree,
    tree_to_permutation,
)

from .exact_dist import (
    DistributionTable,
    bruteforce_table,
    cdf_ell1,
    count_ell1,
    count_ell1_below,
    distribution_table,
    exact_mean_var,
    joint_pmf,
    joint_pmf_words,
    log_pmf_ellk_float,
    pmf_ell1,
    pmf_ell2_closed,
    pmf_ell3_closed,
    pmf_ellk,
    word_terms,
)

from .asymptotics import (
    RescaledValue,
    asymptotic_kth_time_mean,
    asymptotic_mean,
    asymptotic_var,
    cdf_grid_rows,
    chi_cdf_even,
    chi_moment,
    chi_pdf_even,
    exact_kth_time_mean,
    expected_external_time,
    limit_kth_time_mean,
    local_pmf_approx,
    rescale,
)

from .montecarlo import (
    CoalescentSample,
    EmpiricalDistribution,
    GofReport,
    external_time_by_length,
    gof_compare,
    kth_time_length_stats,
    sample_coalescent,
    sample_from_table,
    simulate,
)

__all__ = [
    '__version__',
    # Errors
    'ExtBranchError',
    'InvalidHistoryError',
    'InvalidPermutationError',
    'EnumerationBoundError',
    'SupportError',
    'RecursionRangeError',
    'BackendError',
    'GofMismatchError',
    # Histories
    'LEAF',
    'OrderedHistory',
    'BranchLengthProfile',
    'external_branch_profile',
    'cherry_count',
    'yule_probability',
    'canonical_form',
    'to_newick',
    'from_newick',
    'sample_uniform',
    'sample_yule_growth',
    'enumerate_ordered',
    # Permutations
    'Permutation',
    'format_permutation',
    'parse_permutation',
    'tree_to_permutation',
    'permutation_to_tree',
    'peak_values',
    'non_peak_values',
    'kth_largest_non_peak',
    # Exact distribution
    'DistributionTable',
    'cdf_ell1',
    'pmf_ell1',
    'count_ell1',
    'count_ell1_below',
    'joint_pmf',
    'joint_pmf_words',
    'word_terms',
    'pmf_ellk',
    'pmf_ell2_closed',
    'pmf_ell3_closed',
    'distribution_table',
    'exact_mean_var',
    'bruteforce_table',
    'log_pmf_ellk_float',
    # Asymptotics
    'RescaledValue',
    'rescale',
    'chi_cdf_even',
    'chi_pdf_even',
    'chi_moment',
    'local_pmf_approx',
    'asymptotic_mean',
    'asymptotic_var',
    'expected_external_time',
    'asymptotic_kth_time_mean',
    'limit_kth_time_mean',
    'exact_kth_time_mean',
    'cdf_grid_rows',
    # Monte Carlo
    'EmpiricalDistribution',
    'GofReport',
    'CoalescentSample',
    'simulate',
    'sample_from_table',
    'gof_compare',
    'sample_coalescent',
    'external_time_by_length',
    'kth_time_length_stats',
]
