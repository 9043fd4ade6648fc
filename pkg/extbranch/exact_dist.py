"""
Exact distribution of the k-th largest external branch length.

All probabilities are over ordered histories of size n drawn uniformly, i.e.
over Yule histories. Every finite-n quantity is an exact ``Fraction``; the
count h_n(...) = p_n(...) * (n-1)! of histories is always an integer and most
of the heavy lifting happens at that integer level.

Layers:
    * closed forms for l_1 (cdf and pmf),
    * the joint recurrence for (l_1, ..., l_k),
    * the word expansion of that recurrence, evaluated for every s at once
      with prefix sums (``pmf_ellk`` / ``distribution_table``),
    * explicit closed sums for k = 2 and k = 3,
    * the permutation-enumeration oracle,
    * a log-space float backend for n too large for comfortable rationals.
"""

import itertools
import logging
import math
import threading
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .config import get_settings
from .errors import (
    BackendError,
    EnumerationBoundError,
    RecursionRangeError,
    SupportError,
)
from .permutations import non_peak_sorted

logger = logging.getLogger(__name__)

Probability = Union[Fraction, float]

BACKENDS = ('exact', 'float', 'auto')


def ceil_half(n: int) -> int:
    return (n + 1) // 2


# =============================================================================
# FACTORIALS
# =============================================================================

class _FactorialTable:
    """Factorials memoized up to the largest n requested so far."""

    def __init__(self):
        self._values: List[int] = [1]
        self._lock = threading.Lock()

    def __call__(self, m: int) -> int:
        if m < 0:
            raise SupportError(f'factorial of negative number {m}')
        values = self._values
        if m < len(values):
            return values[m]
        with self._lock:
            values = self._values
            if m >= len(values):
                extended = list(values)
                acc = extended[-1]
                for i in range(len(extended), m + 1):
                    acc *= i
                    extended.append(acc)
                # Readers only ever see a fully built list
                self._values = extended
            return self._values[m]


factorial = _FactorialTable()


# =============================================================================
# THE LONGEST EXTERNAL BRANCH
# =============================================================================

def _check_size(n: int) -> None:
    if n < 2:
        raise SupportError(f'n must be >= 2, got {n}')


def cdf_ell1(n: int, u: int) -> Fraction:
    """P(l_1 <= u) = u!(u-1)! / ((2u-n)!(n-1)!) on ceil(n/2) <= u <= n-1."""
    _check_size(n)
    if n == 2:
        return Fraction(1 if u >= 1 else 0)
    if u < ceil_half(n):
        return Fraction(0)
    if u >= n - 1:
        return Fraction(1)
    return Fraction(factorial(u) * factorial(u - 1), factorial(2 * u - n) * factorial(n - 1))


def count_ell1(n: int, s: int) -> int:
    """h_n(l_1 = s): number of ordered histories of size n with l_1 = s."""
    _check_size(n)
    if n == 2:
        return 1 if s == 1 else 0
    if not ceil_half(n) <= s <= n - 1:
        return 0
    poly = 4 * n * s + s - n * n - n - 3 * s * s
    count, rem = divmod(factorial(s - 1) * factorial(s - 2) * poly, factorial(2 * s - n))
    assert rem == 0, (n, s)
    return count


def pmf_ell1(n: int, s: int) -> Fraction:
    """P(l_1 = s) = (s-1)!(s-2)!(4ns + s - n^2 - n - 3s^2) / ((2s-n)!(n-1)!)."""
    _check_size(n)
    if n == 2:
        return Fraction(1 if s == 1 else 0)
    if not ceil_half(n) <= s <= n - 1:
        return Fraction(0)
    poly = 4 * n * s + s - n * n - n - 3 * s * s
    return Fraction(factorial(s - 1) * factorial(s - 2) * poly,
                    factorial(2 * s - n) * factorial(n - 1))


def count_ell1_below_closed(n: int, s: int) -> int:
    """h_n(l_1 < s) = (s-1)!(s-2)!(2s-n)(2s-n-1)/(2s-n)! for ceil(n/2) <= s <= n."""
    _check_size(n)
    if s <= ceil_half(n):
        return 0
    if s >= n:
        return factorial(n - 1)
    return factorial(s - 1) * factorial(s - 2) // factorial(2 * s - n - 2)


def count_ell1_below(n: int, s: int) -> int:
    """
    h_n(l_1 < s) from the three-term recurrence

        h_m(<t) = h_m(<t-1) + 2(m-t+1) h_{m-1}(<t-1) + (m-t)(m-t+1) h_{m-2}(<t-1)

    with h_m(<t) = 0 for t <= ceil(m/2) and (m-1)! for t >= m. Built bottom
    up; independent of the closed form, which it is checked against.
    """
    _check_size(n)
    rows: Dict[int, Dict[int, int]] = {}

    def get(m: int, t: int) -> int:
        if t <= ceil_half(m):
            return 0
        if t >= m:
            return factorial(m - 1)
        return rows[m][t]

    for m in range(2, n + 1):
        rows[m] = {}
        for t in range(ceil_half(m) + 1, m):
            rows[m][t] = (get(m, t - 1)
                          + 2 * (m - t + 1) * get(m - 1, t - 1)
                          + (m - t) * (m - t + 1) * get(m - 2, t - 1))
    return get(n, s)


# =============================================================================
# JOINT RECURRENCE
# =============================================================================

def _check_decreasing(s: Sequence[int]) -> Tuple[int, ...]:
    s = tuple(int(v) for v in s)
    if not s:
        raise SupportError('need at least one length')
    if any(a <= b for a, b in zip(s, s[1:])):
        raise SupportError(f'lengths must be strictly decreasing: {s}')
    if s[-1] < 1:
        raise SupportError(f'lengths must be positive: {s}')
    return s


def joint_pmf(n: int, s: Sequence[int]) -> Fraction:
    """
    P(l_1 = s_1, ..., l_k = s_k) via

        p_n(s_1..s_k) = 2(n-s_1)/(n-1) p_{n-1}(s_2..s_k)
                        + (n-s_1)(n-s_1-1)/((n-1)(n-2)) p_{n-2}(s_2..s_k)

    bottoming out at :func:`pmf_ell1`. Branches with a zero coefficient are
    not expanded.
    """
    s = _check_decreasing(s)
    _check_size(n)
    if s[0] > n - 1:
        raise SupportError(f'l_1 <= n-1 = {n - 1}, got {s[0]}')
    return _joint(n, s)


def _joint(n: int, s: Tuple[int, ...]) -> Fraction:
    if len(s) == 1:
        return pmf_ell1(n, s[0])
    if n < 3:
        raise RecursionRangeError(
            f'recurrence reached size {n} with lengths {s} still to place'
        )
    a = n - s[0]
    total = Fraction(0)
    if a > 0:
        total += Fraction(2 * a, n - 1) * _joint(n - 1, s[1:])
    if a > 1:
        total += Fraction(a * (a - 1), (n - 1) * (n - 2)) * _joint(n - 2, s[1:])
    return total


# =============================================================================
# WORD EXPANSION
# =============================================================================

class Letter(str, Enum):
    """Recurrence branch taken at one level: one leaf size down, or two."""
    MU = 'mu'
    NU = 'nu'


@dataclass(frozen=True)
class WordLevel:
    """
    One factor of a word term.

    ``size`` is the history size m at this level and ``offset`` the number of
    NU letters before it; the factor is evaluated at x = s* - offset with

        mu_m(x) = 2x / (m-1),   nu_m(x) = x(x-1) / ((m-1)(m-2)).
    """
    letter: Letter
    size: int
    offset: int

    @property
    def denominator(self) -> int:
        m = self.size
        return m - 1 if self.letter is Letter.MU else (m - 1) * (m - 2)

    def numerator(self, x: int) -> int:
        # Products that reach x <= 0 (MU) or x <= 1 (NU) already contain a
        # zero factor, so clamping here never changes a sum.
        if self.letter is Letter.MU:
            return 2 * x if x > 0 else 0
        return x * (x - 1) if x > 1 else 0

    def numerators(self, s_star_max: int) -> List[int]:
        """Numerators for s* = 1..s_star_max."""
        return [self.numerator(u - self.offset) for u in range(1, s_star_max + 1)]

    def factors_float(self, s_star_max: int) -> np.ndarray:
        x = np.arange(1, s_star_max + 1, dtype=float) - self.offset
        m = self.size
        if self.letter is Letter.MU:
            return np.where(x > 0, 2.0 * x / (m - 1), 0.0)
        return np.where(x > 1, x * (x - 1) / ((m - 1) * (m - 2)), 0.0)


@dataclass(frozen=True)
class WordTerm:
    """A word over {MU, NU} of length k-1 with its per-level factors."""
    word: Tuple[Letter, ...]
    levels: Tuple[WordLevel, ...]
    final_size: int

    def __post_init__(self):
        offsets = [lv.offset for lv in self.levels]
        if any(a > b for a, b in zip(offsets, offsets[1:])):
            raise ValueError(f'NU counts must be nondecreasing: {offsets}')

    @property
    def nu_count(self) -> int:
        return sum(1 for letter in self.word if letter is Letter.NU)

    @property
    def denominator(self) -> int:
        return math.prod(lv.denominator for lv in self.levels)

    def nested_sums(self, s_star_max: int) -> List[int]:
        """
        Integer numerators G(S) for S = 0..s_star_max of

            sum_{1 <= u_1 <= ... <= u_{k-1} <= S} prod_l num_l(u_{l+1})

        computed as one prefix-sum pass per level. The rational value of the
        nested sum is G(S) / self.denominator.
        """
        acc = [1] * s_star_max
        for level in self.levels:
            nums = level.numerators(s_star_max)
            acc = list(itertools.accumulate(a * b for a, b in zip(nums, acc)))
        return [0] + acc

    def nested_sums_float(self, s_star_max: int) -> np.ndarray:
        """Float version of :meth:`nested_sums`, already divided by the denominators."""
        acc = np.ones(s_star_max)
        for level in self.levels:
            acc = np.cumsum(level.factors_float(s_star_max) * acc)
        return np.concatenate(([0.0], acc))


@lru_cache(maxsize=256)
def word_terms(n: int, k: int) -> Tuple[WordTerm, ...]:
    """All 2^(k-1) word terms of the expansion of p_n(l_k = .)."""
    if k < 1:
        raise SupportError(f'k must be >= 1, got {k}')
    terms = []
    for word in itertools.product((Letter.MU, Letter.NU), repeat=k - 1):
        levels = []
        nus = 0
        for depth, letter in enumerate(word):
            levels.append(WordLevel(letter=letter, size=n - nus - depth, offset=nus))
            nus += letter is Letter.NU
        terms.append(WordTerm(word=word, levels=tuple(levels), final_size=n - nus - (k - 1)))
    return tuple(terms)


def joint_pmf_words(n: int, s: Sequence[int]) -> Fraction:
    """Joint probability from the explicit word expansion (no recursion)."""
    s = _check_decreasing(s)
    _check_size(n)
    k = len(s)
    if s[0] > n - 1:
        raise SupportError(f'l_1 <= n-1 = {n - 1}, got {s[0]}')
    if k == 1:
        return pmf_ell1(n, s[0])
    if n < 2 * k + 1:
        raise RecursionRangeError(f'word expansion needs n >= {2 * k + 1}, got {n}')
    total = Fraction(0)
    for term in word_terms(n, k):
        coeff = Fraction(1)
        for level, s_j in zip(term.levels, s):
            x = level.size - s_j
            coeff *= Fraction(level.numerator(x), level.denominator)
            if not coeff:
                break
        if coeff:
            total += coeff * pmf_ell1(term.final_size, s[-1])
    return total


def _support(n: int, k: int) -> Tuple[int, int]:
    """[ceil(n/2) - k + 1, n - k] clipped to >= 1."""
    return max(1, ceil_half(n) - k + 1), n - k


def _count_row_words(n: int, k: int, support: Sequence[int]) -> Dict[int, int]:
    """
    h_n(l_k = s) for every s in ``support`` through the word expansion.

    Words that run the history down below two leaves carry a zero factor
    and are skipped; only n < 2k+1 produces them.
    """
    s_star_max = n - k + 1 - min(support)
    counts = dict.fromkeys(support, 0)
    for term in word_terms(n, k):
        if term.final_size < 2:
            continue
        # denominators times (final_size - 1)! telescope to (n-1)!
        g = term.nested_sums(s_star_max)
        for s in support:
            base = count_ell1(term.final_size, s)
            if base:
                counts[s] += g[n - k + 1 - s] * base
    return counts


def _count_row_merged(n: int, k: int, support: Sequence[int]) -> Dict[int, int]:
    """
    Same sum as :func:`_count_row_words` with words grouped by depth and NU
    count. Words agreeing on both share every later factor, so their prefix
    sums add; the cost is O(k^2 n) instead of O(2^k n), which is what makes
    k near n/2 reachable.
    """
    s_star_max = n - k + 1 - min(support)
    states: Dict[int, List[int]] = {0: [1] * s_star_max}
    for depth in range(k - 1):
        merged: Dict[int, List[int]] = {}
        for nus, acc in states.items():
            for letter in Letter:
                key = nus + (letter is Letter.NU)
                if n - key - (k - 1) < 2:
                    continue
                level = WordLevel(letter=letter, size=n - nus - depth, offset=nus)
                nums = level.numerators(s_star_max)
                summed = list(itertools.accumulate(a * b for a, b in zip(nums, acc)))
                prev = merged.get(key)
                merged[key] = summed if prev is None else [a + b for a, b in zip(prev, summed)]
        states = merged
    counts = dict.fromkeys(support, 0)
    for nus, acc in states.items():
        final_size = n - nus - (k - 1)
        g = [0] + acc
        for s in support:
            base = count_ell1(final_size, s)
            if base:
                counts[s] += g[n - k + 1 - s] * base
    return counts


# =============================================================================
# ORACLE
# =============================================================================

@lru_cache(maxsize=16)
def _oracle_counts(n: int) -> Tuple[Tuple[Tuple[int, int], ...], ...]:
    """Per-k counts of the k-th largest non-peak over all permutations of 1..n-1."""
    logger.info('oracle: enumerating %d permutations of size %d', factorial(n - 1), n - 1)
    tallies: List[Counter] = []
    for values in itertools.permutations(range(1, n)):
        for idx, value in enumerate(non_peak_sorted(values)):
            if idx == len(tallies):
                tallies.append(Counter())
            tallies[idx][value] += 1
    return tuple(tuple(sorted(c.items())) for c in tallies)


def _enumeration_bound(bound: Optional[int]) -> int:
    return get_settings().enumeration_bound if bound is None else bound


def _oracle_count_row(n: int, k: int, bound: Optional[int] = None) -> Dict[int, int]:
    bound = _enumeration_bound(bound)
    _check_size(n)
    if k < 1:
        raise SupportError(f'k must be >= 1, got {k}')
    if n > bound:
        raise EnumerationBoundError(
            f'n={n} exceeds the enumeration bound {bound}; '
            f'raise EXTBRANCH_ENUMERATION_BOUND to enumerate {factorial(n - 1)} permutations'
        )
    tallies = _oracle_counts(n)
    return dict(tallies[k - 1]) if k <= len(tallies) else {}


# =============================================================================
# TABLES
# =============================================================================

@dataclass
class DistributionTable:
    """Probability mass function of l_k at fixed n."""
    n: int
    k: int
    entries: Dict[int, Probability] = field(default_factory=dict)
    backend: str = 'exact'

    @property
    def is_exact(self) -> bool:
        return self.backend != 'float'

    @property
    def support(self) -> List[int]:
        return sorted(self.entries)

    def prob(self, s: int) -> Probability:
        return self.entries.get(s, Fraction(0) if self.is_exact else 0.0)

    def total(self) -> Probability:
        return sum(self.entries.values(), Fraction(0) if self.is_exact else 0.0)

    def cdf(self, s: int) -> Probability:
        """P(l_k <= s)."""
        return sum((p for v, p in self.entries.items() if v <= s),
                   Fraction(0) if self.is_exact else 0.0)

    def upper_tails(self) -> Dict[int, Probability]:
        """P(l_k >= s) for every s in the support, one pass from the top."""
        tails: Dict[int, Probability] = {}
        acc = Fraction(0) if self.is_exact else 0.0
        for s in sorted(self.entries, reverse=True):
            acc += self.entries[s]
            tails[s] = acc
        return tails


def count_table(n: int, k: int, bound: Optional[int] = None) -> Dict[int, int]:
    """h_n(l_k = s) over the support, routed like :func:`pmf_ellk`."""
    _check_size(n)
    if k < 1:
        raise SupportError(f'k must be >= 1, got {k}')
    lo, hi = _support(n, k)
    if k == 1:
        return {s: count_ell1(n, s) for s in range(lo, hi + 1)}
    if lo > hi:
        return {}
    if n < 2 * k + 1:
        if n <= _enumeration_bound(bound):
            return _oracle_count_row(n, k, bound)
        return _count_row_merged(n, k, range(lo, hi + 1))
    return _count_row_words(n, k, range(lo, hi + 1))


def bruteforce_table(n: int, k: int, bound: Optional[int] = None) -> DistributionTable:
    """Exact table from exhaustive enumeration of all (n-1)! permutations."""
    counts = _oracle_count_row(n, k, bound)
    total = factorial(n - 1)
    return DistributionTable(
        n=n, k=k,
        entries={s: Fraction(c, total) for s, c in sorted(counts.items())},
        backend='oracle',
    )


def pmf_ellk(n: int, k: int, s: int, bound: Optional[int] = None) -> Fraction:
    """
    P(l_k = s).

    k = 1 uses the closed form. For n >= 2k+1 the word expansion is
    evaluated with prefix sums. Below that the value is read off the oracle
    within the enumeration bound and comes from the merged expansion above it.
    """
    if k < 1:
        raise SupportError(f'k must be >= 1, got {k}')
    _check_size(n)
    if k == 1:
        return pmf_ell1(n, s)
    if n < 2 * k + 1 and n <= _enumeration_bound(bound):
        counts = _oracle_count_row(n, k, bound)
        return Fraction(counts.get(s, 0), factorial(n - 1))
    if not 1 <= s <= n - k:
        return Fraction(0)
    row = _count_row_words if n >= 2 * k + 1 else _count_row_merged
    counts = row(n, k, [s])
    return Fraction(counts[s], factorial(n - 1))


def _resolve_backend(n: int, backend: str) -> str:
    if backend not in BACKENDS:
        raise BackendError(f'unknown backend {backend!r}; choose from {BACKENDS}')
    if backend == 'auto':
        return 'exact' if n <= get_settings().exact_max_n else 'float'
    return backend


def distribution_table(n: int, k: int, backend: str = 'exact',
                       bound: Optional[int] = None) -> DistributionTable:
    """
    Full pmf of l_k at size n; requires k <= ceil(n/2), where l_k always exists.

    ``backend='float'`` evaluates the same expansion in log space and stores
    floats; ``'auto'`` switches to it above ``Settings.exact_max_n``.
    """
    _check_size(n)
    if k < 1:
        raise SupportError(f'k must be >= 1, got {k}')
    if k > ceil_half(n):
        raise SupportError(
            f'k={k} exceeds ceil(n/2)={ceil_half(n)}; every history of size {n} has at '
            f'least ceil(n/2) distinct external lengths, so only k <= {ceil_half(n)} '
            f'is guaranteed to exist'
        )
    chosen = _resolve_backend(n, backend)
    logger.info('distribution table n=%d k=%d backend=%s', n, k, chosen)

    if chosen == 'float' and n >= 2 * k + 1:
        lo, hi = _support(n, k)
        logs = _log_row_float(n, k, range(lo, hi + 1))
        return DistributionTable(
            n=n, k=k,
            entries={s: math.exp(v) for s, v in logs.items() if v > -math.inf},
            backend='float',
        )

    counts = count_table(n, k, bound)
    total = factorial(n - 1)
    entries = {s: Fraction(c, total) for s, c in sorted(counts.items()) if c}
    if chosen == 'float':
        return DistributionTable(n=n, k=k, backend='float',
                                 entries={s: float(p) for s, p in entries.items()})
    return DistributionTable(n=n, k=k, entries=entries, backend='exact')


def exact_mean_var(n: int, k: int) -> Tuple[Fraction, Fraction]:
    """Exact E(l_k) and Var(l_k)."""
    if k > ceil_half(n):
        raise SupportError(f'k={k} exceeds ceil(n/2)={ceil_half(n)}')
    counts = count_table(n, k)
    total = factorial(n - 1)
    first = sum(s * c for s, c in counts.items())
    second = sum(s * s * c for s, c in counts.items())
    mean = Fraction(first, total)
    return mean, Fraction(second, total) - mean * mean


# =============================================================================
# CLOSED SUMS FOR k = 2, 3
# =============================================================================

def pmf_ell2_closed(n: int, s: int) -> Fraction:
    """P(l_2 = s) as two weighted sums of P(l_1 = s) at sizes n-1 and n-2."""
    if n < 5 or not ceil_half(n) - 1 <= s <= n - 2:
        raise SupportError(f'closed form for l_2 needs n >= 5 and '
                           f'{ceil_half(n) - 1} <= s <= {n - 2}; got n={n}, s={s}')
    first = sum(n - s1 for s1 in range(s + 1, n))
    second = sum((n - s1) * (n - s1 - 1) for s1 in range(s + 1, n))
    return (Fraction(2 * first, n - 1) * pmf_ell1(n - 1, s)
            + Fraction(second, (n - 1) * (n - 2)) * pmf_ell1(n - 2, s))


def pmf_ell3_closed(n: int, s: int) -> Fraction:
    """P(l_3 = s) as three double sums weighting P(l_1 = s) at sizes n-2, n-3, n-4."""
    if n < 7 or not ceil_half(n) - 2 <= s <= n - 3:
        raise SupportError(f'closed form for l_3 needs n >= 7 and '
                           f'{ceil_half(n) - 2} <= s <= {n - 3}; got n={n}, s={s}')
    a = b = c = 0
    for s1 in range(s + 2, n):
        for s2 in range(s + 1, s1):
            a += (n - s1) * (n - 1 - s2)
            b += (n - s1) * (n - s2 - 2) * (2 * n - 2 - s2 - s1)
            c += (n - s1) * (n - s1 - 1) * (n - 2 - s2) * (n - s2 - 3)
    d2 = (n - 1) * (n - 2)
    d3 = d2 * (n - 3)
    d4 = d3 * (n - 4)
    return (Fraction(4 * a, d2) * pmf_ell1(n - 2, s)
            + Fraction(2 * b, d3) * pmf_ell1(n - 3, s)
            + Fraction(c, d4) * pmf_ell1(n - 4, s))


# =============================================================================
# LOG-SPACE FLOAT BACKEND
# =============================================================================

def _log_count_ell1_float(m: int, s: int) -> float:
    """log h_m(l_1 = s); -inf outside the support."""
    if m == 2:
        return 0.0 if s == 1 else -math.inf
    if not ceil_half(m) <= s <= m - 1:
        return -math.inf
    poly = 4 * m * s + s - m * m - m - 3 * s * s
    return (math.lgamma(s) + math.lgamma(s - 1) + math.log(poly)
            - math.lgamma(2 * s - m + 1))


def _logsumexp(values: Sequence[float]) -> float:
    finite = [v for v in values if v > -math.inf]
    if not finite:
        return -math.inf
    top = max(finite)
    return top + math.log(math.fsum(math.exp(v - top) for v in finite))


def _log_row_float(n: int, k: int, support: Sequence[int]) -> Dict[int, float]:
    """log P(l_k = s) for every s in ``support`` (n >= 2k+1)."""
    log_norm = math.lgamma(n)
    if k == 1:
        return {s: _log_count_ell1_float(n, s) - log_norm for s in support}
    s_star_max = n - k + 1 - min(support)
    parts: Dict[int, List[float]] = {s: [] for s in support}
    for term in word_terms(n, k):
        g = term.nested_sums_float(s_star_max)
        log_final_norm = math.lgamma(term.final_size)
        for s in support:
            base = _log_count_ell1_float(term.final_size, s)
            weight = g[n - k + 1 - s]
            if base > -math.inf and weight > 0:
                parts[s].append(math.log(weight) + base - log_final_norm)
    return {s: _logsumexp(vals) for s, vals in parts.items()}


def log_pmf_ellk_float(n: int, k: int, s: int) -> float:
    """
    Natural log of P(l_k = s) in double precision.

    Same expansion as :func:`pmf_ellk`, with log-gamma factorials, so it runs
    for n far beyond the exact backend. Returns ``-math.inf`` when s is
    outside the support.
    """
    if k < 1:
        raise SupportError(f'k must be >= 1, got {k}')
    if n < 2 * k + 1:
        raise SupportError(f'float backend needs n >= 2k+1 = {2 * k + 1}, got n={n}')
    if not 1 <= s <= n - k:
        return -math.inf
    return _log_row_float(n, k, [s])[s]
