"""
Large-n behaviour of l_k.

(n - l_k) / sqrt(n/2) converges in distribution, and in every moment, to the
chi distribution with 2k degrees of freedom. This module holds the limit law
in closed form, the approximations derived from it, and the helpers that put
exact finite-n tables on the same rescaled axis.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, NamedTuple, Optional, Sequence

from .errors import SupportError
from .exact_dist import DistributionTable, distribution_table

logger = logging.getLogger(__name__)

# x = 0, 0.2, ..., 5
CDF_GRID: Sequence[float] = tuple(round(0.2 * i, 10) for i in range(26))


@dataclass(frozen=True)
class RescaledValue:
    """(n - s) / sqrt(n/2) together with the (n, s) it came from."""
    n: int
    s: int
    x: float


def rescale(n: int, s: int) -> RescaledValue:
    if n < 1:
        raise SupportError(f'n must be >= 1, got {n}')
    if not 0 <= s <= n:
        raise SupportError(f's must lie in [0, {n}], got {s}')
    return RescaledValue(n=n, s=s, x=(n - s) / math.sqrt(n / 2))


def _check_chi_args(k: int, x: float) -> None:
    if k < 1:
        raise SupportError(f'k must be >= 1, got {k}')
    if x < 0:
        raise SupportError(f'x must be >= 0, got {x}')


def chi_cdf_even(k: int, x: float) -> float:
    """cdf of chi(2k): 1 - exp(-x^2/2) * sum_{j<k} (x^2/2)^j / j!."""
    _check_chi_args(k, x)
    half = x * x / 2
    term = 1.0
    acc = 1.0
    for j in range(1, k):
        term *= half / j
        acc += term
    return max(0.0, 1.0 - math.exp(-half) * acc)


def chi_pdf_even(k: int, x: float) -> float:
    """Density x^(2k-1) exp(-x^2/2) / (2^(k-1) (k-1)!)."""
    _check_chi_args(k, x)
    if x == 0:
        return 0.0
    log_density = ((2 * k - 1) * math.log(x) - x * x / 2
                   - (k - 1) * math.log(2) - math.lgamma(k))
    return math.exp(log_density)


def chi_moment(k: int, m: int) -> float:
    """E[X^m] = 2^(m/2) Gamma(m/2 + k) / Gamma(k) for X ~ chi(2k)."""
    if k < 1:
        raise SupportError(f'k must be >= 1, got {k}')
    if m < 0:
        raise SupportError(f'm must be >= 0, got {m}')
    return math.exp(m / 2 * math.log(2) + math.lgamma(m / 2 + k) - math.lgamma(k))


def local_pmf_approx(n: int, k: int, s: int) -> Optional[float]:
    """
    Local limit approximation chi_pdf_even(k, x) / sqrt(n/2) of P(l_k = s).

    Returns None when x exceeds n^(1/7), outside the range where the
    approximation is uniform.
    """
    if k < 1:
        raise SupportError(f'k must be >= 1, got {k}')
    x = rescale(n, s).x
    if x > n ** (1 / 7):
        return None
    return chi_pdf_even(k, x) / math.sqrt(n / 2)


def _mean_coefficient(k: int) -> float:
    return math.sqrt(2 * math.pi) * k * math.comb(2 * k, k) / 4 ** k


def asymptotic_mean(n: int, k: int, crude: bool = False) -> float:
    """
    n - sqrt(n/2) * sqrt(2 pi) k C(2k,k) / 4^k, or n - sqrt(kn) with ``crude``.
    """
    if k < 1:
        raise SupportError(f'k must be >= 1, got {k}')
    if crude:
        return n - math.sqrt(k * n)
    return n - math.sqrt(n / 2) * _mean_coefficient(k)


def asymptotic_var(n: int, k: int) -> float:
    """(k - pi k^2 C(2k,k)^2 / 16^k) * n."""
    if k < 1:
        raise SupportError(f'k must be >= 1, got {k}')
    return (k - math.pi * k * k * math.comb(2 * k, k) ** 2 / 16 ** k) * n


# =============================================================================
# COALESCENT TIME LENGTHS
# =============================================================================

def expected_external_time(n: int, s: int) -> float:
    """
    Expected coalescent time length of an external branch of discrete length s.

    The branch spans the layers i = n-s+1..n with E(tau_i) = 1/C(i,2), which
    telescopes to 2/(n-s) - 2/n.
    """
    if not 0 <= s < n:
        raise SupportError(f's must lie in [0, {n - 1}], got {s}')
    return 2 / (n - s) - 2 / n


def asymptotic_kth_time_mean(n: int, k: int) -> float:
    """Plug-in approximation 2/sqrt(kn) of the mean k-th time length."""
    if k < 1 or n < 1:
        raise SupportError(f'need n, k >= 1, got n={n}, k={k}')
    return 2 / math.sqrt(k * n)


def limit_kth_time_mean(n: int, k: int) -> float:
    """
    E[2/(n - l_k) - 2/n] with n - l_k replaced by its chi(2k) limit.

    Uses E[1/X] = Gamma(k - 1/2) / (sqrt(2) Gamma(k)), which gives
    2 Gamma(k - 1/2) / (Gamma(k) sqrt(n)) - 2/n. Larger than the plug-in
    value 2/sqrt(kn) by about sqrt(k) Gamma(k - 1/2) / Gamma(k).
    """
    if k < 1 or n < 1:
        raise SupportError(f'need n, k >= 1, got n={n}, k={k}')
    ratio = math.exp(math.lgamma(k - 0.5) - math.lgamma(k))
    return 2 * ratio / math.sqrt(n) - 2 / n


def exact_kth_time_mean(n: int, k: int, backend: str = 'auto') -> float:
    """sum_s P(l_k = s) (2/(n-s) - 2/n) over the finite-n table."""
    table = distribution_table(n, k, backend=backend)
    return math.fsum(float(p) * expected_external_time(n, s) for s, p in table.entries.items())


# =============================================================================
# EXACT TABLES ON THE RESCALED AXIS
# =============================================================================

def _threshold(n: int, x: float) -> int:
    """ceil(n - x sqrt(n/2)), snapping values that are integers up to rounding."""
    t = n - x * math.sqrt(n / 2)
    nearest = round(t)
    if abs(t - nearest) < 1e-9:
        return int(nearest)
    return math.ceil(t)


def rescaled_cdf_exact(table: DistributionTable, x: float) -> float:
    """P((n - l_k)/sqrt(n/2) <= x) = P(l_k >= ceil(n - x sqrt(n/2)))."""
    if x < 0:
        raise SupportError(f'x must be >= 0, got {x}')
    threshold = _threshold(table.n, x)
    return float(sum((p for s, p in table.entries.items() if s >= threshold),
                     Fraction(0) if table.is_exact else 0.0))


def rescaled_moment_exact(table: DistributionTable, m: int) -> float:
    """E[((n - l_k)/sqrt(n/2))^m] from the table."""
    n = table.n
    if table.is_exact:
        raw = sum((p * (n - s) ** m for s, p in table.entries.items()), Fraction(0))
        return float(raw) / (n / 2) ** (m / 2)
    return math.fsum(p * ((n - s) / math.sqrt(n / 2)) ** m for s, p in table.entries.items())


class CdfGridRow(NamedTuple):
    k: int
    x: float
    exact_cdf: float
    chi_cdf: float


def cdf_grid_rows(n: int = 1000, ks: Sequence[int] = (1, 2, 3),
              grid: Sequence[float] = CDF_GRID, backend: str = 'exact') -> List[CdfGridRow]:
    """Exact rescaled cdf next to the chi(2k) cdf on ``grid`` for each k."""
    rows: List[CdfGridRow] = []
    for k in ks:
        table = distribution_table(n, k, backend=backend)
        tails = table.upper_tails()
        zero = Fraction(0) if table.is_exact else 0.0
        for x in grid:
            threshold = _threshold(n, x)
            # upper_tails is keyed by support points; find the first one >= threshold
            exact = next((tails[s] for s in sorted(tails) if s >= threshold), zero)
            rows.append(CdfGridRow(k=k, x=x, exact_cdf=float(exact), chi_cdf=chi_cdf_even(k, x)))
    logger.info('cdf grid rows n=%d ks=%s: %d rows', n, list(ks), len(rows))
    return rows


def cdf_grid_max_deviation(n: int, k: int, grid: Sequence[float] = CDF_GRID,
                       backend: str = 'exact') -> float:
    """max over the grid of |exact rescaled cdf - chi_cdf_even|."""
    return max(abs(r.exact_cdf - r.chi_cdf) for r in cdf_grid_rows(n, (k,), grid, backend))
