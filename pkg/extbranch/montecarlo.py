"""
Monte Carlo validation of the exact engine.

Replicate r always draws from ``replicate_rng(seed, r)``, so a run is fully
determined by (seed, replicates) however it is chunked across workers.
Chunk results are Counters, merged by addition.
"""

import logging
import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from scipy.stats import chi2

from .config import get_settings
from .errors import GofMismatchError, SupportError
from .exact_dist import DistributionTable, ceil_half
from .histories import OrderedHistory
from .permutations import Permutation, non_peak_array, permutation_to_tree
from .seeding import SeedLike, make_rng, replicate_rng, resolve_seed

logger = logging.getLogger(__name__)


@dataclass
class EmpiricalDistribution:
    """Observed counts of l_k over ``replicates`` sampled histories."""
    n: int
    k: int
    replicates: int
    seed: int
    counts: Dict[int, int] = field(default_factory=dict)

    def __post_init__(self):
        total = sum(self.counts.values())
        if total != self.replicates:
            raise ValueError(f'counts sum to {total}, expected {self.replicates}')
        bad = [s for s in self.counts if not 1 <= s <= self.n - self.k]
        if bad:
            raise ValueError(f'values outside [1, {self.n - self.k}]: {bad}')

    def freq(self, s: int) -> float:
        return self.counts.get(s, 0) / self.replicates

    def ecdf(self, s: int) -> float:
        return sum(c for v, c in self.counts.items() if v <= s) / self.replicates


def _check_replicates(replicates: int) -> None:
    if replicates < 1:
        raise SupportError(f'replicates must be >= 1, got {replicates}')


def _chunks(replicates: int, workers: int) -> List[Tuple[int, int]]:
    size = math.ceil(replicates / max(1, workers))
    return [(lo, min(lo + size, replicates)) for lo in range(0, replicates, size)]


def _simulate_chunk(n: int, k_max: int, seed: int, start: int, stop: int) -> List[Counter]:
    tallies = [Counter() for _ in range(k_max)]
    for r in range(start, stop):
        rng = replicate_rng(seed, r)
        values = rng.permutation(n - 1) + 1
        non_peaks = non_peak_array(values)
        for idx in range(k_max):
            tallies[idx][int(non_peaks[idx])] += 1
    return tallies


def simulate(n: int, k_max: int, replicates: int, seed: Optional[int] = None,
             workers: Optional[int] = None) -> List[EmpiricalDistribution]:
    """
    Sample ``replicates`` uniform ordered histories of size n and tally
    l_1..l_k_max. Returns one EmpiricalDistribution per k.
    """
    _check_replicates(replicates)
    if n < 2:
        raise SupportError(f'n must be >= 2, got {n}')
    if not 1 <= k_max <= ceil_half(n):
        raise SupportError(f'k_max must lie in [1, ceil(n/2)={ceil_half(n)}], got {k_max}')
    seed = resolve_seed(seed)
    if workers is None:
        workers = get_settings().default_workers
    chunks = _chunks(replicates, workers)
    logger.info('simulate n=%d k_max=%d replicates=%d seed=%d workers=%d chunks=%d',
                n, k_max, replicates, seed, workers, len(chunks))

    totals = [Counter() for _ in range(k_max)]
    if workers <= 1 or len(chunks) == 1:
        results: Iterable[List[Counter]] = (
            _simulate_chunk(n, k_max, seed, lo, hi) for lo, hi in chunks
        )
        for tallies in results:
            for total, part in zip(totals, tallies):
                total.update(part)
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_simulate_chunk, n, k_max, seed, lo, hi) for lo, hi in chunks]
            for future in futures:
                for total, part in zip(totals, future.result()):
                    total.update(part)

    return [
        EmpiricalDistribution(n=n, k=k, replicates=replicates, seed=seed,
                              counts=dict(sorted(totals[k - 1].items())))
        for k in range(1, k_max + 1)
    ]


def sample_from_table(table: DistributionTable, replicates: int,
                      seed: Optional[int] = None) -> EmpiricalDistribution:
    """Draw ``replicates`` values directly from an exact table."""
    _check_replicates(replicates)
    seed = resolve_seed(seed)
    support = np.array(table.support)
    probs = np.array([float(table.entries[s]) for s in table.support])
    probs /= probs.sum()
    draws = make_rng(seed).choice(support, size=replicates, p=probs)
    values, counts = np.unique(draws, return_counts=True)
    return EmpiricalDistribution(
        n=table.n, k=table.k, replicates=replicates, seed=seed,
        counts={int(v): int(c) for v, c in zip(values, counts)},
    )


# =============================================================================
# GOODNESS OF FIT
# =============================================================================

@dataclass
class GofReport:
    n: int
    k: int
    replicates: int
    seed: int
    tv: float
    ks: float
    chi_square: float
    dof: int

    @property
    def ks_critical_1pct(self) -> float:
        return 1.63 / math.sqrt(self.replicates)

    @property
    def ks_passes(self) -> bool:
        return self.ks < self.ks_critical_1pct

    @property
    def chi_square_pvalue(self) -> Optional[float]:
        """Upper tail of chi-square(dof) at the statistic; None when all cells pooled into one."""
        if self.dof < 1:
            return None
        return float(chi2.sf(self.chi_square, self.dof))

    def to_dict(self) -> Dict[str, object]:
        return {
            'n': self.n,
            'k': self.k,
            'replicates': self.replicates,
            'seed': self.seed,
            'tv': self.tv,
            'ks': self.ks,
            'ks_critical_1pct': self.ks_critical_1pct,
            'chi_square': self.chi_square,
            'dof': self.dof,
            'chi_square_pvalue': self.chi_square_pvalue,
        }


def _pooled_cells(observed: Sequence[int], expected: Sequence[float],
                  min_expected: float) -> List[Tuple[int, float]]:
    """Merge adjacent cells left to right until each expects >= min_expected."""
    cells: List[Tuple[int, float]] = []
    obs_acc, exp_acc = 0, 0.0
    for o, e in zip(observed, expected):
        obs_acc += o
        exp_acc += e
        if exp_acc >= min_expected:
            cells.append((obs_acc, exp_acc))
            obs_acc, exp_acc = 0, 0.0
    if obs_acc or exp_acc:
        if cells:
            o, e = cells.pop()
            cells.append((o + obs_acc, e + exp_acc))
        else:
            cells.append((obs_acc, exp_acc))
    return cells


def gof_compare(emp: EmpiricalDistribution, exact: DistributionTable,
                min_expected: Optional[float] = None) -> GofReport:
    """
    Total variation, Kolmogorov-Smirnov and pooled chi-square distances
    between an empirical tally and an exact table of the same (n, k).
    """
    if (emp.n, emp.k) != (exact.n, exact.k):
        raise GofMismatchError(
            f'empirical (n={emp.n}, k={emp.k}) vs exact (n={exact.n}, k={exact.k})'
        )
    if min_expected is None:
        min_expected = get_settings().chi_square_min_expected

    R = emp.replicates
    points = sorted(set(emp.counts) | set(exact.entries))
    probs = [float(exact.prob(s)) for s in points]
    freqs = [emp.counts.get(s, 0) / R for s in points]

    tv = 0.5 * math.fsum(abs(f - p) for f, p in zip(freqs, probs))
    ks = float(np.max(np.abs(np.cumsum(freqs) - np.cumsum(probs))))

    cells = _pooled_cells([emp.counts.get(s, 0) for s in points],
                          [p * R for p in probs], min_expected)
    chi_square = math.fsum((o - e) ** 2 / e for o, e in cells if e > 0)

    report = GofReport(n=emp.n, k=emp.k, replicates=R, seed=emp.seed, tv=tv, ks=ks,
                       chi_square=chi_square, dof=max(0, len(cells) - 1))
    logger.debug('gof n=%d k=%d: tv=%.5f ks=%.5f chi2=%.3f dof=%d',
                 report.n, report.k, tv, ks, chi_square, report.dof)
    return report


# =============================================================================
# COALESCENT TIMES
# =============================================================================

@dataclass(frozen=True)
class CoalescentSample:
    """
    A uniform ordered history with coalescent layer times.

    ``layer_times[i - 2]`` is tau_i ~ Exp(C(i, 2)), the time during which
    exactly i lineages exist, for i = 2..n.
    """
    tree: OrderedHistory
    layer_times: Tuple[float, ...]

    def __post_init__(self):
        if len(self.layer_times) != self.tree.n - 1:
            raise ValueError(
                f'expected {self.tree.n - 1} layer times, got {len(self.layer_times)}'
            )
        if any(t <= 0 for t in self.layer_times):
            raise ValueError('layer times must be positive')

    def node_time(self, rank: int) -> float:
        """Time above the leaves of the node of rank r: tau_{n-r+1} + ... + tau_n."""
        n = self.tree.n
        if not 1 <= rank <= n - 1:
            raise SupportError(f'rank must lie in [1, {n - 1}], got {rank}')
        return math.fsum(self.layer_times[n - rank - 1:])

    def external_branch_times(self) -> Dict[int, float]:
        """Time length of each distinct external branch length."""
        t = self.tree
        return {r: self.node_time(r) for r in range(t.n - 1, 0, -1) if t.leaf_children(r)}


def _layer_rates(n: int) -> np.ndarray:
    i = np.arange(2, n + 1, dtype=float)
    return i * (i - 1) / 2


def _draw(rng: np.random.Generator, n: int) -> Tuple[np.ndarray, np.ndarray]:
    """One uniform permutation of 1..n-1, then tau_2..tau_n, in that order."""
    values = rng.permutation(n - 1) + 1
    taus = rng.exponential(1.0 / _layer_rates(n))
    return values, taus


def sample_coalescent(n: int, seed: SeedLike) -> CoalescentSample:
    if n < 2:
        raise SupportError(f'n must be >= 2, got {n}')
    values, taus = _draw(make_rng(seed), n)
    tree = permutation_to_tree(Permutation(tuple(values.tolist())))
    return CoalescentSample(tree=tree, layer_times=tuple(taus.tolist()))


class TimeStats(NamedTuple):
    mean: float
    stderr: float
    replicates: int


def _time_stats(samples: Sequence[float]) -> TimeStats:
    arr = np.asarray(samples, dtype=float)
    if arr.size == 0:
        return TimeStats(mean=math.nan, stderr=math.nan, replicates=0)
    stderr = float(arr.std(ddof=1) / math.sqrt(arr.size)) if arr.size > 1 else math.nan
    return TimeStats(mean=float(arr.mean()), stderr=stderr, replicates=int(arr.size))


def external_time_by_length(n: int, lengths: Sequence[int], replicates: int,
                            seed: Optional[int] = None) -> Dict[int, TimeStats]:
    """
    Monte Carlo mean time length of external branches with given discrete
    lengths. A replicate contributes to s only when s is an external length
    of its tree, once per length value.
    """
    _check_replicates(replicates)
    if n < 2:
        raise SupportError(f'n must be >= 2, got {n}')
    bad = [s for s in lengths if not 1 <= s <= n - 1]
    if bad:
        raise SupportError(f'lengths must lie in [1, {n - 1}], got {bad}')
    seed = resolve_seed(seed)
    wanted = np.array(sorted(set(lengths)))
    samples: Dict[int, List[float]] = {int(s): [] for s in wanted}
    logger.info('external times n=%d lengths=%s replicates=%d seed=%d',
                n, wanted.tolist(), replicates, seed)
    for r in range(replicates):
        values, taus = _draw(replicate_rng(seed, r), n)
        # node of rank s sits at the suffix sum of tau from layer n-s+1
        suffix = np.cumsum(taus[::-1])[::-1]
        present = np.intersect1d(non_peak_array(values), wanted)
        for s in present.tolist():
            samples[s].append(float(suffix[n - s - 1]))
    return {s: _time_stats(v) for s, v in samples.items()}


def kth_time_length_stats(n: int, k: int, replicates: int,
                          seed: Optional[int] = None) -> TimeStats:
    """Monte Carlo mean and standard error of the time length at l_k."""
    _check_replicates(replicates)
    if n < 2:
        raise SupportError(f'n must be >= 2, got {n}')
    if not 1 <= k <= ceil_half(n):
        raise SupportError(f'k must lie in [1, ceil(n/2)={ceil_half(n)}], got {k}')
    seed = resolve_seed(seed)
    logger.info('k-th time length n=%d k=%d replicates=%d seed=%d', n, k, replicates, seed)
    times = []
    for r in range(replicates):
        values, taus = _draw(replicate_rng(seed, r), n)
        s = int(non_peak_array(values)[k - 1])
        times.append(math.fsum(taus[n - s - 1:]))
    return _time_stats(times)
