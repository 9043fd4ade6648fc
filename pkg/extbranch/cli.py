#!/usr/bin/env python3
"""
extbranch command line

Single entry point for exact tables, the chi(2k) comparison grid, oracle
verification, sampling, simulation, moments and coalescent time lengths.
Data goes to stdout (or --out); logs go to stderr.

Usage:
    # Exact pmf of l_2 at n = 50
    python -m extbranch.cli exact-table --n 50 --k 2

    # Exact rescaled cdf against the chi(2k) cdf, k = 1..3
    python -m extbranch.cli fig3 --n 1000

    # Exact engine against exhaustive enumeration, n <= 9
    python -m extbranch.cli verify-oracle --html report.html

    # Seeded Monte Carlo, four processes
    python -m extbranch.cli simulate --n 100 --k-max 3 --replicates 100000 --seed 42 --workers 4

Exit codes: 0 success, 1 verification failure, 2 usage error.
"""

import argparse
import logging
import math
import sys
from fractions import Fraction
from typing import Any, Dict, List, Literal, Optional, Sequence

from pydantic import BaseModel, Field, ValidationError

from . import exact_dist
from .asymptotics import (
    asymptotic_mean,
    asymptotic_var,
    cdf_grid_rows,
    expected_external_time,
)
from .config import get_settings
from .errors import ExtBranchError
from .exact_dist import DistributionTable, ceil_half
from .histories import external_branch_profile, sample_uniform, sample_yule_growth, to_newick
from .metrics_collector import VerificationCollector, reset_verification_collector
from .montecarlo import external_time_by_length, gof_compare, simulate
from .permutations import format_permutation, tree_to_permutation
from .report_generator import (
    CDF_GRID_HEADER,
    COALESCENT_HEADER,
    MOMENTS_HEADER,
    SIMULATE_HEADER,
    emit,
    format_csv,
    format_json,
    generate_console_report,
    generate_html_report,
    generate_json_report,
    metadata_line,
    table_csv,
    table_json,
)
from .seeding import replicate_seed, resolve_seed

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VERIFICATION_FAILED = 1
EXIT_USAGE = 2

COMMANDS = ('exact-table', 'fig3', 'verify-oracle', 'sample', 'simulate', 'moments', 'coalescent')
SAMPLE_HEADER = ('replicate', 'newick', 'permutation', 'profile')


class RunConfig(BaseModel):
    """Validated options of one invocation; dumped into every output as metadata."""
    command: Literal['exact-table', 'fig3', 'verify-oracle', 'sample', 'simulate',
                     'moments', 'coalescent']
    n: Optional[int] = Field(default=None, ge=2)
    k: Optional[int] = Field(default=None, ge=1)
    k_max: Optional[int] = Field(default=None, ge=1)
    s: Optional[int] = Field(default=None, ge=1)
    replicates: Optional[int] = Field(default=None, ge=1)
    seed: Optional[int] = Field(default=None, ge=0)
    backend: Literal['exact', 'float', 'auto'] = 'exact'
    workers: int = Field(default=1, ge=1)
    format: Literal['csv', 'json'] = 'csv'
    sampler: Literal['uniform', 'growth'] = 'uniform'
    out: Optional[str] = None
    html: Optional[str] = None

    def metadata(self) -> Dict[str, Any]:
        # output paths differ between otherwise identical runs
        return {'command': self.command,
                'config': self.model_dump(exclude={'command', 'out', 'html'})}


class UsageError(ExtBranchError, ValueError):
    """Invocation is missing or mixes options."""


def _require(config: RunConfig, *names: str) -> None:
    missing = [f'--{name.replace("_", "-")}' for name in names if getattr(config, name) is None]
    if missing:
        raise UsageError(f'{config.command} requires {", ".join(missing)}')


def _write(config: RunConfig, text: str) -> None:
    emit(text, config.out)
    if config.out:
        logger.info('wrote %s', config.out)


# =============================================================================
# COMMANDS
# =============================================================================

def cmd_exact_table(config: RunConfig) -> int:
    _require(config, 'n', 'k')
    table = exact_dist.distribution_table(config.n, config.k, backend=config.backend)
    if config.s is not None:
        table = DistributionTable(n=table.n, k=table.k, backend=table.backend,
                                  entries={config.s: table.prob(config.s)})
    if config.format == 'json':
        _write(config, table_json(table, config.metadata()))
    else:
        _write(config, table_csv(table, config.metadata()))
    return EXIT_OK


def cmd_fig3(config: RunConfig) -> int:
    n = config.n if config.n is not None else 1000
    k_max = config.k_max if config.k_max is not None else 3
    if n < 2 * k_max + 1:
        raise UsageError(f'fig3 needs n >= {2 * k_max + 1} for k up to {k_max}, got {n}')
    config = config.model_copy(update={'n': n, 'k_max': k_max})
    rows = cdf_grid_rows(n, tuple(range(1, k_max + 1)), backend=config.backend)
    if config.format == 'json':
        _write(config, format_json({'n': n, 'rows': [r._asdict() for r in rows]},
                                   config.metadata()))
    else:
        csv_rows = [(r.k, r.x, repr(r.exact_cdf), repr(r.chi_cdf)) for r in rows]
        _write(config, format_csv(CDF_GRID_HEADER, csv_rows, config.metadata()))
    return EXIT_OK


def run_oracle_suite(bound: int, collector: VerificationCollector) -> VerificationCollector:
    """
    Compare every exact route with exhaustive enumeration for 2 <= n <= bound.

    Functions are looked up on the ``exact_dist`` module at call time.
    """
    collector.start_run()
    for n in range(2, bound + 1):
        logger.info('verifying n=%d', n)
        for k in range(1, ceil_half(n) + 1):
            oracle = exact_dist.bruteforce_table(n, k, bound=bound)

            if k == 1:
                with collector.timed('pmf_ell1'):
                    for s in range(1, n):
                        collector.record('pmf_ell1', n, k, s,
                                         expected=oracle.prob(s), got=exact_dist.pmf_ell1(n, s))

            with collector.timed('distribution_table'):
                table = exact_dist.distribution_table(n, k, bound=bound)
                for s in range(1, n - k + 1):
                    collector.record('distribution_table', n, k, s,
                                     expected=oracle.prob(s), got=table.prob(s))

            if k == 2 and n >= 5:
                with collector.timed('pmf_ell2_closed'):
                    for s in range(ceil_half(n) - 1, n - 1):
                        collector.record('pmf_ell2_closed', n, k, s, expected=oracle.prob(s),
                                         got=exact_dist.pmf_ell2_closed(n, s))
            if k == 3 and n >= 7:
                with collector.timed('pmf_ell3_closed'):
                    for s in range(ceil_half(n) - 2, n - 2):
                        collector.record('pmf_ell3_closed', n, k, s, expected=oracle.prob(s),
                                         got=exact_dist.pmf_ell3_closed(n, s))
    collector.end_run()
    return collector


def cmd_verify_oracle(config: RunConfig) -> int:
    bound = config.n if config.n is not None else get_settings().oracle_default_bound
    if bound > 10:
        raise UsageError(f'verify-oracle enumerates (n-1)! permutations; use --n <= 10, got {bound}')
    config = config.model_copy(update={'n': bound})
    collector = run_oracle_suite(bound, reset_verification_collector())

    if config.format == 'json':
        report = generate_json_report(collector, metadata=config.metadata())
        _write(config, format_json({k: v for k, v in report.items() if k != 'metadata'},
                                   config.metadata()))
    else:
        text = generate_console_report(collector)
        _write(config, metadata_line(config.metadata()) + '\n' + text)
    if config.html:
        generate_html_report(collector, config.html, metadata=config.metadata())
        logger.info('wrote %s', config.html)

    if not collector.passed:
        logger.error('oracle verification failed: %d mismatches', len(collector.get_failures()))
        return EXIT_VERIFICATION_FAILED
    return EXIT_OK


def cmd_sample(config: RunConfig) -> int:
    _require(config, 'n')
    replicates = config.replicates or 1
    seed = config.seed
    config = config.model_copy(update={'replicates': replicates})
    sampler = sample_uniform if config.sampler == 'uniform' else sample_yule_growth

    rows = []
    for r in range(replicates):
        tree = sampler(config.n, replicate_seed(seed, r))
        rows.append({
            'replicate': r,
            'newick': to_newick(tree),
            'permutation': format_permutation(tree_to_permutation(tree)),
            'profile': ' '.join(str(v) for v in external_branch_profile(tree)),
        })
    if config.format == 'json':
        _write(config, format_json({'samples': rows}, config.metadata()))
    else:
        _write(config, format_csv(SAMPLE_HEADER, [[row[h] for h in SAMPLE_HEADER] for row in rows],
                                  config.metadata()))
    return EXIT_OK


def cmd_simulate(config: RunConfig) -> int:
    _require(config, 'n')
    k_max = config.k_max or config.k or 1
    replicates = config.replicates or 10_000
    seed = config.seed
    config = config.model_copy(update={'k_max': k_max, 'replicates': replicates})

    empiricals = simulate(config.n, k_max, replicates, seed=seed, workers=config.workers)
    rows: List[Sequence[Any]] = []
    reports = []
    for emp in empiricals:
        exact = exact_dist.distribution_table(config.n, emp.k, backend=config.backend)
        for s, count in emp.counts.items():
            rows.append((emp.k, s, count, repr(count / replicates), repr(float(exact.prob(s)))))
        reports.append(gof_compare(emp, exact).to_dict())

    if config.format == 'json':
        _write(config, format_json({
            'histograms': [{'k': e.k, 'counts': e.counts} for e in empiricals],
            'gof': reports,
        }, config.metadata()))
    else:
        _write(config, format_csv(SIMULATE_HEADER, rows, config.metadata()))
    return EXIT_OK


def _table_mean_var(table: DistributionTable):
    if table.is_exact:
        mean = sum((s * p for s, p in table.entries.items()), Fraction(0))
        second = sum((s * s * p for s, p in table.entries.items()), Fraction(0))
        return float(mean), float(second - mean * mean)
    mean = math.fsum(s * p for s, p in table.entries.items())
    return mean, math.fsum((s - mean) ** 2 * p for s, p in table.entries.items())


def cmd_moments(config: RunConfig) -> int:
    _require(config, 'n')
    n = config.n
    ks = [config.k] if config.k is not None else list(range(1, (config.k_max or 1) + 1))
    rows = []
    for k in ks:
        if config.backend == 'exact':
            mean_q, var_q = exact_dist.exact_mean_var(n, k)
            mean, var = float(mean_q), float(var_q)
        else:
            mean, var = _table_mean_var(exact_dist.distribution_table(n, k, backend=config.backend))
        a_mean, a_var = asymptotic_mean(n, k), asymptotic_var(n, k)
        rows.append({
            'n': n, 'k': k,
            'exact_mean': mean, 'exact_var': var,
            'asymptotic_mean': a_mean, 'asymptotic_var': a_var,
            'mean_ratio': mean / a_mean, 'var_ratio': var / a_var,
        })
    if config.format == 'json':
        _write(config, format_json({'rows': rows}, config.metadata()))
    else:
        _write(config, format_csv(
            MOMENTS_HEADER,
            [[row[h] if h in ('n', 'k') else repr(row[h]) for h in MOMENTS_HEADER] for row in rows],
            config.metadata(),
        ))
    return EXIT_OK


def default_length_grid(n: int, points: int = 5) -> List[int]:
    """``points`` distinct lengths spread evenly over [1, n-1]."""
    if n - 1 <= points:
        return list(range(1, n))
    return sorted({1 + round(i * (n - 2) / (points - 1)) for i in range(points)})


def cmd_coalescent(config: RunConfig) -> int:
    _require(config, 'n')
    n = config.n
    replicates = config.replicates or 10_000
    seed = config.seed
    config = config.model_copy(update={'replicates': replicates})
    lengths = [config.s] if config.s is not None else default_length_grid(n)

    stats = external_time_by_length(n, lengths, replicates, seed=seed)
    rows = [
        (n, s, st.replicates, repr(st.mean), repr(st.stderr), repr(expected_external_time(n, s)))
        for s, st in stats.items()
    ]
    if config.format == 'json':
        _write(config, format_json({'rows': [dict(zip(COALESCENT_HEADER, r)) for r in rows]},
                                   config.metadata()))
    else:
        _write(config, format_csv(COALESCENT_HEADER, rows, config.metadata()))
    return EXIT_OK


HANDLERS = {
    'exact-table': cmd_exact_table,
    'fig3': cmd_fig3,
    'verify-oracle': cmd_verify_oracle,
    'sample': cmd_sample,
    'simulate': cmd_simulate,
    'moments': cmd_moments,
    'coalescent': cmd_coalescent,
}


# =============================================================================
# ENTRY POINT
# =============================================================================

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='extbranch',
        description='External branch lengths of Yule histories: exact tables, limits, simulation',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog='''
Examples:
    extbranch exact-table --n 8 --k 1
    extbranch exact-table --n 1000 --k 2 --backend float
    extbranch fig3 --n 1000 --out fig3.csv
    extbranch verify-oracle --html oracle.html
    extbranch sample --n 10 --sampler growth --seed 7
    extbranch simulate --n 100 --k-max 3 --replicates 100000 --seed 42 --workers 4
    extbranch moments --n 1000 --k 1
    extbranch coalescent --n 50 --replicates 100000 --seed 1

Environment:
    EXTBRANCH_ENUMERATION_BOUND   largest n the permutation oracle enumerates (default 10)
    EXTBRANCH_EXACT_MAX_N         exact/float cut-over for --backend auto (default 2000)
        '''
    )
    parser.add_argument('command', choices=COMMANDS, help='What to compute')
    parser.add_argument('--n', type=int, help='Number of leaves (oracle bound for verify-oracle)')
    parser.add_argument('--k', type=int, help='Which largest external length (1 = longest)')
    parser.add_argument('--k-max', type=int, dest='k_max', help='Cover k = 1..k-max')
    parser.add_argument('--s', type=int, help='Single length value')
    parser.add_argument('--replicates', type=int, help='Monte Carlo replicates / sample count')
    parser.add_argument('--seed', type=int, help='Master seed (drawn from OS entropy if absent)')
    parser.add_argument('--backend', choices=('exact', 'float', 'auto'), default='exact',
                        help='Exact rationals, log-space floats, or auto by n')
    parser.add_argument('--workers', type=int, default=None, help='Simulation processes')
    parser.add_argument('--format', choices=('csv', 'json'), default='csv', help='Output format')
    parser.add_argument('--out', type=str, help='Output file (default stdout)')
    parser.add_argument('--sampler', choices=('uniform', 'growth'), default='uniform',
                        help='History sampler for the sample command')
    parser.add_argument('--html', type=str, help='Also write an HTML verification report')
    parser.add_argument('-v', '--verbose', action='count', default=0,
                        help='More logging on stderr (-v info, -vv debug)')
    return parser


def _configure_logging(verbosity: int) -> None:
    if verbosity >= 2:
        level = logging.DEBUG
    elif verbosity == 1:
        level = logging.INFO
    else:
        level = getattr(logging, get_settings().log_level.upper(), logging.WARNING)
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format='%(asctime)s %(levelname)s %(name)s: %(message)s',
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main entry point; returns the exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args.verbose)

    workers = args.workers if args.workers is not None else get_settings().default_workers
    try:
        config = RunConfig(
            command=args.command, n=args.n, k=args.k, k_max=args.k_max, s=args.s,
            replicates=args.replicates, seed=args.seed, backend=args.backend,
            workers=workers, format=args.format, sampler=args.sampler,
            out=args.out, html=args.html,
        )
    except ValidationError as e:
        parser.error(f'invalid options: {e.errors()[0]["loc"][0]}: {e.errors()[0]["msg"]}')
    # every output records the seed, including commands that never draw from it
    config = config.model_copy(update={'seed': resolve_seed(config.seed)})

    try:
        return HANDLERS[config.command](config)
    except ExtBranchError as e:
        parser.error(str(e))


if __name__ == '__main__':
    sys.exit(main())
