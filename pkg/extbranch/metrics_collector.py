"""
Verification record collection.

Collects one record per exact-vs-oracle comparison made by the
``verify-oracle`` command and aggregates them by check:
- match/mismatch counts
- located mismatches (n, k, s, expected, got)
- time spent per check
"""

import time
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Iterator, List, Optional


@dataclass
class VerificationRecord:
    """Outcome of comparing one probability against the oracle."""
    check: str
    n: int
    k: int
    s: int
    expected: Fraction
    got: Fraction

    @property
    def status(self) -> str:
        return 'match' if self.expected == self.got else 'mismatch'

    def to_dict(self) -> Dict[str, Any]:
        return {
            'check': self.check,
            'n': self.n,
            'k': self.k,
            's': self.s,
            'expected': str(self.expected),
            'got': str(self.got),
            'status': self.status,
        }


@dataclass
class CheckMetrics:
    """Records aggregated by check name."""
    check: str
    total: int = 0
    matched: int = 0
    mismatched: int = 0
    duration_ms: int = 0

    @property
    def match_rate(self) -> float:
        if self.total == 0:
            return 0.0
        return (self.matched / self.total) * 100

    def to_dict(self) -> Dict[str, Any]:
        return {
            'check': self.check,
            'total': self.total,
            'matched': self.matched,
            'mismatched': self.mismatched,
            'match_rate': round(self.match_rate, 1),
            'duration_ms': self.duration_ms,
        }


class VerificationCollector:
    """
    Collects comparison records during a verification sweep.

    Usage:
        collector = VerificationCollector()
        collector.start_run()
        with collector.timed('pmf_ell1'):
            collector.record('pmf_ell1', n=4, k=1, s=3, expected=Fraction(2, 3), got=...)
        collector.end_run()
        summary = collector.get_summary()
    """

    def __init__(self):
        self.records: List[VerificationRecord] = []
        self._durations: Dict[str, float] = {}
        self._started: Optional[float] = None
        self._elapsed: float = 0.0

    def start_run(self) -> None:
        self.records = []
        self._durations = {}
        self._started = time.perf_counter()

    def end_run(self) -> None:
        if self._started is not None:
            self._elapsed = time.perf_counter() - self._started

    @contextmanager
    def timed(self, check: str) -> Iterator[None]:
        """Add the wall time of the block to ``check``."""
        start = time.perf_counter()
        try:
            yield
        finally:
            self._durations[check] = self._durations.get(check, 0.0) + time.perf_counter() - start

    def record(self, check: str, n: int, k: int, s: int,
               expected: Fraction, got: Fraction) -> VerificationRecord:
        rec = VerificationRecord(check=check, n=n, k=k, s=s,
                                 expected=Fraction(expected), got=Fraction(got))
        self.records.append(rec)
        return rec

    @property
    def passed(self) -> bool:
        return all(r.status == 'match' for r in self.records)

    def checks(self) -> List[str]:
        """Check names in first-seen order."""
        return list(dict.fromkeys(r.check for r in self.records))

    def get_check_metrics(self, check: str) -> CheckMetrics:
        cm = CheckMetrics(check=check, duration_ms=int(self._durations.get(check, 0.0) * 1000))
        for r in self.records:
            if r.check != check:
                continue
            cm.total += 1
            if r.status == 'match':
                cm.matched += 1
            else:
                cm.mismatched += 1
        return cm

    def get_summary(self) -> Dict[str, Any]:
        total = len(self.records)
        matched = sum(1 for r in self.records if r.status == 'match')
        return {
            'run_info': {
                'run_duration_ms': int(self._elapsed * 1000),
            },
            'totals': {
                'comparisons': total,
                'matched': matched,
                'mismatched': total - matched,
                'match_rate': round(matched / total * 100, 1) if total > 0 else 0,
                'passed': self.passed,
            },
            'by_check': {c: self.get_check_metrics(c).to_dict() for c in self.checks()},
        }

    def get_failures(self) -> List[Dict[str, Any]]:
        return [r.to_dict() for r in self.records if r.status != 'match']


_collector: Optional[VerificationCollector] = None


def get_verification_collector() -> VerificationCollector:
    """Get or create the global collector."""
    global _collector
    if _collector is None:
        _collector = VerificationCollector()
    return _collector


def reset_verification_collector() -> VerificationCollector:
    """Reset and return a fresh collector."""
    global _collector
    _collector = VerificationCollector()
    return _collector
