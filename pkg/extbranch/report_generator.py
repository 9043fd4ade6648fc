"""
Report Generator for extbranch

Turns tables, Monte Carlo tallies and verification runs into CSV, JSON,
console text and a standalone HTML page.

Every CSV starts with one comment line ``# extbranch <version> <metadata>``
and every JSON document carries a ``metadata`` object. Metadata never holds
timestamps, so repeated seeded runs produce identical bytes.
"""

import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence

from jinja2 import Environment, select_autoescape

from .exact_dist import DistributionTable
from .metrics_collector import VerificationCollector, get_verification_collector

TABLE_HEADER = ('n', 'k', 's', 'prob_num', 'prob_den', 'prob_float')
CDF_GRID_HEADER = ('k', 'x', 'exact_cdf', 'chi_cdf')
SIMULATE_HEADER = ('k', 's', 'count', 'freq', 'exact_prob')
MOMENTS_HEADER = ('n', 'k', 'exact_mean', 'exact_var', 'asymptotic_mean',
                  'asymptotic_var', 'mean_ratio', 'var_ratio')
COALESCENT_HEADER = ('n', 's', 'replicates', 'mean_time', 'stderr', 'expected_time')


def _version() -> str:
    from . import __version__
    return __version__


def _jsonable(value: Any) -> Any:
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, Mapping):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def metadata_line(metadata: Mapping[str, Any]) -> str:
    return f'# extbranch {_version()} {json.dumps(_jsonable(metadata), sort_keys=True)}'


def format_csv(header: Sequence[str], rows: Sequence[Sequence[Any]],
               metadata: Optional[Mapping[str, Any]] = None) -> str:
    """CSV text with the metadata comment line first."""
    buf = io.StringIO()
    if metadata is not None:
        buf.write(metadata_line(metadata) + '\n')
    writer = csv.writer(buf, lineterminator='\n')
    writer.writerow(header)
    for row in rows:
        writer.writerow(['' if v is None else v for v in row])
    return buf.getvalue()


def format_json(document: Mapping[str, Any], metadata: Mapping[str, Any]) -> str:
    body = {'metadata': {'artifact': 'extbranch', 'version': _version(), **metadata}}
    body.update(document)
    return json.dumps(_jsonable(body), indent=2, sort_keys=False) + '\n'


def emit(text: str, out: Optional[str] = None) -> None:
    """Write to ``out`` or stdout."""
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# =============================================================================
# TABLES
# =============================================================================

def table_rows(table: DistributionTable) -> List[List[Any]]:
    """Rows for TABLE_HEADER; num/den are empty for float tables."""
    rows = []
    for s in table.support:
        p = table.entries[s]
        if isinstance(p, Fraction):
            rows.append([table.n, table.k, s, p.numerator, p.denominator, repr(float(p))])
        else:
            rows.append([table.n, table.k, s, None, None, repr(float(p))])
    return rows


def table_csv(table: DistributionTable, metadata: Mapping[str, Any]) -> str:
    return format_csv(TABLE_HEADER, table_rows(table), metadata)


def table_json(table: DistributionTable, metadata: Mapping[str, Any]) -> str:
    entries = []
    for s in table.support:
        p = table.entries[s]
        exact = isinstance(p, Fraction)
        entries.append({
            's': s,
            'num': str(p.numerator) if exact else None,
            'den': str(p.denominator) if exact else None,
            'float': float(p),
        })
    return format_json({'n': table.n, 'k': table.k, 'backend': table.backend,
                        'entries': entries}, metadata)


# =============================================================================
# VERIFICATION REPORTS
# =============================================================================

def generate_json_report(collector: Optional[VerificationCollector] = None,
                         output_path: Optional[str] = None,
                         metadata: Optional[Mapping[str, Any]] = None) -> Dict[str, Any]:
    """Verification summary plus every mismatch."""
    if collector is None:
        collector = get_verification_collector()
    report = {
        'metadata': {'artifact': 'extbranch', 'version': _version(), **(metadata or {})},
        'summary': collector.get_summary(),
        'failures': collector.get_failures(),
    }
    if output_path:
        Path(output_path).write_text(json.dumps(report, indent=2))
    return report


def generate_console_report(collector: Optional[VerificationCollector] = None) -> str:
    """Console-friendly text report."""
    if collector is None:
        collector = get_verification_collector()

    summary = collector.get_summary()
    failures = collector.get_failures()
    totals = summary['totals']

    lines = [
        "",
        "=" * 60,
        "EXTBRANCH ORACLE VERIFICATION",
        "=" * 60,
        "",
        f"Run Duration: {summary['run_info']['run_duration_ms'] / 1000:.1f}s",
        "",
        "SUMMARY",
        "-" * 40,
        f"  Comparisons:  {totals['comparisons']}",
        f"  Matched:      {totals['matched']}",
        f"  Mismatched:   {totals['mismatched']}",
        f"  Result:       {'PASS' if totals['passed'] else 'FAIL'}",
        "",
        "BY CHECK",
        "-" * 40,
    ]
    for name, metrics in summary['by_check'].items():
        lines.append(
            f"  {name:20s} "
            f"{metrics['matched']:5d}/{metrics['total']:5d} exact "
            f"[{metrics['duration_ms'] / 1000:.1f}s]"
        )

    if failures:
        lines.extend(["", "MISMATCHES", "-" * 40])
        for f in failures[:20]:
            lines.append(
                f"  [{f['check']}] n={f['n']} k={f['k']} s={f['s']}: "
                f"expected {f['expected']}, got {f['got']}"
            )
        if len(failures) > 20:
            lines.append(f"  ... and {len(failures) - 20} more")

    lines.extend(["", "=" * 60, ""])
    return "\n".join(lines)


_HTML_TEMPLATE = """<!DOCTYPE html>
<html lang="en">
<head>
    <meta charset="UTF-8">
    <title>extbranch oracle verification</title>
    <style>
        body { font-family: -apple-system, BlinkMacSystemFont, 'Segoe UI', Roboto, sans-serif;
               background: #f5f5f5; color: #333; line-height: 1.6; }
        .container { max-width: 1000px; margin: 0 auto; padding: 20px; }
        .header { background: {{ '#48BB78' if totals.passed else '#F56565' }}; color: white;
                  padding: 24px; border-radius: 8px; margin-bottom: 20px; }
        .section { background: white; border-radius: 8px; padding: 20px; margin-bottom: 20px;
                   box-shadow: 0 2px 4px rgba(0,0,0,0.1); }
        table { width: 100%; border-collapse: collapse; }
        th, td { text-align: left; padding: 8px; border-bottom: 1px solid #eee; }
        th { background: #f9f9f9; font-size: 12px; text-transform: uppercase; color: #666; }
        code { font-size: 11px; }
    </style>
</head>
<body>
<div class="container">
    <div class="header">
        <h1>Oracle verification: {{ 'PASS' if totals.passed else 'FAIL' }}</h1>
        <div>extbranch {{ version }} &middot; {{ totals.matched }}/{{ totals.comparisons }} exact matches
             &middot; {{ '%.1f' % (run_info.run_duration_ms / 1000) }}s</div>
    </div>

    <div class="section">
        <h2>Results by check</h2>
        <table>
            <thead><tr><th>Check</th><th>Total</th><th>Matched</th><th>Mismatched</th><th>Duration</th></tr></thead>
            <tbody>
            {% for name, m in by_check.items() %}
                <tr><td><strong>{{ name }}</strong></td><td>{{ m.total }}</td><td>{{ m.matched }}</td>
                    <td>{{ m.mismatched }}</td><td>{{ '%.2f' % (m.duration_ms / 1000) }}s</td></tr>
            {% endfor %}
            </tbody>
        </table>
    </div>

    {% if failures %}
    <div class="section">
        <h2>Mismatches ({{ failures | length }})</h2>
        <table>
            <thead><tr><th>Check</th><th>n</th><th>k</th><th>s</th><th>Expected</th><th>Got</th></tr></thead>
            <tbody>
            {% for f in failures[:50] %}
                <tr><td>{{ f.check }}</td><td>{{ f.n }}</td><td>{{ f.k }}</td><td>{{ f.s }}</td>
                    <td><code>{{ f.expected }}</code></td><td><code>{{ f.got }}</code></td></tr>
            {% endfor %}
            </tbody>
        </table>
    </div>
    {% endif %}

    <div class="section">
        <h2>Configuration</h2>
        <code>{{ metadata_json }}</code>
    </div>
</div>
</body>
</html>
"""

_env = Environment(autoescape=select_autoescape(default=True))


def generate_html_report(collector: Optional[VerificationCollector] = None,
                         output_path: Optional[str] = None,
                         metadata: Optional[Mapping[str, Any]] = None) -> str:
    """Standalone HTML page for a verification run."""
    if collector is None:
        collector = get_verification_collector()
    summary = collector.get_summary()
    html = _env.from_string(_HTML_TEMPLATE).render(
        version=_version(),
        totals=summary['totals'],
        run_info=summary['run_info'],
        by_check=summary['by_check'],
        failures=collector.get_failures(),
        metadata_json=json.dumps(_jsonable(metadata or {}), sort_keys=True),
    )
    if output_path:
        Path(output_path).write_text(html)
    return html
