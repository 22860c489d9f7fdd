"""Report serialization: every report is written as CSV with a frozen
column order plus a JSON mirror using the same field names. Rows are fully
sorted so identical inputs always produce byte-identical files."""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path

from .adoption import (
    AdoptionRecord,
    DeprecatedUsageReport,
    UnusedTermsReport,
    VocabAdoptionStats,
)
from .diff import ChangeLog, SelectionVerdict

CHANGE_LOG_HEADER = ["vocab_id", "term", "kind", "from", "to"]
CHANGE_SUMMARY_HEADER = ["vocab_id", "versions", "changes"]
SELECTION_HEADER = ["vocab_id", "eligible", "reasons"]
ADOPTION_HEADER = [
    "vocab_id",
    "term",
    "publish_date",
    "first_use",
    "lag_days",
    "instance_count",
    "adopting_plds",
]
VOCAB_STATS_HEADER = [
    "vocab_id",
    "new_terms",
    "adopted_terms",
    "pct_used",
    "total_instances",
    "mu_days",
    "sigma_days",
]
UNUSED_HEADER = ["vocab_id", "total_terms", "unused", "pct_unused"]
DEPRECATED_USAGE_HEADER = ["vocab_id", "term", "deprecation_date", "snapshot_date", "count"]
DEPRECATED_PLDS_HEADER = ["vocab_id", "term", "deprecation_date", "pld", "count"]
TOP_PLDS_HEADER = ["vocab_id", "rank", "pld", "count"]
TOP_PLDS_OVERALL_HEADER = ["rank", "pld", "count"]
TIMESERIES_HEADER = ["vocab_id", "snapshot_date", "count"]
VERSION_MARKERS_HEADER = ["vocab_id", "version_date"]


def write_report(base_path: str | Path, header: list[str], rows: list[list]) -> None:
    """Write `<base>.csv` and its JSON mirror `<base>.json` atomically
    enough for our purposes; rows are written exactly as given."""
    base_path = Path(base_path)
    base_path.parent.mkdir(parents=True, exist_ok=True)
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    base_path.with_suffix(".csv").write_text(buffer.getvalue(), encoding="utf-8")
    mirror = [dict(zip(header, row)) for row in rows]
    base_path.with_suffix(".json").write_text(
        json.dumps(mirror, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def fmt_days(value: float | None) -> str:
    """Fixed two-decimal rendering for day statistics; empty when absent."""
    return "" if value is None else f"{value:.2f}"


def change_log_rows(log: ChangeLog) -> list[list]:
    return [
        [
            log.vocab_id,
            e.term_iri,
            e.kind,
            e.from_version.isoformat() if e.from_version else "",
            e.to_version.isoformat(),
        ]
        for e in log.events
    ]


def change_summary_rows(logs: list[ChangeLog]) -> list[list]:
    return [
        [log.vocab_id, len(log.versions), log.total_changes]
        for log in sorted(logs, key=lambda l: l.vocab_id)
    ]


def selection_rows(verdicts: list[SelectionVerdict]) -> list[list]:
    return [
        [v.vocab_id, "true" if v.eligible else "false", ";".join(v.reasons)]
        for v in sorted(verdicts, key=lambda v: v.vocab_id)
    ]


def adoption_rows(vocab_id: str, records: list[AdoptionRecord]) -> list[list]:
    return [
        [
            vocab_id,
            r.term_iri,
            r.publish_date.isoformat(),
            r.first_use_snapshot.isoformat() if r.first_use_snapshot else "",
            r.lag_days if r.lag_days is not None else "",
            r.instance_count,
            ";".join(r.adopting_plds),
        ]
        for r in sorted(records, key=lambda r: r.term_iri)
    ]


def vocab_stats_rows(stats: list[VocabAdoptionStats]) -> list[list]:
    return [
        [
            s.vocab_id,
            s.total_new_terms,
            s.adopted_terms,
            s.pct_used,
            s.total_instances,
            fmt_days(s.mu_days),
            fmt_days(s.sigma_days),
        ]
        for s in sorted(stats, key=lambda s: s.vocab_id)
    ]


def unused_rows(reports: list[UnusedTermsReport]) -> list[list]:
    return [
        [r.vocab_id, r.total_terms, r.unused, r.pct_unused]
        for r in sorted(reports, key=lambda r: r.vocab_id)
    ]


def deprecated_usage_rows(vocab_id: str, reports: list[DeprecatedUsageReport]) -> list[list]:
    rows = []
    for report in reports:
        for snapshot_date, count in report.post_deprecation_counts:
            rows.append(
                [
                    vocab_id,
                    report.term_iri,
                    report.deprecation_date.isoformat(),
                    snapshot_date.isoformat(),
                    count,
                ]
            )
    return rows


def deprecated_plds_rows(vocab_id: str, reports: list[DeprecatedUsageReport]) -> list[list]:
    rows = []
    for report in reports:
        for pld, count in report.offending_plds:
            rows.append(
                [vocab_id, report.term_iri, report.deprecation_date.isoformat(), pld, count]
            )
    return rows


def top_plds_rows(vocab_id: str, ranking: list[tuple[str | None, int]]) -> list[list]:
    return [
        [vocab_id, rank, pld or "", count]
        for rank, (pld, count) in enumerate(ranking, start=1)
    ]


def top_plds_overall_rows(ranking: list[tuple[str | None, int]]) -> list[list]:
    return [[rank, pld or "", count] for rank, (pld, count) in enumerate(ranking, start=1)]


def timeseries_rows(vocab_id: str, series: list[tuple]) -> list[list]:
    return [[vocab_id, day.isoformat(), count] for day, count in series]
