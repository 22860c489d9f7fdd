"""Command-line front end: kgvo diff|index|report|watch|gen.

Exit codes: 0 ok, 1 fatal error, 2 completed with per-item failures
(ineligible vocabularies, unreadable snapshots).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from datetime import date
from pathlib import Path

from . import adoption as ad
from . import gen as corpus_gen
from . import reports
from .diff import IneligibleVocabulary, build_change_log, check_selection
from .nquads import ParseStats, SnapshotReadError, open_snapshot, read_corpus_manifest
from .pld import bundled_psl_path, load_psl
from .usage import index_snapshot, read_usage_csv, top_plds, write_usage_csv
from .vocab import load_vocabularies, read_vocab_manifest, union_terms
from .watch import Archive, read_watch_config, watch_daemon, watch_once

logger = logging.getLogger("kgvo")

PSL_ENV_VAR = "KGVO_PSL"

EXIT_OK = 0
EXIT_FATAL = 1
EXIT_PARTIAL = 2


@dataclass
class RunConfig:
    corpus_manifest: Path | None = None
    vocab_manifest: Path | None = None
    psl: Path | None = None
    attribution: str = "context-first"
    out_dir: Path = Path("out")
    date_start: date | None = None
    date_end: date | None = None
    workers: int = 1
    figures: bool = True

    def psl_path(self) -> Path:
        if self.psl is not None:
            return self.psl
        env = os.environ.get(PSL_ENV_VAR)
        if env:
            return Path(env)
        return bundled_psl_path()

    def validate(self) -> None:
        for label, path in (
            ("corpus manifest", self.corpus_manifest),
            ("vocabulary manifest", self.vocab_manifest),
        ):
            if path is not None and not path.exists():
                raise FileNotFoundError(f"{label} not found: {path}")
        if not self.psl_path().exists():
            raise FileNotFoundError(f"public suffix list not found: {self.psl_path()}")
        if self.date_start and self.date_end and self.date_start > self.date_end:
            raise ValueError(f"date range is inverted: {self.date_start} > {self.date_end}")


def load_config(args: argparse.Namespace) -> RunConfig:
    """Config file values first, then per-flag overrides."""
    config = RunConfig()
    if getattr(args, "config", None):
        config_path = Path(args.config)
        with open(config_path, encoding="utf-8") as handle:
            raw = json.load(handle)

        def path_of(key: str) -> Path | None:
            if key not in raw or raw[key] is None:
                return None
            p = Path(raw[key])
            return p if p.is_absolute() else config_path.parent / p

        config = RunConfig(
            corpus_manifest=path_of("corpus_manifest"),
            vocab_manifest=path_of("vocab_manifest"),
            psl=path_of("psl"),
            attribution=raw.get("attribution", "context-first"),
            out_dir=path_of("out_dir") or Path("out"),
            date_start=date.fromisoformat(raw["date_start"]) if raw.get("date_start") else None,
            date_end=date.fromisoformat(raw["date_end"]) if raw.get("date_end") else None,
            workers=int(raw.get("workers", 1)),
            figures=bool(raw.get("figures", True)),
        )
    overrides = {}
    if getattr(args, "corpus_manifest", None):
        overrides["corpus_manifest"] = Path(args.corpus_manifest)
    if getattr(args, "vocab_manifest", None):
        overrides["vocab_manifest"] = Path(args.vocab_manifest)
    if getattr(args, "psl", None):
        overrides["psl"] = Path(args.psl)
    if getattr(args, "attribution", None):
        overrides["attribution"] = args.attribution
    if getattr(args, "out", None):
        overrides["out_dir"] = Path(args.out)
    if getattr(args, "date_start", None):
        overrides["date_start"] = date.fromisoformat(args.date_start)
    if getattr(args, "date_end", None):
        overrides["date_end"] = date.fromisoformat(args.date_end)
    if getattr(args, "workers", None):
        overrides["workers"] = args.workers
    if getattr(args, "no_figures", False):
        overrides["figures"] = False
    config = replace(config, **overrides)
    config.validate()
    return config


def _corpus_entries(config: RunConfig) -> list[tuple[date, Path]]:
    entries = read_corpus_manifest(config.corpus_manifest)
    if config.date_start:
        entries = [e for e in entries if e[0] >= config.date_start]
    if config.date_end:
        entries = [e for e in entries if e[0] <= config.date_end]
    return entries


def _corpus_window(config: RunConfig) -> tuple[date, date] | None:
    if config.corpus_manifest is None:
        return None
    entries = _corpus_entries(config)
    if not entries:
        return None
    return entries[0][0], entries[-1][0]


# --- diff --------------------------------------------------------------


def cmd_diff(args: argparse.Namespace) -> int:
    config = load_config(args)
    if config.vocab_manifest is None:
        raise ValueError("diff requires a vocabulary manifest (--vocab-manifest)")
    vocabularies = load_vocabularies(read_vocab_manifest(config.vocab_manifest))
    window = _corpus_window(config)

    logs = []
    verdicts = []
    for vocab_id in sorted(vocabularies):
        versions = vocabularies[vocab_id]
        verdict = check_selection(
            vocab_id, [v.version_date for v in versions], corpus_window=window
        )
        verdicts.append(verdict)
        if not verdict.eligible:
            logger.warning("%s: ineligible (%s)", vocab_id, "; ".join(verdict.reasons))
            continue
        log = build_change_log(versions)
        logs.append(log)
        reports.write_report(
            config.out_dir / "change_logs" / vocab_id,
            reports.CHANGE_LOG_HEADER,
            reports.change_log_rows(log),
        )
    reports.write_report(
        config.out_dir / "change_summary", reports.CHANGE_SUMMARY_HEADER, reports.change_summary_rows(logs)
    )
    ineligible = [v for v in verdicts if not v.eligible]
    reports.write_report(
        config.out_dir / "ineligible", reports.SELECTION_HEADER, reports.selection_rows(ineligible)
    )
    logger.info("diff: %d change logs, %d ineligible", len(logs), len(ineligible))
    return EXIT_PARTIAL if ineligible else EXIT_OK


# --- index -------------------------------------------------------------


def _index_one(task: tuple) -> tuple[str, dict, str | None]:
    """Worker for one snapshot file; returns (date, parse stats, error).
    Unreadable snapshots degrade to an empty usage file plus an error so
    one broken file never aborts a multi-hundred-snapshot run."""
    day_iso, path_text, tracked, psl_path, attribution, usage_dir = task
    day = date.fromisoformat(day_iso)
    rules = load_psl(psl_path)
    error = None
    try:
        quads, stats = open_snapshot(path_text, day)
        usage = index_snapshot(
            quads, tracked, rules, attribution=attribution, snapshot_date=day
        )
    except SnapshotReadError as exc:
        error = str(exc)
        stats = exc.stats
        usage = index_snapshot([], tracked, rules, snapshot_date=day)
    except OSError as exc:
        error = f"{path_text}: {exc}"
        stats = ParseStats()
        usage = index_snapshot([], tracked, rules, snapshot_date=day)
    write_usage_csv(usage, Path(usage_dir) / f"usage_{day_iso}.csv")
    return day_iso, stats.to_json(), error


def cmd_index(args: argparse.Namespace) -> int:
    config = load_config(args)
    if config.corpus_manifest is None or config.vocab_manifest is None:
        raise ValueError("index requires --corpus-manifest and --vocab-manifest")
    vocabularies = load_vocabularies(read_vocab_manifest(config.vocab_manifest))
    tracked = []
    for versions in vocabularies.values():
        tracked.extend(union_terms(versions).in_namespace())
    entries = _corpus_entries(config)
    usage_dir = config.out_dir / "usage"
    usage_dir.mkdir(parents=True, exist_ok=True)

    tasks = [
        (day.isoformat(), str(path), tracked, str(config.psl_path()), config.attribution, str(usage_dir))
        for day, path in entries
    ]
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            results = list(pool.map(_index_one, tasks))
    else:
        results = [_index_one(task) for task in tasks]

    all_stats = {day: stats for day, stats, _ in results}
    failures = [(day, error) for day, _, error in results if error]
    stats_dir = config.out_dir / "stats"
    stats_dir.mkdir(parents=True, exist_ok=True)
    (stats_dir / "parse_stats.json").write_text(
        json.dumps(all_stats, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    for day, error in failures:
        logger.error("%s: %s", day, error)
    logger.info("index: %d snapshots, %d failed", len(results), len(failures))
    return EXIT_PARTIAL if failures else EXIT_OK


# --- report ------------------------------------------------------------


def cmd_report(args: argparse.Namespace) -> int:
    config = load_config(args)
    if config.vocab_manifest is None:
        raise ValueError("report requires --vocab-manifest")
    usage_dir = config.out_dir / "usage"
    usage_files = sorted(usage_dir.glob("usage_*.csv"))
    if not usage_files:
        raise FileNotFoundError(f"no usage files under {usage_dir}; run `kgvo index` first")
    timeline = [
        read_usage_csv(path, snapshot_date=date.fromisoformat(path.stem[len("usage_") :]))
        for path in usage_files
    ]
    timeline.sort(key=lambda u: u.snapshot_date)
    window = (timeline[0].snapshot_date, timeline[-1].snapshot_date)

    vocabularies = load_vocabularies(read_vocab_manifest(config.vocab_manifest))
    report_dir = config.out_dir / "reports"

    verdicts = []
    stats_rows = []
    unused_reports = []
    adoption_all = []
    deprecated_usage_all = []
    deprecated_plds_all = []
    top_rows = []
    timeseries_all = []
    marker_rows = []
    series_by_vocab = {}
    version_dates_by_vocab = {}
    all_tracked_iris = set()

    for vocab_id in sorted(vocabularies):
        versions = vocabularies[vocab_id]
        union = union_terms(versions)
        tracked_iris = union.in_namespace_iris()
        all_tracked_iris |= tracked_iris
        has_use = any(
            usage.per_term_totals.get(iri, 0) > 0 for usage in timeline for iri in tracked_iris
        )
        verdict = check_selection(
            vocab_id, [v.version_date for v in versions], window, has_use
        )
        verdicts.append(verdict)
        if not verdict.eligible:
            continue

        log = build_change_log(versions)
        reports.write_report(
            config.out_dir / "change_logs" / vocab_id,
            reports.CHANGE_LOG_HEADER,
            reports.change_log_rows(log),
        )
        records = ad.compute_adoption(log, timeline)
        adoption_all.extend(reports.adoption_rows(vocab_id, records))
        stats_rows.append(ad.vocab_stats(vocab_id, records))
        unused_reports.append(ad.unused_terms(union, timeline))
        dep_reports = ad.deprecated_usage(log, timeline)
        deprecated_usage_all.extend(reports.deprecated_usage_rows(vocab_id, dep_reports))
        deprecated_plds_all.extend(reports.deprecated_plds_rows(vocab_id, dep_reports))
        top_rows.extend(reports.top_plds_rows(vocab_id, top_plds(timeline, tracked_iris)))
        series = ad.usage_timeseries(timeline, union)
        series_by_vocab[vocab_id] = series
        version_dates_by_vocab[vocab_id] = list(log.versions)
        timeseries_all.extend(reports.timeseries_rows(vocab_id, series))
        marker_rows.extend([vocab_id, d.isoformat()] for d in log.versions)

    reports.write_report(
        config.out_dir / "selection", reports.SELECTION_HEADER, reports.selection_rows(verdicts)
    )
    reports.write_report(report_dir / "adoption", reports.ADOPTION_HEADER, adoption_all)
    reports.write_report(
        report_dir / "vocab_stats", reports.VOCAB_STATS_HEADER, reports.vocab_stats_rows(stats_rows)
    )
    reports.write_report(
        report_dir / "unused_terms", reports.UNUSED_HEADER, reports.unused_rows(unused_reports)
    )
    reports.write_report(
        report_dir / "deprecated_usage", reports.DEPRECATED_USAGE_HEADER, deprecated_usage_all
    )
    reports.write_report(
        report_dir / "deprecated_plds", reports.DEPRECATED_PLDS_HEADER, deprecated_plds_all
    )
    reports.write_report(report_dir / "top_plds", reports.TOP_PLDS_HEADER, top_rows)
    reports.write_report(
        report_dir / "top_plds_overall",
        reports.TOP_PLDS_OVERALL_HEADER,
        reports.top_plds_overall_rows(top_plds(timeline, all_tracked_iris)),
    )
    reports.write_report(report_dir / "timeseries", reports.TIMESERIES_HEADER, timeseries_all)
    reports.write_report(report_dir / "version_markers", reports.VERSION_MARKERS_HEADER, marker_rows)

    if config.figures:
        from . import figures

        figure_dir = config.out_dir / "figures"
        figures.plot_all_timeseries(series_by_vocab, figure_dir / "timeseries_all.png")
        for vocab_id, series in series_by_vocab.items():
            figures.plot_vocab_timeseries(
                vocab_id,
                series,
                version_dates_by_vocab[vocab_id],
                figure_dir / f"timeseries_{vocab_id}.png",
            )

    ineligible = [v for v in verdicts if not v.eligible]
    logger.info(
        "report: %d vocabularies reported, %d ineligible", len(stats_rows), len(ineligible)
    )
    return EXIT_PARTIAL if ineligible else EXIT_OK


# --- watch / gen ---------------------------------------------------------


def _parse_interval(text: str) -> float:
    units = {"s": 1, "m": 60, "h": 3600, "d": 86400}
    if text and text[-1] in units:
        return float(text[:-1]) * units[text[-1]]
    return float(text)


def cmd_watch(args: argparse.Namespace) -> int:
    targets = read_watch_config(args.watch_config)
    archive = Archive(args.archive)
    if args.daemon:
        watch_daemon(targets, archive, interval_seconds=_parse_interval(args.interval))
        return EXIT_OK
    entries = watch_once(targets, archive)
    failures = [e for e in entries if e.status == "failure"]
    return EXIT_PARTIAL if failures else EXIT_OK


def cmd_gen(args: argparse.Namespace) -> int:
    spec = corpus_gen.load_spec(args.spec)
    generated = corpus_gen.generate(spec, args.out)
    logger.info(
        "gen: %d snapshots, %d vocabulary files, ground truth at %s",
        len(generated.snapshot_paths),
        len(generated.vocab_paths),
        generated.ground_truth,
    )
    return EXIT_OK


# --- entry point ---------------------------------------------------------


def _add_pipeline_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON run configuration file")
    parser.add_argument("--corpus-manifest", help="snapshot manifest: `<date> <path>` per line")
    parser.add_argument("--vocab-manifest", help="vocabulary manifest CSV")
    parser.add_argument("--psl", help=f"public suffix list path (or ${PSL_ENV_VAR})")
    parser.add_argument(
        "--attribution", choices=["context-first", "subject-only"], help="PLD attribution mode"
    )
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--date-start", help="ignore snapshots before this ISO date")
    parser.add_argument("--date-end", help="ignore snapshots after this ISO date")
    parser.add_argument("--workers", type=int, help="parallel snapshot workers")
    parser.add_argument("--no-figures", action="store_true", help="skip PNG figure rendering")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kgvo",
        description="Track vocabulary term changes and their adoption across dated KG snapshots",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p_diff = sub.add_parser("diff", help="compute per-vocabulary change logs")
    _add_pipeline_flags(p_diff)
    p_diff.set_defaults(func=cmd_diff)

    p_index = sub.add_parser("index", help="count term usage per snapshot")
    _add_pipeline_flags(p_index)
    p_index.set_defaults(func=cmd_index)

    p_report = sub.add_parser("report", help="emit adoption/unused/deprecation reports and figures")
    _add_pipeline_flags(p_report)
    p_report.set_defaults(func=cmd_report)

    p_watch = sub.add_parser("watch", help="poll vocabulary URLs and archive new versions")
    p_watch.add_argument("--watch-config", required=True, help="CSV: vocab_id,namespace,url")
    p_watch.add_argument("--archive", required=True, help="archive directory")
    mode = p_watch.add_mutually_exclusive_group()
    mode.add_argument("--once", action="store_true", help="single poll (default)")
    mode.add_argument("--daemon", action="store_true", help="poll forever")
    p_watch.add_argument("--interval", default="1d", help="daemon poll interval (e.g. 6h, 1d)")
    p_watch.set_defaults(func=cmd_watch)

    p_gen = sub.add_parser("gen", help="generate a synthetic corpus with ground truth")
    p_gen.add_argument("--spec", required=True, help="corpus spec JSON")
    p_gen.add_argument("--out", required=True, help="output directory")
    p_gen.set_defaults(func=cmd_gen)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except (OSError, ValueError, IneligibleVocabulary, json.JSONDecodeError) as exc:
        logger.error("%s", exc)
        return EXIT_FATAL


if __name__ == "__main__":
    sys.exit(main())
