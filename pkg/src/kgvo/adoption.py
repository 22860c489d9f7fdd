"""Adoption analytics: when newly created terms are first used, by whom,
which terms stay unused, and how deprecated terms keep being used."""

from __future__ import annotations

import logging
import statistics
from dataclasses import dataclass
from datetime import date
from decimal import ROUND_HALF_UP, Decimal
from typing import Iterable

from .diff import ADDED, DEPRECATED, ChangeLog
from .usage import SnapshotUsage
from .vocab import TermRecord, VocabVersion

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AdoptionRecord:
    """First use of one newly created term; lag may be negative when the
    term shows up in snapshots predating its publication."""

    term_iri: str
    publish_date: date
    first_use_snapshot: date | None
    lag_days: int | None
    instance_count: int
    adopting_plds: tuple[str, ...]


@dataclass(frozen=True)
class VocabAdoptionStats:
    vocab_id: str
    total_new_terms: int
    adopted_terms: int
    pct_used: int
    total_instances: int
    mu_days: float | None  # absent without adopted terms
    sigma_days: float | None  # population stddev; absent below 2 adopted


@dataclass(frozen=True)
class DeprecatedUsageReport:
    term_iri: str
    deprecation_date: date
    post_deprecation_counts: tuple[tuple[date, int], ...]
    offending_plds: tuple[tuple[str, int], ...]


@dataclass(frozen=True)
class UnusedTermsReport:
    vocab_id: str
    total_terms: int
    unused: int
    pct_unused: int


def pct_half_up(numerator: int, denominator: int) -> int:
    """Integer percentage with exact half-up rounding."""
    if denominator == 0:
        raise ValueError("percentage of an empty universe")
    ratio = Decimal(numerator * 100) / Decimal(denominator)
    return int(ratio.to_integral_value(rounding=ROUND_HALF_UP))


def compute_adoption(
    change_log: ChangeLog, timeline: list[SnapshotUsage]
) -> list[AdoptionRecord]:
    """Adoption records for every newly created term of one vocabulary.

    Newly created means added in a version after the first one; the clock
    runs from that original addition even if the term is later removed,
    re-added, or recreated. The first use is searched over the whole
    timeline, including snapshots before the publish date.
    """
    ordered = sorted(timeline, key=lambda u: u.snapshot_date or date.min)
    first_added: dict[str, date | None] = {}
    for event in change_log.events:
        if event.kind == ADDED and event.term_iri not in first_added:
            first_added[event.term_iri] = event.to_version if event.from_version else None

    records = []
    for term_iri in sorted(first_added):
        publish = first_added[term_iri]
        if publish is None:  # present since the first version, not newly created
            continue
        first_use: date | None = None
        instances = 0
        plds: set[str] = set()
        for usage in ordered:
            count = usage.per_term_totals.get(term_iri, 0)
            if count <= 0:
                continue
            instances += count
            if first_use is None:
                first_use = usage.snapshot_date
            for (term, pld), n in usage.counts.items():
                if term == term_iri and pld is not None and n > 0:
                    plds.add(pld)
        lag = (first_use - publish).days if first_use is not None else None
        records.append(
            AdoptionRecord(
                term_iri=term_iri,
                publish_date=publish,
                first_use_snapshot=first_use,
                lag_days=lag,
                instance_count=instances,
                adopting_plds=tuple(sorted(plds)),
            )
        )
    return records


def vocab_stats(vocab_id: str, records: list[AdoptionRecord]) -> VocabAdoptionStats:
    """Aggregate adoption records into the per-vocabulary summary: percent
    of new terms ever used, total instances, and mean / population-stddev
    of adoption lags over the adopted terms only."""
    if not records:
        logger.warning("%s: no newly created terms; reporting pct_used=0 by convention", vocab_id)
        return VocabAdoptionStats(vocab_id, 0, 0, 0, 0, None, None)
    lags = [r.lag_days for r in records if r.lag_days is not None]
    mu = statistics.mean(lags) if lags else None
    sigma = statistics.pstdev(lags) if len(lags) >= 2 else None
    return VocabAdoptionStats(
        vocab_id=vocab_id,
        total_new_terms=len(records),
        adopted_terms=len(lags),
        pct_used=pct_half_up(len(lags), len(records)),
        total_instances=sum(r.instance_count for r in records),
        mu_days=float(mu) if mu is not None else None,
        sigma_days=float(sigma) if sigma is not None else None,
    )


def unused_terms(latest: VocabVersion, timeline: list[SnapshotUsage]) -> UnusedTermsReport:
    """Unused share of the whole-vocabulary universe (pass the union of all
    versions as `latest`): terms never used anywhere in the timeline."""
    universe = sorted(latest.in_namespace_iris())
    if not universe:
        raise ValueError(f"{latest.vocab_id}: empty term universe")
    used = set()
    for usage in timeline:
        for term, count in usage.per_term_totals.items():
            if count > 0:
                used.add(term)
    unused = [iri for iri in universe if iri not in used]
    return UnusedTermsReport(
        vocab_id=latest.vocab_id,
        total_terms=len(universe),
        unused=len(unused),
        pct_unused=pct_half_up(len(unused), len(universe)),
    )


def deprecated_usage(
    change_log: ChangeLog, timeline: list[SnapshotUsage]
) -> list[DeprecatedUsageReport]:
    """Continued use of each deprecated term in snapshots dated on or after
    its deprecation, with the responsible PLDs ranked by volume."""
    ordered = sorted(timeline, key=lambda u: u.snapshot_date or date.min)
    reports = []
    for event in change_log.events:
        if event.kind != DEPRECATED:
            continue
        series = []
        pld_totals: dict[str, int] = {}
        for usage in ordered:
            if usage.snapshot_date is None or usage.snapshot_date < event.to_version:
                continue
            count = usage.per_term_totals.get(event.term_iri, 0)
            if count > 0:
                series.append((usage.snapshot_date, count))
            for (term, pld), n in usage.counts.items():
                if term == event.term_iri and pld is not None and n > 0:
                    pld_totals[pld] = pld_totals.get(pld, 0) + n
        reports.append(
            DeprecatedUsageReport(
                term_iri=event.term_iri,
                deprecation_date=event.to_version,
                post_deprecation_counts=tuple(series),
                offending_plds=tuple(
                    sorted(pld_totals.items(), key=lambda kv: (-kv[1], kv[0]))
                ),
            )
        )
    reports.sort(key=lambda r: (r.term_iri, r.deprecation_date))
    return reports


def usage_timeseries(
    timeline: list[SnapshotUsage],
    terms: VocabVersion | TermRecord | str | Iterable[str],
) -> list[tuple[date, int]]:
    """Per-snapshot totals (zeros included) over a vocabulary, a single
    term, or any collection of term IRIs, ordered by snapshot date."""
    if isinstance(terms, VocabVersion):
        wanted = set(terms.in_namespace_iris())
    elif isinstance(terms, TermRecord):
        wanted = {terms.iri}
    elif isinstance(terms, str):
        wanted = {terms}
    else:
        wanted = set(terms)
    ordered = sorted(timeline, key=lambda u: u.snapshot_date or date.min)
    series = []
    for usage in ordered:
        total = sum(usage.per_term_totals.get(iri, 0) for iri in wanted)
        series.append((usage.snapshot_date, total))
    return series
