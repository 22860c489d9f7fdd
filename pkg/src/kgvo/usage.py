"""Per-snapshot counting of term use, keyed by (term, PLD).

A quad uses a property when the property sits in predicate position, and a
class when the quad is an rdf:type statement with the class as object.
Anything else (links, documentation mentions) is not modeling use; a
mentions mode exists for sensitivity checks.
"""

from __future__ import annotations

import csv
from datetime import date
from pathlib import Path
from typing import Iterable, NamedTuple

from .nquads import RDF_TYPE, Quad
from .pld import SuffixRules, host_of
from .vocab import CLASS, PROPERTY, TermRecord

ATTRIBUTION_CONTEXT_FIRST = "context-first"
ATTRIBUTION_SUBJECT_ONLY = "subject-only"

MODE_MODELING = "modeling"
MODE_MENTIONS = "mentions"

# Hosts repeat heavily inside one crawl; cache host->PLD lookups but keep
# the cache bounded so adversarial corpora cannot grow it without limit.
_PLD_CACHE_MAX = 1 << 18


class UsageKey(NamedTuple):
    term_iri: str
    pld: str | None


class SnapshotUsage:
    """Counts for one snapshot; immutable by convention once constructed."""

    def __init__(self, snapshot_date: date | None, counts: dict[UsageKey, int]):
        self.snapshot_date = snapshot_date
        self.counts = counts
        self.per_term_totals: dict[str, int] = {}
        self.per_pld_totals: dict[str | None, int] = {}
        for (term, pld), count in counts.items():
            self.per_term_totals[term] = self.per_term_totals.get(term, 0) + count
            self.per_pld_totals[pld] = self.per_pld_totals.get(pld, 0) + count

    def total(self) -> int:
        return sum(self.counts.values())

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SnapshotUsage)
            and self.snapshot_date == other.snapshot_date
            and self.counts == other.counts
        )

    def __repr__(self) -> str:
        return f"SnapshotUsage({self.snapshot_date}, {len(self.counts)} keys, {self.total()} triples)"


def index_snapshot(
    quads: Iterable[Quad],
    tracked_terms: Iterable[TermRecord],
    rules: SuffixRules,
    attribution: str = ATTRIBUTION_CONTEXT_FIRST,
    snapshot_date: date | None = None,
    mode: str = MODE_MODELING,
) -> SnapshotUsage:
    """Single-pass count of tracked-term uses in one snapshot's quads.

    PLD attribution is context-first by default (the context names the
    publishing document in crawl corpora), falling back to the subject when
    no context is present; subject-only ignores contexts entirely.
    The snapshot date is taken from the quads when not given explicitly.
    """
    if attribution not in (ATTRIBUTION_CONTEXT_FIRST, ATTRIBUTION_SUBJECT_ONLY):
        raise ValueError(f"unknown attribution mode: {attribution!r}")
    if mode not in (MODE_MODELING, MODE_MENTIONS):
        raise ValueError(f"unknown counting mode: {mode!r}")

    # rdf:type is never tracked, so a quad can match at most one term.
    tracked_properties = {t.iri for t in tracked_terms if t.kind == PROPERTY and t.iri != RDF_TYPE}
    tracked_classes = {t.iri for t in tracked_terms if t.kind == CLASS and t.iri != RDF_TYPE}
    all_tracked = tracked_properties | tracked_classes

    counts: dict[UsageKey, int] = {}
    pld_cache: dict[str, str | None] = {}
    context_first = attribution == ATTRIBUTION_CONTEXT_FIRST
    miss = object()

    def pld_of(iri: str) -> str | None:
        cached = pld_cache.get(iri, miss)
        if cached is miss:
            host = host_of(iri)
            cached = rules.registrable_domain(host).pld if host is not None else None
            if len(pld_cache) >= _PLD_CACHE_MAX:
                pld_cache.clear()
            pld_cache[iri] = cached
        return cached

    for quad in quads:
        if snapshot_date is None:
            snapshot_date = quad.snapshot_date
        if mode == MODE_MODELING:
            predicate = quad.predicate
            if predicate == RDF_TYPE:
                obj = quad.object
                if not (isinstance(obj, str) and obj in tracked_classes):
                    continue
                term = obj
            elif predicate in tracked_properties:
                term = predicate
            else:
                continue
            attr_iri = quad.context if context_first and quad.context is not None else quad.subject
            key = UsageKey(term, pld_of(attr_iri))
            counts[key] = counts.get(key, 0) + 1
        else:
            mentioned = {
                part
                for part in (quad.subject, quad.predicate, quad.object, quad.context)
                if isinstance(part, str) and part in all_tracked
            }
            if not mentioned:
                continue
            attr_iri = quad.context if context_first and quad.context is not None else quad.subject
            pld = pld_of(attr_iri)
            for term in mentioned:
                key = UsageKey(term, pld)
                counts[key] = counts.get(key, 0) + 1

    return SnapshotUsage(snapshot_date, counts)


def merge(u1: SnapshotUsage, u2: SnapshotUsage) -> SnapshotUsage:
    """Pointwise sum of two shards of the same snapshot."""
    if u1.snapshot_date != u2.snapshot_date:
        raise ValueError(
            f"cannot merge different snapshots: {u1.snapshot_date} vs {u2.snapshot_date}"
        )
    counts = dict(u1.counts)
    for key, count in u2.counts.items():
        counts[key] = counts.get(key, 0) + count
    return SnapshotUsage(u1.snapshot_date, counts)


def empty_usage(snapshot_date: date | None = None) -> SnapshotUsage:
    return SnapshotUsage(snapshot_date, {})


def top_plds(
    timeline: list[SnapshotUsage], terms: Iterable[TermRecord] | Iterable[str]
) -> list[tuple[str | None, int]]:
    """PLDs ranked by total triple count over the timeline, restricted to
    the given terms; ties break alphabetically (unattributed counts last)."""
    wanted = {t.iri if isinstance(t, TermRecord) else t for t in terms}
    totals: dict[str | None, int] = {}
    for usage in timeline:
        for (term, pld), count in usage.counts.items():
            if term in wanted:
                totals[pld] = totals.get(pld, 0) + count
    return sorted(totals.items(), key=lambda kv: (-kv[1], kv[0] is None, kv[0] or ""))


USAGE_CSV_HEADER = ["date", "term", "pld", "count"]


def write_usage_csv(usage: SnapshotUsage, path: str | Path) -> None:
    """Persist one snapshot's counts as sorted `date,term,pld,count` rows so
    long timelines can be re-analyzed without re-parsing the corpus."""
    if usage.snapshot_date is None:
        raise ValueError("cannot persist usage without a snapshot date")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(USAGE_CSV_HEADER)
        day = usage.snapshot_date.isoformat()
        for (term, pld), count in sorted(
            usage.counts.items(), key=lambda kv: (kv[0][0], kv[0][1] or "")
        ):
            writer.writerow([day, term, pld or "", count])


def read_usage_csv(path: str | Path, snapshot_date: date | None = None) -> SnapshotUsage:
    """Load persisted counts; the explicit date covers row-less files for
    empty snapshots (the CLI derives it from the file name)."""
    counts: dict[UsageKey, int] = {}
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        for row in reader:
            snapshot_date = date.fromisoformat(row["date"])
            key = UsageKey(row["term"], row["pld"] or None)
            counts[key] = counts.get(key, 0) + int(row["count"])
    if snapshot_date is None:
        raise ValueError(f"{path}: empty usage file and no fallback date")
    return SnapshotUsage(snapshot_date, counts)
