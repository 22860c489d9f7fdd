"""Term-level diffs between vocabulary versions, change logs with
recreation detection, and the vocabulary selection criteria."""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date

from .vocab import VocabVersion

ADDED = "added"
REMOVED = "removed"
DEPRECATED = "deprecated"
UNDEPRECATED = "undeprecated"
RECREATED = "recreated"

# Changes counted toward a vocabulary's change total (undeprecations and
# derived recreations are excluded, as are the first version's terms).
COUNTED_KINDS = frozenset({ADDED, REMOVED, DEPRECATED})

REASON_TOO_FEW_VERSIONS = "fewer-than-two-versions"
REASON_OUTSIDE_WINDOW = "versions-outside-corpus-window"
REASON_NO_DIRECT_USE = "no-direct-use"


@dataclass(frozen=True)
class ChangeEvent:
    term_iri: str
    kind: str
    from_version: date | None
    to_version: date

    def sort_key(self) -> tuple:
        return (self.to_version, self.kind, self.term_iri)


@dataclass
class ChangeLog:
    vocab_id: str
    versions: tuple[date, ...]
    events: tuple[ChangeEvent, ...]
    total_changes: int

    def events_of_kind(self, kind: str) -> list[ChangeEvent]:
        return [e for e in self.events if e.kind == kind]


@dataclass(frozen=True)
class SelectionVerdict:
    vocab_id: str
    eligible: bool
    reasons: tuple[str, ...]


class IneligibleVocabulary(Exception):
    def __init__(self, verdict: SelectionVerdict):
        super().__init__(f"{verdict.vocab_id}: {', '.join(verdict.reasons)}")
        self.verdict = verdict


def diff_versions(v1: VocabVersion, v2: VocabVersion) -> list[ChangeEvent]:
    """Changes between two successive versions of one vocabulary.

    Only terms defined in the vocabulary namespace are compared. A term
    entering already-deprecated yields both an added and a deprecated
    event, so replaying a change log reproduces deprecation state.
    """
    if v1.vocab_id != v2.vocab_id:
        raise ValueError(f"cannot diff different vocabularies: {v1.vocab_id} vs {v2.vocab_id}")
    if v1.version_date >= v2.version_date:
        raise ValueError(
            f"{v1.vocab_id}: versions must be strictly ordered "
            f"({v1.version_date} !< {v2.version_date})"
        )
    terms1 = {t.iri: t for t in v1.in_namespace()}
    terms2 = {t.iri: t for t in v2.in_namespace()}
    events = []
    for iri in terms2.keys() - terms1.keys():
        events.append(ChangeEvent(iri, ADDED, v1.version_date, v2.version_date))
    for iri in terms1.keys() - terms2.keys():
        events.append(ChangeEvent(iri, REMOVED, v1.version_date, v2.version_date))
    for iri, term in terms2.items():
        before = terms1.get(iri)
        was_deprecated = before.deprecated if before is not None else False
        if term.deprecated and not was_deprecated:
            events.append(ChangeEvent(iri, DEPRECATED, v1.version_date, v2.version_date))
        elif not term.deprecated and was_deprecated:
            events.append(ChangeEvent(iri, UNDEPRECATED, v1.version_date, v2.version_date))
    events.sort(key=ChangeEvent.sort_key)
    return events


def build_change_log(versions: list[VocabVersion]) -> ChangeLog:
    """Fold pairwise diffs into one per-vocabulary change log.

    The first version's terms appear as added events without a
    from_version; they do not count toward total_changes. A recreated
    event is derived for every deprecation or removal that is later
    followed by the term being present and not deprecated.
    """
    if len(versions) < 2:
        vocab_id = versions[0].vocab_id if versions else "?"
        raise IneligibleVocabulary(
            SelectionVerdict(vocab_id, False, (REASON_TOO_FEW_VERSIONS,))
        )
    ordered = sorted(versions, key=lambda v: v.version_date)
    events: list[ChangeEvent] = []
    first = ordered[0]
    for term in first.in_namespace():
        events.append(ChangeEvent(term.iri, ADDED, None, first.version_date))
    for v1, v2 in zip(ordered, ordered[1:]):
        events.extend(diff_versions(v1, v2))

    # Recreation: an unresolved deprecation/removal event followed by the
    # term present and non-deprecated in a later version.
    pending_break: dict[str, date] = {}
    for version in ordered[1:]:
        for event in (e for e in events if e.to_version == version.version_date):
            if event.kind in (DEPRECATED, REMOVED):
                pending_break[event.term_iri] = version.version_date
        for term in version.in_namespace():
            if term.deprecated:
                continue
            broke_at = pending_break.pop(term.iri, None)
            if broke_at is not None and broke_at < version.version_date:
                events.append(ChangeEvent(term.iri, RECREATED, broke_at, version.version_date))

    events.sort(key=ChangeEvent.sort_key)
    total = sum(
        1 for e in events if e.kind in COUNTED_KINDS and e.from_version is not None
    )
    return ChangeLog(
        vocab_id=ordered[0].vocab_id,
        versions=tuple(v.version_date for v in ordered),
        events=tuple(events),
        total_changes=total,
    )


def check_selection(
    vocab_id: str,
    version_dates: list[date],
    corpus_window: tuple[date, date] | None = None,
    has_direct_use: bool | None = None,
) -> SelectionVerdict:
    """Apply the three selection criteria a vocabulary must pass before its
    changes are analyzed: at least two versions, at least one version dated
    inside the corpus window, and at least one triple using its terms.

    A criterion whose input is None (window or usage unknown at this stage)
    is not assessed and does not fail the vocabulary.
    """
    reasons = []
    if len(version_dates) < 2:
        reasons.append(REASON_TOO_FEW_VERSIONS)
    if corpus_window is not None and version_dates:
        start, end = corpus_window
        if start > end:
            raise ValueError(f"corpus window is inverted: {start} > {end}")
        if not any(start <= d <= end for d in version_dates):
            reasons.append(REASON_OUTSIDE_WINDOW)
    if has_direct_use is False:
        reasons.append(REASON_NO_DIRECT_USE)
    return SelectionVerdict(vocab_id, eligible=not reasons, reasons=tuple(reasons))
