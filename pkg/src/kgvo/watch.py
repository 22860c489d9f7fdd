"""Periodic vocabulary observer: fetch configured vocabulary URLs with
content negotiation, archive distinct versions, and append manifest rows
for the term extractor. Version identity is the in-namespace term set, so
reformatting a document never creates a spurious version."""

from __future__ import annotations

import csv
import hashlib
import json
import logging
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable

import requests

from .turtle import TurtleParseError, parse_turtle
from .vocab import extract_terms

logger = logging.getLogger(__name__)

DEFAULT_ACCEPT = ("text/turtle", "application/n-triples")

_SUPPORTED_CONTENT_TYPES = {
    "text/turtle": ".ttl",
    "application/x-turtle": ".ttl",
    "application/turtle": ".ttl",
    "application/n-triples": ".nt",
    "text/plain": ".nt",
}

STATUS_NEW_VERSION = "new-version"
STATUS_UNCHANGED = "unchanged"
STATUS_COSMETIC = "cosmetic-change"
STATUS_FAILURE = "failure"


@dataclass(frozen=True)
class WatchTarget:
    vocab_id: str
    namespace: str
    url: str


@dataclass
class FetchResult:
    body: bytes
    http_status: int
    content_type: str
    final_url: str
    redirect_chain: list[str] = field(default_factory=list)
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None and 200 <= self.http_status < 300


@dataclass(frozen=True)
class ArchiveEntry:
    vocab_id: str
    fetch_time: str  # ISO-8601 UTC
    content_hash: str
    stored_path: str | None
    http_status: int
    content_type: str
    status: str
    detail: str = ""

    def to_json(self) -> dict:
        return {
            "vocab_id": self.vocab_id,
            "fetch_time": self.fetch_time,
            "content_hash": self.content_hash,
            "stored_path": self.stored_path,
            "http_status": self.http_status,
            "content_type": self.content_type,
            "status": self.status,
            "detail": self.detail,
        }


def read_watch_config(path: str | Path) -> list[WatchTarget]:
    """Watch config CSV: vocab_id,namespace,url (with header)."""
    targets = []
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        for row in reader:
            targets.append(WatchTarget(row["vocab_id"], row["namespace"], row["url"]))
    return targets


def fetch_version(
    url: str,
    accept: tuple[str, ...] = DEFAULT_ACCEPT,
    timeout: float = 30.0,
    session: requests.Session | None = None,
) -> FetchResult:
    """GET one vocabulary URL, preferring Turtle over N-Triples, following
    up to 5 redirects. Network errors come back as a failed result."""
    own_session = session is None
    session = session or requests.Session()
    session.max_redirects = 5
    header = ", ".join(
        media if i == 0 else f"{media};q={1.0 - 0.1 * i:.1f}" for i, media in enumerate(accept)
    )
    try:
        response = session.get(url, headers={"Accept": header}, timeout=timeout)
    except requests.RequestException as exc:
        return FetchResult(b"", 0, "", url, error=str(exc))
    finally:
        if own_session:
            session.close()
    content_type = response.headers.get("Content-Type", "").split(";")[0].strip().lower()
    return FetchResult(
        body=response.content,
        http_status=response.status_code,
        content_type=content_type,
        final_url=response.url,
        redirect_chain=[r.url for r in response.history],
    )


class Archive:
    """Append-only vocabulary archive: stored documents, a JSONL fetch log,
    and the manifest CSV consumed by the term extractor."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self.log_path = self.root / "log.jsonl"
        self.manifest_path = self.root / "manifest.csv"
        if not self.manifest_path.exists():
            self.manifest_path.write_text("vocab_id,namespace,version_date,path\n", encoding="utf-8")

    def latest_document(self, vocab_id: str) -> tuple[Path, bytes] | None:
        last: str | None = None
        with open(self.manifest_path, newline="", encoding="utf-8") as handle:
            for row in csv.DictReader(handle):
                if row["vocab_id"] == vocab_id:
                    last = row["path"]
        if last is None:
            return None
        path = self.root / last
        return path, path.read_bytes()

    def store(
        self, target: WatchTarget, data: bytes, version_date: str, extension: str
    ) -> Path:
        digest = hashlib.sha256(data).hexdigest()
        directory = self.root / target.vocab_id
        directory.mkdir(parents=True, exist_ok=True)
        path = directory / f"{version_date}-{digest[:8]}{extension}"
        if not path.exists():  # same bytes on the same day deduplicate
            path.write_bytes(data)
        relative = path.relative_to(self.root)
        with open(self.manifest_path, "a", newline="", encoding="utf-8") as handle:
            csv.writer(handle).writerow(
                [target.vocab_id, target.namespace, version_date, str(relative)]
            )
        return path

    def log(self, entry: ArchiveEntry) -> None:
        with open(self.log_path, "a", encoding="utf-8") as handle:
            handle.write(json.dumps(entry.to_json(), sort_keys=True) + "\n")


def _term_signature(data: bytes, namespace: str) -> frozenset | None:
    try:
        triples = parse_turtle(data.decode("utf-8"))
    except (TurtleParseError, UnicodeDecodeError):
        return None
    version = extract_terms(triples, namespace, datetime.now(timezone.utc).date(), "probe")
    return frozenset((t.iri, t.kind, t.deprecated) for t in version.in_namespace())


def detect_new_version(target: WatchTarget, data: bytes, archive: Archive) -> tuple[str, str]:
    """(status, detail): new-version when the in-namespace term set differs
    from the latest archived version; byte-identical or term-set-equal
    documents are unchanged (the latter noted as cosmetic)."""
    terms = _term_signature(data, target.namespace)
    if terms is None:
        return STATUS_FAILURE, "document does not parse as Turtle/N-Triples"
    previous = archive.latest_document(target.vocab_id)
    if previous is None:
        return STATUS_NEW_VERSION, "first archived version"
    _, old_bytes = previous
    if hashlib.sha256(old_bytes).digest() == hashlib.sha256(data).digest():
        return STATUS_UNCHANGED, "byte-identical"
    old_terms = _term_signature(old_bytes, target.namespace)
    if terms == old_terms:
        return STATUS_COSMETIC, "bytes differ but term set is unchanged"
    return STATUS_NEW_VERSION, "term set changed"


def watch_once(
    targets: list[WatchTarget],
    archive: Archive,
    fetcher: Callable[[str], FetchResult] = fetch_version,
    now: Callable[[], datetime] | None = None,
) -> list[ArchiveEntry]:
    """One poll over every target; returns the log entries appended."""
    clock = now or (lambda: datetime.now(timezone.utc))
    entries = []
    for target in targets:
        fetched = fetcher(target.url)
        timestamp = clock()
        fetch_time = timestamp.isoformat(timespec="seconds")
        version_date = timestamp.date().isoformat()
        if not fetched.ok:
            entry = ArchiveEntry(
                vocab_id=target.vocab_id,
                fetch_time=fetch_time,
                content_hash="",
                stored_path=None,
                http_status=fetched.http_status,
                content_type=fetched.content_type,
                status=STATUS_FAILURE,
                detail=fetched.error or f"HTTP {fetched.http_status}",
            )
        elif fetched.content_type not in _SUPPORTED_CONTENT_TYPES:
            entry = ArchiveEntry(
                vocab_id=target.vocab_id,
                fetch_time=fetch_time,
                content_hash=hashlib.sha256(fetched.body).hexdigest(),
                stored_path=None,
                http_status=fetched.http_status,
                content_type=fetched.content_type,
                status=STATUS_FAILURE,
                detail=f"unsupported content type {fetched.content_type!r}",
            )
        else:
            status, detail = detect_new_version(target, fetched.body, archive)
            stored_path = None
            if status == STATUS_NEW_VERSION:
                extension = _SUPPORTED_CONTENT_TYPES[fetched.content_type]
                stored = archive.store(target, fetched.body, version_date, extension)
                stored_path = str(stored.relative_to(archive.root))
            if fetched.redirect_chain:
                chain = " -> ".join(fetched.redirect_chain + [fetched.final_url])
                detail = f"{detail} (via {chain})"
            entry = ArchiveEntry(
                vocab_id=target.vocab_id,
                fetch_time=fetch_time,
                content_hash=hashlib.sha256(fetched.body).hexdigest(),
                stored_path=stored_path,
                http_status=fetched.http_status,
                content_type=fetched.content_type,
                status=status,
                detail=detail,
            )
        archive.log(entry)
        entries.append(entry)
        logger.info("%s: %s (%s)", target.vocab_id, entry.status, entry.detail)
    return entries


def watch_daemon(
    targets: list[WatchTarget],
    archive: Archive,
    interval_seconds: float = 86400.0,
    fetcher: Callable[[str], FetchResult] = fetch_version,
    max_polls: int | None = None,
) -> None:
    """Poll forever (or max_polls times) at the given cadence."""
    polls = 0
    while max_polls is None or polls < max_polls:
        watch_once(targets, archive, fetcher)
        polls += 1
        if max_polls is not None and polls >= max_polls:
            return
        time.sleep(interval_seconds)
