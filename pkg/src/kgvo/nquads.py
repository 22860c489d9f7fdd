"""Streaming N-Quads / N-Triples parser for dated snapshot files.

Web-crawl dumps are dirty: malformed lines are counted and skipped, never
fatal. Parsing is line-at-a-time so memory stays flat regardless of file
size.
"""

from __future__ import annotations

import gzip
import io
import re
from dataclasses import dataclass, field
from datetime import date
from pathlib import Path
from typing import IO, Iterable, Iterator, NamedTuple

RDF_TYPE = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type"
XSD_STRING = "http://www.w3.org/2001/XMLSchema#string"

# Skip reasons returned by parse_quad_line for non-statement lines.
SKIP_BLANK = "blank"
SKIP_COMMENT = "comment"
SKIP_MALFORMED_IRI = "malformed-iri"
SKIP_BAD_ESCAPE = "bad-escape"
SKIP_TRUNCATED = "truncated"
SKIP_MALFORMED = "malformed"
SKIP_BAD_ENCODING = "bad-encoding"

# Reasons that are counted as skipped lines (vs. blank/comment filler).
ERROR_REASONS = frozenset(
    {SKIP_MALFORMED_IRI, SKIP_BAD_ESCAPE, SKIP_TRUNCATED, SKIP_MALFORMED, SKIP_BAD_ENCODING}
)


class Literal(NamedTuple):
    """An RDF literal; language_tag and datatype are mutually exclusive."""

    lexical_form: str
    datatype: str | None = None
    language_tag: str | None = None


class Quad(NamedTuple):
    """One parsed statement. Blank nodes keep their ``_:`` label prefix,
    so subject/object strings are unambiguous (IRIs never start with ``_:``)."""

    subject: str
    predicate: str
    object: str | Literal
    context: str | None = None
    snapshot_date: date | None = None


@dataclass
class ParseStats:
    """Per-stream accounting; lines_total = quads + skipped + blank/comment."""

    lines_total: int = 0
    quads_emitted: int = 0
    lines_skipped: int = 0
    blank_or_comment: int = 0
    first_error_samples: list[tuple[int, str]] = field(default_factory=list)

    def record_error(self, line_no: int, reason: str) -> None:
        self.lines_skipped += 1
        if len(self.first_error_samples) < 10:
            self.first_error_samples.append((line_no, reason))

    def to_json(self) -> dict:
        return {
            "lines_total": self.lines_total,
            "quads_emitted": self.quads_emitted,
            "lines_skipped": self.lines_skipped,
            "blank_or_comment": self.blank_or_comment,
            "first_error_samples": [
                {"line": n, "reason": r} for n, r in self.first_error_samples
            ],
        }


class SnapshotReadError(Exception):
    """I/O failure mid-stream; carries the stats accumulated so far."""

    def __init__(self, message: str, stats: ParseStats):
        super().__init__(message)
        self.stats = stats


class _BadEscape(ValueError):
    pass


_IRI = r'<((?:[^\x00-\x20<>"{}|^`\\]|\\u[0-9A-Fa-f]{4}|\\U[0-9A-Fa-f]{8})*)>'
_BNODE = r"(_:[A-Za-z0-9](?:[A-Za-z0-9._\-]*[A-Za-z0-9_\-])?)"
_STRING = r'"((?:[^"\\\n\r]|\\.)*)"'
_LANG = r"@([A-Za-z]+(?:-[A-Za-z0-9]+)*)"

_QUAD_RE = re.compile(
    r"[ \t]*(?:%s|%s)[ \t]+%s[ \t]+(?:%s|%s|%s(?:\^\^%s|%s)?)(?:[ \t]+(?:%s|%s))?[ \t]*\.[ \t]*(?:#.*)?$"
    % (_IRI, _BNODE, _IRI, _IRI, _BNODE, _STRING, _IRI, _LANG, _IRI, _BNODE)
)
# Group layout of _QUAD_RE (all optional except one alternative per slot):
# 1 subject IRI, 2 subject bnode, 3 predicate IRI, 4 object IRI,
# 5 object bnode, 6 literal lexical, 7 literal datatype, 8 language tag,
# 9 context IRI, 10 context bnode.

_ESCAPE_MAP = {
    "t": "\t",
    "b": "\b",
    "n": "\n",
    "r": "\r",
    "f": "\f",
    '"': '"',
    "'": "'",
    "\\": "\\",
}
_ESC_RE = re.compile(r"\\(?:u([0-9A-Fa-f]{4})|U([0-9A-Fa-f]{8})|(.)|$)", re.S)

_SERIALIZE_ESCAPES = {
    "\\": "\\\\",
    '"': '\\"',
    "\n": "\\n",
    "\r": "\\r",
    "\t": "\\t",
    "\b": "\\b",
    "\f": "\\f",
}
_SERIALIZE_RE = re.compile(r'[\\"\n\r\t\b\f]')


def _unescape_repl(m: re.Match) -> str:
    if m.group(1):
        return chr(int(m.group(1), 16))
    if m.group(2):
        cp = int(m.group(2), 16)
        if cp > 0x10FFFF:
            raise _BadEscape(m.group(0))
        return chr(cp)
    c = m.group(3)
    if c is None or c not in _ESCAPE_MAP:
        raise _BadEscape(m.group(0))
    return _ESCAPE_MAP[c]


def unescape(text: str) -> str:
    """Decode N-Quads string escapes (\\t \\n \\" \\\\ \\uXXXX \\UXXXXXXXX)."""
    if "\\" not in text:
        return text
    return _ESC_RE.sub(_unescape_repl, text)


def parse_quad_line(line: str, snapshot_date: date | None = None) -> Quad | str:
    """Parse one physical line; return a Quad or a skip-reason string.

    Never raises on malformed input: anything ungrammatical comes back as
    one of the SKIP_* reason constants.
    """
    m = _QUAD_RE.match(line)
    if m is None:
        return _diagnose(line)
    g = m.group
    try:
        subject = unescape(g(1)) if g(1) is not None else g(2)
        predicate = unescape(g(3))
        obj: str | Literal
        if g(4) is not None:
            obj = unescape(g(4))
        elif g(5) is not None:
            obj = g(5)
        else:
            obj = Literal(
                lexical_form=unescape(g(6)),
                datatype=unescape(g(7)) if g(7) is not None else None,
                language_tag=g(8),
            )
        context = unescape(g(9)) if g(9) is not None else g(10)
    except _BadEscape:
        return SKIP_BAD_ESCAPE
    return Quad(subject, predicate, obj, context, snapshot_date)


def _diagnose(line: str) -> str:
    stripped = line.strip()
    if not stripped:
        return SKIP_BLANK
    if stripped.startswith("#"):
        return SKIP_COMMENT
    if not stripped.endswith("."):
        return SKIP_TRUNCATED
    if stripped.count('"') % 2 == 1:
        return SKIP_TRUNCATED
    if stripped.count("<") != stripped.count(">"):
        return SKIP_MALFORMED_IRI
    if re.search(r"<[^>]*[\x00-\x20{}|^`][^>]*>", stripped):
        return SKIP_MALFORMED_IRI
    return SKIP_MALFORMED


def serialize_quad(quad: Quad) -> str:
    """Render a Quad back to one N-Quads line (no trailing newline)."""
    parts = [_term(quad.subject), _term(quad.predicate), _term(quad.object)]
    if quad.context is not None:
        parts.append(_term(quad.context))
    return " ".join(parts) + " ."


def _term(value: str | Literal) -> str:
    if isinstance(value, Literal):
        body = _SERIALIZE_RE.sub(lambda m: _SERIALIZE_ESCAPES[m.group(0)], value.lexical_form)
        if value.language_tag is not None:
            return f'"{body}"@{value.language_tag}'
        if value.datatype is not None:
            return f'"{body}"^^<{value.datatype}>'
        return f'"{body}"'
    if value.startswith("_:"):
        return value
    return f"<{value}>"


def stream_snapshot(
    source: IO[bytes] | Iterable[bytes],
    compression: str = "none",
    snapshot_date: date | None = None,
) -> tuple[Iterator[Quad], ParseStats]:
    """Stream Quads out of a byte source in file order.

    Returns (generator, stats); the stats object fills in as the generator
    is consumed and is complete once it is exhausted. Every emitted Quad
    carries the given snapshot_date. I/O errors mid-stream raise
    SnapshotReadError with the partial stats attached.
    """
    stats = ParseStats()
    if compression == "gzip":
        source = gzip.GzipFile(fileobj=_ensure_file(source))
    elif compression != "none":
        raise ValueError(f"unsupported compression: {compression!r}")

    def generate() -> Iterator[Quad]:
        line_no = 0
        lines = iter(source)
        while True:
            try:
                raw = next(lines)
            except StopIteration:
                return
            except (OSError, EOFError) as exc:
                raise SnapshotReadError(f"read failed at line {line_no + 1}: {exc}", stats) from exc
            line_no += 1
            stats.lines_total += 1
            try:
                line = raw.decode("utf-8")
            except UnicodeDecodeError:
                stats.record_error(line_no, SKIP_BAD_ENCODING)
                continue
            result = parse_quad_line(line.rstrip("\r\n"), snapshot_date)
            if isinstance(result, Quad):
                stats.quads_emitted += 1
                yield result
            elif result in (SKIP_BLANK, SKIP_COMMENT):
                stats.blank_or_comment += 1
            else:
                stats.record_error(line_no, result)

    return generate(), stats


def _ensure_file(source: IO[bytes] | Iterable[bytes]) -> IO[bytes]:
    if hasattr(source, "read"):
        return source  # type: ignore[return-value]
    data = b"".join(source)
    return io.BytesIO(data)


def open_snapshot(
    path: str | Path, snapshot_date: date, compression: str = "auto"
) -> tuple[Iterator[Quad], ParseStats]:
    """Open a snapshot file (gzip detected from the .gz suffix by default)."""
    path = Path(path)
    if compression == "auto":
        compression = "gzip" if path.suffix == ".gz" else "none"
    handle = open(path, "rb")

    def closing() -> Iterator[Quad]:
        try:
            yield from quads
        finally:
            handle.close()

    quads, stats = stream_snapshot(handle, compression, snapshot_date)
    return closing(), stats


def read_corpus_manifest(path: str | Path) -> list[tuple[date, Path]]:
    """Read a snapshot manifest: one `<ISO-date> <path>` pair per line.

    Relative paths resolve against the manifest's directory. Snapshot dates
    always come from here (or the CLI), never from quad content.
    """
    path = Path(path)
    entries = []
    for raw in path.read_text(encoding="utf-8").splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            date_text, file_text = line.split(maxsplit=1)
        except ValueError:
            raise ValueError(f"{path}: manifest line needs '<date> <path>': {line!r}") from None
        snapshot_date = date.fromisoformat(date_text)
        file_path = Path(file_text)
        if not file_path.is_absolute():
            file_path = path.parent / file_path
        entries.append((snapshot_date, file_path))
    entries.sort(key=lambda item: (item[0], str(item[1])))
    return entries
