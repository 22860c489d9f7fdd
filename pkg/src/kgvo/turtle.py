"""Turtle / N-Triples reader for vocabulary documents.

Covers the grammar subset real vocabulary files use: prefix and base
directives, prefixed names, literals (short, long, numeric, boolean),
predicate-object and object lists, blank node labels and property lists,
and collections. Vocabulary documents are small, so this reader builds the
full triple list in memory; snapshot corpora go through nquads instead.
"""

from __future__ import annotations

import re
from pathlib import Path
from urllib.parse import urljoin

from .nquads import Literal, unescape

RDF_NS = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDF_FIRST = RDF_NS + "first"
RDF_REST = RDF_NS + "rest"
RDF_NIL = RDF_NS + "nil"
XSD_NS = "http://www.w3.org/2001/XMLSchema#"

Triple = tuple[str, str, "str | Literal"]


class TurtleParseError(ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


_IRIREF_RE = re.compile(r'<((?:[^\x00-\x20<>"{}|^`\\]|\\u[0-9A-Fa-f]{4}|\\U[0-9A-Fa-f]{8})*)>')
_PNAME_NS_RE = re.compile(r"(?:[A-Za-z_][A-Za-z0-9_\-.]*)?:")
_PN_LOCAL_RE = re.compile(r"(?:\\[~.\-!$&'()*+,;=/?#@%_]|%[0-9A-Fa-f]{2}|[^\s;,()\[\]#\"'\\])*")
_BNODE_RE = re.compile(r"_:[A-Za-z0-9_][A-Za-z0-9_\-.]*")
_NUMBER_RE = re.compile(
    r"[+-]?(?:\d+\.\d+(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?|\d+[eE][+-]?\d+|\d+)"
)
_LANGTAG_RE = re.compile(r"@([A-Za-z]+(?:-[A-Za-z0-9]+)*)")
_STRING_SHORT = {
    '"': re.compile(r'"((?:[^"\\\n\r]|\\.)*)"'),
    "'": re.compile(r"'((?:[^'\\\n\r]|\\.)*)'"),
}
_SCHEME_RE = re.compile(r"[A-Za-z][A-Za-z0-9+.\-]*:")
_BOOLEAN_RE = re.compile(r"(true|false)\b")


def parse_turtle(text: str, base: str | None = None) -> list[Triple]:
    """Parse Turtle (or N-Triples) text into (subject, predicate, object)
    triples. Blank nodes come back as ``_:`` labels; anonymous ones get
    generated labels scoped to this call."""
    return _Parser(text, base).parse()


def parse_turtle_file(path: str | Path, base: str | None = None) -> list[Triple]:
    return parse_turtle(Path(path).read_text(encoding="utf-8"), base)


class _Parser:
    def __init__(self, text: str, base: str | None):
        self.text = text
        self.pos = 0
        self.base = base
        self.prefixes: dict[str, str] = {}
        self.triples: list[Triple] = []
        self._bnode_counter = 0

    # -- scanning helpers ---------------------------------------------------

    def _line(self) -> int:
        return self.text.count("\n", 0, self.pos) + 1

    def _error(self, message: str) -> TurtleParseError:
        return TurtleParseError(message, self._line())

    def _skip_ws(self) -> None:
        text, n = self.text, len(self.text)
        while self.pos < n:
            c = text[self.pos]
            if c in " \t\r\n":
                self.pos += 1
            elif c == "#":
                end = text.find("\n", self.pos)
                self.pos = n if end == -1 else end + 1
            else:
                return

    def _peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def _expect(self, token: str) -> None:
        if not self.text.startswith(token, self.pos):
            raise self._error(f"expected {token!r}, found {self.text[self.pos:self.pos + 10]!r}")
        self.pos += len(token)

    def _match(self, pattern: re.Pattern) -> re.Match | None:
        m = pattern.match(self.text, self.pos)
        if m is not None:
            self.pos = m.end()
        return m

    def _new_bnode(self) -> str:
        self._bnode_counter += 1
        return f"_:genid{self._bnode_counter}"

    # -- grammar ------------------------------------------------------------

    def parse(self) -> list[Triple]:
        while True:
            self._skip_ws()
            if self.pos >= len(self.text):
                return self.triples
            if not self._parse_directive():
                self._parse_triples()
                self._skip_ws()
                self._expect(".")

    def _parse_directive(self) -> bool:
        text = self.text
        lowered = text[self.pos : self.pos + 7].lower()
        if text.startswith("@prefix", self.pos) or lowered.startswith("prefix"):
            sparql_style = not text.startswith("@prefix", self.pos)
            self.pos += 6 if sparql_style else 7
            self._skip_ws()
            ns = self._match(_PNAME_NS_RE)
            if ns is None:
                raise self._error("expected prefix name")
            self._skip_ws()
            iri = self._parse_iriref()
            self.prefixes[ns.group(0)[:-1]] = iri
            if not sparql_style:
                self._skip_ws()
                self._expect(".")
            return True
        if text.startswith("@base", self.pos) or lowered.startswith("base"):
            sparql_style = not text.startswith("@base", self.pos)
            self.pos += 4 if sparql_style else 5
            self._skip_ws()
            self.base = self._parse_iriref()
            if not sparql_style:
                self._skip_ws()
                self._expect(".")
            return True
        return False

    def _parse_triples(self) -> None:
        self._skip_ws()
        c = self._peek()
        if c == "[":
            subject = self._parse_bnode_property_list()
            self._skip_ws()
            if self._peek() != ".":
                self._parse_predicate_object_list(subject)
            return
        subject = self._parse_subject()
        self._parse_predicate_object_list(subject)

    def _parse_subject(self) -> str:
        c = self._peek()
        if c == "(":
            return self._parse_collection()
        if c == "_":
            m = self._match(_BNODE_RE)
            if m is None:
                raise self._error("bad blank node label")
            return m.group(0)
        return self._parse_iri()

    def _parse_predicate_object_list(self, subject: str) -> None:
        while True:
            self._skip_ws()
            predicate = self._parse_verb()
            self._parse_object_list(subject, predicate)
            self._skip_ws()
            if self._peek() != ";":
                return
            while self._peek() == ";":
                self.pos += 1
                self._skip_ws()
            if self._peek() in (".", "]", ""):
                return

    def _parse_object_list(self, subject: str, predicate: str) -> None:
        while True:
            self._skip_ws()
            obj = self._parse_object()
            self.triples.append((subject, predicate, obj))
            self._skip_ws()
            if self._peek() != ",":
                return
            self.pos += 1

    def _parse_verb(self) -> str:
        if self._peek() == "a":
            after = self.text[self.pos + 1 : self.pos + 2]
            if after == "" or after in " \t\r\n<[#":
                self.pos += 1
                return RDF_NS + "type"
        return self._parse_iri()

    def _parse_object(self) -> str | Literal:
        c = self._peek()
        if c == "(":
            return self._parse_collection()
        if c == "[":
            return self._parse_bnode_property_list()
        if c == "_":
            m = self._match(_BNODE_RE)
            if m is None:
                raise self._error("bad blank node label")
            return m.group(0)
        if c in "\"'":
            return self._parse_string_literal()
        if c.isdigit() or c in "+-" or (c == "." and self.text[self.pos + 1 : self.pos + 2].isdigit()):
            return self._parse_numeric_literal()
        m = _BOOLEAN_RE.match(self.text, self.pos)
        if m is not None:
            self.pos = m.end()
            return Literal(m.group(1), datatype=XSD_NS + "boolean")
        return self._parse_iri()

    def _parse_collection(self) -> str:
        self._expect("(")
        items: list[str | Literal] = []
        while True:
            self._skip_ws()
            if self._peek() == ")":
                self.pos += 1
                break
            if self.pos >= len(self.text):
                raise self._error("unterminated collection")
            items.append(self._parse_object())
        if not items:
            return RDF_NIL
        head = self._new_bnode()
        node = head
        for i, item in enumerate(items):
            self.triples.append((node, RDF_FIRST, item))
            if i + 1 < len(items):
                nxt = self._new_bnode()
                self.triples.append((node, RDF_REST, nxt))
                node = nxt
            else:
                self.triples.append((node, RDF_REST, RDF_NIL))
        return head

    def _parse_bnode_property_list(self) -> str:
        self._expect("[")
        node = self._new_bnode()
        self._skip_ws()
        if self._peek() == "]":
            self.pos += 1
            return node
        self._parse_predicate_object_list(node)
        self._skip_ws()
        self._expect("]")
        return node

    def _parse_string_literal(self) -> Literal:
        text = self.text
        quote = self._peek()
        long_quote = quote * 3
        if text.startswith(long_quote, self.pos):
            end = self.pos + 3
            while True:
                end = text.find(long_quote, end)
                if end == -1:
                    raise self._error("unterminated long string")
                if _count_trailing_backslashes(text, end) % 2 == 0:
                    break
                end += 1
            # Closing delimiter may be preceded by extra quote chars that
            # belong to the content ("""ends with quote"""").
            while text.startswith(quote, end + 3):
                end += 1
            raw = text[self.pos + 3 : end]
            self.pos = end + 3
        else:
            m = self._match(_STRING_SHORT[quote])
            if m is None:
                raise self._error("unterminated string")
            raw = m.group(1)
        lexical = unescape(raw)
        if self._peek() == "@":
            lang = self._match(_LANGTAG_RE)
            if lang is None:
                raise self._error("bad language tag")
            return Literal(lexical, language_tag=lang.group(1))
        if self.text.startswith("^^", self.pos):
            self.pos += 2
            return Literal(lexical, datatype=self._parse_iri())
        return Literal(lexical)

    def _parse_numeric_literal(self) -> Literal:
        m = self._match(_NUMBER_RE)
        if m is None:
            raise self._error("bad numeric literal")
        token = m.group(0)
        if "e" in token or "E" in token:
            datatype = XSD_NS + "double"
        elif "." in token:
            datatype = XSD_NS + "decimal"
        else:
            datatype = XSD_NS + "integer"
        return Literal(token, datatype=datatype)

    def _parse_iriref(self) -> str:
        m = self._match(_IRIREF_RE)
        if m is None:
            raise self._error("expected IRI")
        return self._resolve(unescape(m.group(1)))

    def _parse_iri(self) -> str:
        if self._peek() == "<":
            return self._parse_iriref()
        ns = self._match(_PNAME_NS_RE)
        if ns is None:
            raise self._error(f"expected IRI or prefixed name at {self.text[self.pos:self.pos + 10]!r}")
        prefix = ns.group(0)[:-1]
        if prefix not in self.prefixes:
            raise self._error(f"undefined prefix {prefix!r}")
        local = self._match(_PN_LOCAL_RE)
        local_text = local.group(0) if local is not None else ""
        # Trailing unescaped dots terminate the statement, not the name.
        while local_text.endswith(".") and not local_text.endswith("\\."):
            local_text = local_text[:-1]
            self.pos -= 1
        local_text = re.sub(r"\\(.)", r"\1", local_text)
        return self.prefixes[prefix] + local_text

    def _resolve(self, iri: str) -> str:
        if _SCHEME_RE.match(iri):
            return iri
        if self.base is None:
            return iri
        if iri == "":
            return self.base
        return urljoin(self.base, iri)


def _count_trailing_backslashes(text: str, end: int) -> int:
    count = 0
    i = end - 1
    while i >= 0 and text[i] == "\\":
        count += 1
        i -= 1
    return count
