"""Pay-level-domain resolution: map any IRI to the registrable domain of
its host via public suffix list rules, for publisher attribution."""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple


class PldResult(NamedTuple):
    pld: str | None
    used_fallback: bool  # no rule matched; last-two-labels heuristic applied


@dataclass(frozen=True)
class SuffixRules:
    """Indexed public suffix rules; immutable and safe for concurrent reads.

    Rules are keyed by dot-joined lowercased label suffixes. A wildcard
    rule `*.ck` is stored under its base `ck`; an exception rule `!www.ck`
    under `www.ck`. Exceptions override wildcard and exact rules.
    """

    exact: frozenset[str]
    wildcard_bases: frozenset[str]
    exceptions: frozenset[str]
    source_version: str

    def registrable_domain(self, host: str) -> PldResult:
        """The public suffix plus one label, or None when the host itself
        is (at or below) a public suffix boundary with nothing to register."""
        labels = host.split(".")
        n = len(labels)
        suffix = ""
        for k in range(n, 0, -1):
            suffix = ".".join(labels[n - k :]) if k > 1 else labels[-1]
            if suffix in self.exceptions:
                return self._take(labels, k - 1)
            if suffix in self.exact:
                return self._take(labels, k)
            if k >= 2 and ".".join(labels[n - k + 1 :]) in self.wildcard_bases:
                return self._take(labels, k)
        # No rule matched: the conventional default `*` rule, i.e. the
        # last-two-labels heuristic, flagged so stats can report it.
        pld = self._take(labels, 1).pld
        return PldResult(pld, True)

    @staticmethod
    def _take(labels: list[str], suffix_len: int) -> PldResult:
        if len(labels) <= suffix_len:
            return PldResult(None, False)
        return PldResult(".".join(labels[-(suffix_len + 1) :]), False)


def load_psl(source: str | Path) -> SuffixRules:
    """Load a public suffix list in the standard text format: `//` comment
    lines, one rule per line, `*.` wildcards, `!` exceptions. A comment
    containing `VERSION:` is recorded as the rule-set version."""
    path = Path(source)
    text = path.read_text(encoding="utf-8")
    exact = set()
    wildcards = set()
    exceptions = set()
    version = "unknown"
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("//"):
            m = re.search(r"VERSION:\s*(\S+)", line)
            if m:
                version = m.group(1)
            continue
        rule = line.split()[0].lower()
        if rule.startswith("!"):
            exceptions.add(rule[1:])
        elif rule.startswith("*."):
            wildcards.add(rule[2:])
        else:
            exact.add(rule)
    if not (exact or wildcards or exceptions):
        raise ValueError(f"{path}: no public suffix rules found")
    return SuffixRules(
        exact=frozenset(exact),
        wildcard_bases=frozenset(wildcards),
        exceptions=frozenset(exceptions),
        source_version=version,
    )


def bundled_psl_path() -> Path:
    """The public suffix list snapshot pinned in the package."""
    return Path(__file__).parent / "data" / "public_suffix_list.dat"


_IPV4_RE = re.compile(r"^\d{1,3}(?:\.\d{1,3}){3}$")


def host_of(iri: str) -> str | None:
    """Pull the DNS host out of an IRI; None for blank nodes, IRIs without
    an authority (urn:, mailto:), IP literals, and non-ASCII hosts."""
    sep = iri.find("://")
    if sep <= 0:
        return None
    end = len(iri)
    for stop in "/?#":
        idx = iri.find(stop, sep + 3)
        if idx != -1 and idx < end:
            end = idx
    authority = iri[sep + 3 : end]
    at = authority.rfind("@")
    if at != -1:
        authority = authority[at + 1 :]
    if authority.startswith("["):  # IPv6 literal
        return None
    colon = authority.rfind(":")
    if colon != -1 and authority[colon + 1 :].isdigit():
        authority = authority[:colon]
    if not authority or not authority.isascii():
        return None
    host = authority.lower().rstrip(".")
    if not host or ".." in host or host.startswith("."):
        return None
    if _IPV4_RE.match(host):
        return None
    return host


def resolve_host(host: str, rules: SuffixRules) -> PldResult:
    return rules.registrable_domain(host)


def extract_pld(iri: str, rules: SuffixRules) -> str | None:
    """PLD of an IRI's host, or None. Total: never raises on odd input."""
    if not iri or iri.startswith("_:"):
        return None
    host = host_of(iri)
    if host is None:
        return None
    return rules.registrable_domain(host).pld
