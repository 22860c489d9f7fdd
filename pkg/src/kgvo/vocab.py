"""Extract the dated class/property term set of one vocabulary document."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from datetime import date
from pathlib import Path

from .nquads import RDF_TYPE, Literal
from .turtle import Triple, parse_turtle_file

RDFS_NS = "http://www.w3.org/2000/01/rdf-schema#"
OWL_NS = "http://www.w3.org/2002/07/owl#"
VS_TERM_STATUS = "http://www.w3.org/2003/06/sw-vocab-status/ns#term_status"
OWL_DEPRECATED = OWL_NS + "deprecated"
OWL_DEPRECATED_CLASS = OWL_NS + "DeprecatedClass"
OWL_DEPRECATED_PROPERTY = OWL_NS + "DeprecatedProperty"

CLASS = "class"
PROPERTY = "property"

CLASS_TYPES = frozenset({RDFS_NS + "Class", OWL_NS + "Class", OWL_DEPRECATED_CLASS})
PROPERTY_TYPES = frozenset(
    {
        "http://www.w3.org/1999/02/22-rdf-syntax-ns#Property",
        OWL_NS + "ObjectProperty",
        OWL_NS + "DatatypeProperty",
        OWL_NS + "AnnotationProperty",
        OWL_NS + "FunctionalProperty",
        OWL_DEPRECATED_PROPERTY,
    }
)


@dataclass(frozen=True)
class TermRecord:
    iri: str
    kind: str  # CLASS or PROPERTY
    deprecated: bool
    defined_in_namespace: bool


@dataclass
class VocabVersion:
    """The dated term set of one vocabulary version; immutable by convention."""

    vocab_id: str
    namespace: str
    version_date: date
    terms: tuple[TermRecord, ...]
    warnings: tuple[str, ...] = ()
    by_iri: dict[str, TermRecord] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        self.by_iri = {t.iri: t for t in self.terms}

    def in_namespace(self) -> tuple[TermRecord, ...]:
        return tuple(t for t in self.terms if t.defined_in_namespace)

    def in_namespace_iris(self) -> frozenset[str]:
        return frozenset(t.iri for t in self.terms if t.defined_in_namespace)


def is_deprecated(term_statements: list[Triple]) -> bool:
    """True when any accepted deprecation marker is present:
    owl:deprecated "true", typing as owl:DeprecatedClass/Property, or a
    vs:term_status of "deprecated" (case-insensitive). Conflicting
    owl:deprecated values resolve to True."""
    deprecated, _ = deprecation_status(term_statements)
    return deprecated


def deprecation_status(term_statements: list[Triple]) -> tuple[bool, list[str]]:
    """(deprecated, warnings); warnings flag conflicting markers."""
    saw_true = False
    saw_false = False
    warnings: list[str] = []
    for _, predicate, obj in term_statements:
        if predicate == OWL_DEPRECATED and isinstance(obj, Literal):
            if obj.lexical_form == "true":
                saw_true = True
            elif obj.lexical_form == "false":
                saw_false = True
        elif predicate == RDF_TYPE and obj in (OWL_DEPRECATED_CLASS, OWL_DEPRECATED_PROPERTY):
            saw_true = True
        elif predicate == VS_TERM_STATUS and isinstance(obj, Literal):
            if obj.lexical_form.lower() == "deprecated":
                saw_true = True
    if saw_true and saw_false:
        warnings.append("conflicting owl:deprecated markers; treated as deprecated")
    return saw_true, warnings


def extract_terms(
    doc: list[Triple], namespace: str, version_date: date, vocab_id: str
) -> VocabVersion:
    """Collect the class/property terms declared in a vocabulary document.

    A term is a class iff it is explicitly rdf:type-ed with a class type,
    a property iff typed with a property type. Subjects typed both ways are
    recorded as properties with a warning. Terms outside the namespace are
    kept but flagged defined_in_namespace=False.
    """
    by_subject: dict[str, list[Triple]] = {}
    for triple in doc:
        subject = triple[0]
        if subject.startswith("_:"):
            continue
        by_subject.setdefault(subject, []).append(triple)

    warnings: list[str] = []
    records: list[TermRecord] = []
    for subject in sorted(by_subject):
        statements = by_subject[subject]
        is_class = False
        is_property = False
        for _, predicate, obj in statements:
            if predicate == RDF_TYPE and isinstance(obj, str):
                if obj in CLASS_TYPES:
                    is_class = True
                elif obj in PROPERTY_TYPES:
                    is_property = True
        if not (is_class or is_property):
            continue
        if is_class and is_property:
            warnings.append(f"{subject}: typed as both class and property; recorded as property")
        deprecated, dep_warnings = deprecation_status(statements)
        warnings.extend(f"{subject}: {w}" for w in dep_warnings)
        records.append(
            TermRecord(
                iri=subject,
                kind=PROPERTY if is_property else CLASS,
                deprecated=deprecated,
                defined_in_namespace=subject.startswith(namespace),
            )
        )

    if not any(r.defined_in_namespace for r in records):
        warnings.append("no terms defined in the vocabulary namespace")
    return VocabVersion(
        vocab_id=vocab_id,
        namespace=namespace,
        version_date=version_date,
        terms=tuple(records),
        warnings=tuple(warnings),
    )


def load_vocab_version(
    path: str | Path, namespace: str, version_date: date, vocab_id: str
) -> VocabVersion:
    """Parse one Turtle/N-Triples vocabulary file and extract its terms."""
    return extract_terms(parse_turtle_file(path), namespace, version_date, vocab_id)


def union_terms(versions: list[VocabVersion]) -> VocabVersion:
    """Union of all versions' terms: the whole-vocabulary universe used for
    usage tracking and unused-term reporting. Kind and deprecation state
    come from the latest version that mentions each term."""
    if not versions:
        raise ValueError("union_terms needs at least one version")
    ordered = sorted(versions, key=lambda v: v.version_date)
    latest: dict[str, TermRecord] = {}
    for version in ordered:
        for term in version.terms:
            latest[term.iri] = term
    return VocabVersion(
        vocab_id=ordered[-1].vocab_id,
        namespace=ordered[-1].namespace,
        version_date=ordered[-1].version_date,
        terms=tuple(latest[iri] for iri in sorted(latest)),
    )


@dataclass(frozen=True)
class VocabManifestEntry:
    vocab_id: str
    namespace: str
    version_date: date
    path: Path


def read_vocab_manifest(path: str | Path) -> list[VocabManifestEntry]:
    """Read a vocabulary manifest CSV: vocab_id,namespace,version_date,path.

    Relative paths resolve against the manifest's directory; version dates
    come from this file (or the archive watcher that wrote it), never from
    version text inside the documents.
    """
    path = Path(path)
    entries = []
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        required = {"vocab_id", "namespace", "version_date", "path"}
        if reader.fieldnames is None or not required.issubset(reader.fieldnames):
            raise ValueError(f"{path}: manifest needs columns {sorted(required)}")
        for row in reader:
            file_path = Path(row["path"])
            if not file_path.is_absolute():
                file_path = path.parent / file_path
            entries.append(
                VocabManifestEntry(
                    vocab_id=row["vocab_id"],
                    namespace=row["namespace"],
                    version_date=date.fromisoformat(row["version_date"]),
                    path=file_path,
                )
            )
    entries.sort(key=lambda e: (e.vocab_id, e.version_date))
    return entries


def load_vocabularies(
    manifest: list[VocabManifestEntry],
) -> dict[str, list[VocabVersion]]:
    """Load every manifest entry, grouped by vocabulary and ordered by date."""
    grouped: dict[str, list[VocabVersion]] = {}
    for entry in manifest:
        version = load_vocab_version(entry.path, entry.namespace, entry.version_date, entry.vocab_id)
        grouped.setdefault(entry.vocab_id, []).append(version)
    for versions in grouped.values():
        versions.sort(key=lambda v: v.version_date)
    return grouped
