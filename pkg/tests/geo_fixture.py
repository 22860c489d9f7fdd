"""Seven-version geographic ontology fixture shared by several suites.

Encodes a vocabulary history with a mid-life deprecation wave, one fast
undeprecation, a late bulk extension, and three terms that come back after
being deprecated. Frozen expectations: 7 versions, 31 counted changes,
43 distinct in-namespace terms, recreations of name / alternateName /
shortName.
"""

from datetime import date

from kgvo.vocab import CLASS, PROPERTY, TermRecord, VocabVersion

NS = "http://www.geonames.org/ontology#"
VOCAB_ID = "gn"

V1_CLASSES = ["Feature", "Country", "Map", "WikipediaArticle", "RSSFeed"]
V1_PROPERTIES = [
    "name",
    "alternateName",
    "officialName",
    "population",
    "parentFeature",
    "parentCountry",
    "locatedIn",
    "nearby",
    "neighbour",
    "wikipediaArticle",
    "locationMap",
    "countryCode",
    "postalCode",
]
V6_CLASSES = ["Code", "PostalCodeArea", "HistoricalFeature"]
V6_PROPERTIES = [
    "geonamesID",
    "historicalName",
    "colloquialName",
    "admin3Code",
    "admin4Code",
    "admin5Code",
    "alternateNames",
    "cc2",
    "dem",
    "elevation",
    "fcl",
    "fcode",
    "gtopo30",
    "mapViews",
    "srtm3",
    "timezone",
    "asciiName",
    "modificationDate",
]

# (date, edits) — applied in order to build each version's term state.
EDITS = [
    (
        date(2006, 10, 1),
        {
            "add": [(n, CLASS) for n in V1_CLASSES] + [(n, PROPERTY) for n in V1_PROPERTIES],
        },
    ),
    (date(2008, 5, 10), {"add": [("admin1Code", PROPERTY), ("admin2Code", PROPERTY)]}),
    (date(2010, 5, 1), {"add_deprecated": [("shortName", PROPERTY)]}),
    (date(2010, 9, 25), {"deprecate": ["name", "alternateName", "Country", "population"]}),
    (date(2010, 10, 8), {"undeprecate": ["name"]}),
    (
        date(2012, 2, 25),
        {
            "add": [(n, CLASS) for n in V6_CLASSES] + [(n, PROPERTY) for n in V6_PROPERTIES],
            "undeprecate": ["alternateName", "shortName"],
        },
    ),
    (date(2012, 10, 20), {"add": [("GeonamesFeature", CLASS)], "remove": ["RSSFeed"]}),
]

EXPECTED_VERSION_COUNT = 7
EXPECTED_TOTAL_CHANGES = 31
EXPECTED_UNION_TERMS = 43
EXPECTED_RECREATIONS = {
    NS + "name": (date(2010, 9, 25), date(2010, 10, 8)),
    NS + "alternateName": (date(2010, 9, 25), date(2012, 2, 25)),
    NS + "shortName": (date(2010, 5, 1), date(2012, 2, 25)),
}


def version_states() -> list[tuple[date, dict[str, tuple[str, bool]]]]:
    """Materialized per-version term state: name -> (kind, deprecated)."""
    state: dict[str, tuple[str, bool]] = {}
    versions = []
    for when, edits in EDITS:
        for name, kind in edits.get("add", []):
            state[name] = (kind, False)
        for name, kind in edits.get("add_deprecated", []):
            state[name] = (kind, True)
        for name in edits.get("remove", []):
            del state[name]
        for name in edits.get("deprecate", []):
            state[name] = (state[name][0], True)
        for name in edits.get("undeprecate", []):
            state[name] = (state[name][0], False)
        versions.append((when, dict(state)))
    return versions


def build_versions() -> list[VocabVersion]:
    """The fixture as VocabVersion objects, bypassing document parsing."""
    versions = []
    for when, state in version_states():
        terms = tuple(
            TermRecord(NS + name, kind, deprecated, True)
            for name, (kind, deprecated) in sorted(state.items())
        )
        versions.append(VocabVersion(VOCAB_ID, NS, when, terms))
    return versions


def render_version(when: date, state: dict[str, tuple[str, bool]]) -> str:
    """Turtle rendering with deliberately varied deprecation markers."""
    lines = [
        "@prefix rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#> .",
        "@prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .",
        "@prefix owl: <http://www.w3.org/2002/07/owl#> .",
        "@prefix xsd: <http://www.w3.org/2001/XMLSchema#> .",
        "@prefix vs: <http://www.w3.org/2003/06/sw-vocab-status/ns#> .",
        f"@prefix gn: <{NS}> .",
        "",
        "<http://www.geonames.org/ontology> a owl:Ontology ;",
        f'    rdfs:comment """The geographic ontology,\nversion of {when.isoformat()}.""" .',
        "",
    ]
    for name in sorted(state):
        kind, deprecated = state[name]
        if kind == CLASS:
            type_text = "owl:Class"
        elif name in ("population", "shortName") and deprecated:
            type_text = "owl:DatatypeProperty, owl:DeprecatedProperty"
        elif name.endswith("Code") or name.endswith("Name") or name == "name":
            type_text = "owl:DatatypeProperty"
        else:
            type_text = "owl:ObjectProperty"
        lines.append(f"gn:{name} a {type_text} ;")
        lines.append(f'    rdfs:label "{name}" ;')
        if deprecated and name in ("Country",):
            lines.append('    vs:term_status "deprecated" ;')
        elif deprecated and name not in ("population", "shortName"):
            lines.append('    owl:deprecated "true"^^xsd:boolean ;')
        elif not deprecated and name in ("name", "alternateName", "shortName"):
            lines.append('    vs:term_status "stable" ;')
        lines.append("    rdfs:isDefinedBy <http://www.geonames.org/ontology> .")
        lines.append("")
    return "\n".join(lines)


def write_version_files(directory) -> list[tuple[date, str]]:
    """Render every version to `<dir>/<date>.ttl`; returns (date, path)."""
    out = []
    for when, state in version_states():
        path = directory / f"{when.isoformat()}.ttl"
        path.write_text(render_version(when, state), encoding="utf-8")
        out.append((when, str(path)))
    return out
