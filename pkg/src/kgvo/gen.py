"""Synthetic snapshot corpora with machine-readable ground truth.

The generator takes a corpus spec (vocabulary version schedules expressed
as term edits, plus planted usages) and emits N-Quads snapshots, Turtle
vocabulary files, manifests, and a ground-truth file. Every expected
analytic value in the ground truth is computed directly from the spec
transcript, never through the diff/index/adoption code it will be checked
against.
"""

from __future__ import annotations

import gzip
import json
import math
import random
from dataclasses import dataclass
from datetime import date
from pathlib import Path

NOISE_NS = "http://noise.example/"

_MALFORMED_TEMPLATES = [
    '<http://noise.example/bad{i} <http://noise.example/p> "x" .',
    '<http://noise.example/s{i}> <http://noise.example/p> "bad\\qescape" .',
    '<http://noise.example/s{i}> <http://noise.example/p> "unterminated',
    "<http://noise.example/s{i}> <http://noise.example/p>",
    '<http://noise.example/s{i}> "not-an-iri" <http://noise.example/o> .',
]


class CorpusSpecError(ValueError):
    def __init__(self, violations: list[str]):
        super().__init__("invalid corpus spec:\n" + "\n".join(f"- {v}" for v in violations))
        self.violations = violations


@dataclass
class GeneratedCorpus:
    out_dir: Path
    corpus_manifest: Path
    vocab_manifest: Path
    ground_truth: Path
    snapshot_paths: list[Path]
    vocab_paths: list[Path]


def load_spec(path: str | Path) -> dict:
    with open(path, encoding="utf-8") as handle:
        return json.load(handle)


def validate_spec(spec: dict) -> list[str]:
    """All violations found in the spec; empty means generatable."""
    violations: list[str] = []

    snapshots = spec.get("snapshots", [])
    snapshot_dates = []
    for text in snapshots:
        try:
            snapshot_dates.append(date.fromisoformat(text))
        except (TypeError, ValueError):
            violations.append(f"bad snapshot date: {text!r}")
    if sorted(snapshot_dates) != snapshot_dates or len(set(snapshot_dates)) != len(snapshot_dates):
        violations.append("snapshot dates must be strictly increasing")
    if not snapshot_dates:
        violations.append("at least one snapshot date required")

    term_universe: dict[str, str] = {}  # iri -> kind
    seen_vocab_ids = set()
    for vocab in spec.get("vocabularies", []):
        vid = vocab.get("vocab_id", "?")
        if vid in seen_vocab_ids:
            violations.append(f"{vid}: duplicate vocab_id")
        seen_vocab_ids.add(vid)
        namespace = vocab.get("namespace", "")
        if not namespace.startswith("http"):
            violations.append(f"{vid}: namespace must be an http(s) IRI prefix")
        if namespace.startswith(NOISE_NS):
            violations.append(f"{vid}: namespace collides with the reserved noise namespace")
        state: dict[str, dict] = {}
        previous: date | None = None
        for i, version in enumerate(vocab.get("versions", [])):
            try:
                when = date.fromisoformat(version.get("date", ""))
            except (TypeError, ValueError):
                violations.append(f"{vid}: bad version date {version.get('date')!r}")
                continue
            if previous is not None and when <= previous:
                violations.append(f"{vid}: version dates must be strictly increasing")
            previous = when
            for entry in version.get("add", []):
                name, kind = entry.get("name"), entry.get("kind")
                if not name or not str(name).replace("_", "").isalnum():
                    violations.append(f"{vid}@{when}: bad term name {name!r}")
                    continue
                if kind not in ("class", "property"):
                    violations.append(f"{vid}@{when}: term {name}: kind must be class or property")
                if name in state:
                    violations.append(f"{vid}@{when}: add of existing term {name}")
                state[name] = {"kind": kind, "deprecated": bool(entry.get("deprecated", False))}
                term_universe[namespace + str(name)] = str(kind)
            for name in version.get("remove", []):
                if name not in state:
                    violations.append(f"{vid}@{when}: remove of missing term {name}")
                state.pop(name, None)
            for name in version.get("deprecate", []):
                if name not in state:
                    violations.append(f"{vid}@{when}: deprecate of missing term {name}")
                elif state[name]["deprecated"]:
                    violations.append(f"{vid}@{when}: deprecate of already-deprecated term {name}")
                else:
                    state[name]["deprecated"] = True
            for name in version.get("undeprecate", []):
                if name not in state:
                    violations.append(f"{vid}@{when}: undeprecate of missing term {name}")
                elif not state[name]["deprecated"]:
                    violations.append(f"{vid}@{when}: undeprecate of non-deprecated term {name}")
                else:
                    state[name]["deprecated"] = False
            if i == 0 and (version.get("remove") or version.get("deprecate") or version.get("undeprecate")):
                violations.append(f"{vid}: first version may only add terms")

    snapshot_set = set(snapshot_dates)
    for j, plant in enumerate(spec.get("usages", [])):
        term = plant.get("term", "")
        if term not in term_universe:
            violations.append(f"usages[{j}]: term {term!r} is not defined by any vocabulary")
        try:
            snap = date.fromisoformat(plant.get("snapshot", ""))
            if snap not in snapshot_set:
                violations.append(f"usages[{j}]: snapshot {snap} not in the snapshot list")
        except (TypeError, ValueError):
            violations.append(f"usages[{j}]: bad snapshot date {plant.get('snapshot')!r}")
        if not isinstance(plant.get("count"), int) or plant["count"] < 0:
            violations.append(f"usages[{j}]: count must be a non-negative integer")
        pld = plant.get("pld", "")
        if not pld or "/" in pld or pld != pld.lower():
            violations.append(f"usages[{j}]: pld must be a bare lowercase domain, got {pld!r}")

    noise = spec.get("noise", {})
    for key in ("malformed_per_snapshot", "untracked_per_snapshot"):
        value = noise.get(key, 0)
        if not isinstance(value, int) or value < 0:
            violations.append(f"noise.{key} must be a non-negative integer")

    return violations


def generate(spec: dict, out_dir: str | Path) -> GeneratedCorpus:
    """Write the corpus, vocabulary files, manifests, and ground truth.

    Deterministic: the same spec and seed produce byte-identical output.
    """
    violations = validate_spec(spec)
    if violations:
        raise CorpusSpecError(violations)

    out_dir = Path(out_dir)
    (out_dir / "snapshots").mkdir(parents=True, exist_ok=True)
    (out_dir / "vocabs").mkdir(parents=True, exist_ok=True)
    rng = random.Random(spec.get("seed", 0))
    use_gzip = bool(spec.get("gzip", False))
    snapshots = [date.fromisoformat(s) for s in spec["snapshots"]]
    noise = spec.get("noise", {})
    malformed_n = noise.get("malformed_per_snapshot", 0)
    untracked_n = noise.get("untracked_per_snapshot", 0)

    vocab_paths, manifest_rows, term_kinds = _write_vocabularies(spec, out_dir)

    # Aggregate plants per snapshot; duplicate (term, pld, snapshot) entries sum.
    per_snapshot: dict[date, dict[tuple[str, str], int]] = {d: {} for d in snapshots}
    for plant in spec.get("usages", []):
        snap = date.fromisoformat(plant["snapshot"])
        key = (plant["term"], plant["pld"])
        per_snapshot[snap][key] = per_snapshot[snap].get(key, 0) + plant["count"]

    snapshot_paths = []
    manifest_lines = []
    planted_quads: dict[str, int] = {}
    malformed_lines: dict[str, int] = {}
    serial = 0
    for snap in snapshots:
        lines = []
        for (term, pld), count in sorted(per_snapshot[snap].items()):
            kind = term_kinds[term]
            for _ in range(count):
                serial += 1
                subject = f"http://{pld}/r/{serial}"
                context = f"http://{pld}/page/{serial % 7}"
                if kind == "class":
                    lines.append(
                        f"<{subject}> <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> "
                        f"<{term}> <{context}> ."
                    )
                else:
                    lines.append(f'<{subject}> <{term}> "v{serial}" <{context}> .')
        for _ in range(untracked_n):
            serial += 1
            lines.append(
                f"<{NOISE_NS}s/{serial}> <{NOISE_NS}p/{rng.randrange(50)}> "
                f"<{NOISE_NS}o/{rng.randrange(1000)}> <{NOISE_NS}g/{rng.randrange(20)}> ."
            )
        quad_count = len(lines)
        for _ in range(malformed_n):
            serial += 1
            template = rng.choice(_MALFORMED_TEMPLATES)
            lines.append(template.format(i=serial))
        rng.shuffle(lines)
        lines.insert(0, f"# snapshot {snap.isoformat()}")

        name = f"{snap.isoformat()}.nq" + (".gz" if use_gzip else "")
        path = out_dir / "snapshots" / name
        payload = ("\n".join(lines) + "\n").encode("utf-8")
        if use_gzip:
            # mtime pinned so identical specs produce byte-identical archives
            with gzip.GzipFile(path, "wb", mtime=0) as handle:
                handle.write(payload)
        else:
            path.write_bytes(payload)
        snapshot_paths.append(path)
        manifest_lines.append(f"{snap.isoformat()} snapshots/{name}")
        planted_quads[snap.isoformat()] = quad_count
        malformed_lines[snap.isoformat()] = malformed_n

    corpus_manifest = out_dir / "corpus_manifest.txt"
    corpus_manifest.write_text("\n".join(manifest_lines) + "\n", encoding="utf-8")

    vocab_manifest = out_dir / "vocab_manifest.csv"
    rows = ["vocab_id,namespace,version_date,path"]
    rows += [",".join(row) for row in manifest_rows]
    vocab_manifest.write_text("\n".join(rows) + "\n", encoding="utf-8")

    truth = build_ground_truth(spec)
    truth["planted_quads"] = planted_quads
    truth["malformed_lines"] = malformed_lines
    ground_truth = out_dir / "ground_truth.json"
    ground_truth.write_text(
        json.dumps(truth, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )

    return GeneratedCorpus(
        out_dir=out_dir,
        corpus_manifest=corpus_manifest,
        vocab_manifest=vocab_manifest,
        ground_truth=ground_truth,
        snapshot_paths=snapshot_paths,
        vocab_paths=vocab_paths,
    )


def _write_vocabularies(
    spec: dict, out_dir: Path
) -> tuple[list[Path], list[list[str]], dict[str, str]]:
    vocab_paths = []
    manifest_rows = []
    term_kinds: dict[str, str] = {}
    for vocab in spec.get("vocabularies", []):
        vid = vocab["vocab_id"]
        namespace = vocab["namespace"]
        state: dict[str, dict] = {}
        for version in vocab["versions"]:
            when = version["date"]
            for entry in version.get("add", []):
                state[entry["name"]] = {
                    "kind": entry["kind"],
                    "deprecated": bool(entry.get("deprecated", False)),
                }
                term_kinds[namespace + entry["name"]] = entry["kind"]
            for name in version.get("remove", []):
                state.pop(name, None)
            for name in version.get("deprecate", []):
                state[name]["deprecated"] = True
            for name in version.get("undeprecate", []):
                state[name]["deprecated"] = False
            path = out_dir / "vocabs" / vid / f"{when}.ttl"
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(_render_turtle(vid, namespace, when, state), encoding="utf-8")
            vocab_paths.append(path)
            manifest_rows.append([vid, namespace, when, f"vocabs/{vid}/{when}.ttl"])
    return vocab_paths, manifest_rows, term_kinds


def _render_turtle(vid: str, namespace: str, when: str, state: dict[str, dict]) -> str:
    lines = [
        "@prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .",
        "@prefix owl: <http://www.w3.org/2002/07/owl#> .",
        "@prefix xsd: <http://www.w3.org/2001/XMLSchema#> .",
        f"@prefix v: <{namespace}> .",
        "",
        f"<{namespace.rstrip('#/')}> a owl:Ontology ;",
        f'    rdfs:label "{vid} vocabulary" ;',
        f'    rdfs:comment "version of {when}" .',
        "",
    ]
    for name in sorted(state):
        term = state[name]
        if term["kind"] == "class":
            rdf_type = "owl:Class"
        elif len(name) % 2 == 0:
            rdf_type = "owl:ObjectProperty"
        else:
            rdf_type = "owl:DatatypeProperty"
        lines.append(f"v:{name} a {rdf_type} ;")
        lines.append(f'    rdfs:label "{name}" ;')
        if term["deprecated"]:
            lines.append('    owl:deprecated "true"^^xsd:boolean ;')
        lines.append(f'    rdfs:isDefinedBy <{namespace.rstrip("#/")}> .')
        lines.append("")
    return "\n".join(lines)


def build_ground_truth(spec: dict) -> dict:
    """Expected analytic outputs, transcribed from the spec's edit and
    plant lists with plain arithmetic."""
    snapshots = [date.fromisoformat(s) for s in spec["snapshots"]]
    window = (snapshots[0], snapshots[-1])

    plants: dict[tuple[str, str, date], int] = {}
    for plant in spec.get("usages", []):
        if plant["count"] <= 0:
            continue
        key = (plant["term"], plant["pld"], date.fromisoformat(plant["snapshot"]))
        plants[key] = plants.get(key, 0) + plant["count"]

    usage: dict[str, list[dict]] = {d.isoformat(): [] for d in snapshots}
    for (term, pld, snap), count in sorted(plants.items()):
        usage[snap.isoformat()].append({"term": term, "pld": pld, "count": count})

    truth: dict = {
        "seed": spec.get("seed", 0),
        "snapshots": [d.isoformat() for d in snapshots],
        "usage": usage,
        "change_logs": {},
        "total_changes": {},
        "versions": {},
        "adoption": {},
        "vocab_stats": {},
        "unused": {},
        "deprecated_usage": {},
        "top_plds": {},
        "timeseries": {},
        "selection": {},
    }

    overall_plds: dict[str, int] = {}
    for vocab in spec.get("vocabularies", []):
        vid = vocab["vocab_id"]
        namespace = vocab["namespace"]
        versions = vocab["versions"]
        version_dates = [date.fromisoformat(v["date"]) for v in versions]
        truth["versions"][vid] = [d.isoformat() for d in version_dates]

        events: list[dict] = []
        pending_break: dict[str, str] = {}
        first_add: dict[str, tuple[int, date]] = {}
        universe: list[str] = []
        deprecations: list[tuple[str, date]] = []
        for i, version in enumerate(versions):
            when = version["date"]
            for entry in version.get("add", []):
                iri = namespace + entry["name"]
                if iri not in first_add:
                    first_add[iri] = (i, date.fromisoformat(when))
                    universe.append(iri)
                events.append(
                    {"term": iri, "kind": "added", "from": versions[i - 1]["date"] if i else "", "to": when}
                )
                if entry.get("deprecated", False):
                    if i:
                        events.append(
                            {"term": iri, "kind": "deprecated", "from": versions[i - 1]["date"], "to": when}
                        )
                        pending_break[iri] = when
                        deprecations.append((iri, date.fromisoformat(when)))
                elif iri in pending_break:
                    broke = pending_break.pop(iri)
                    events.append({"term": iri, "kind": "recreated", "from": broke, "to": when})
            for name in version.get("remove", []):
                iri = namespace + name
                events.append(
                    {"term": iri, "kind": "removed", "from": versions[i - 1]["date"], "to": when}
                )
                pending_break[iri] = when
            for name in version.get("deprecate", []):
                iri = namespace + name
                events.append(
                    {"term": iri, "kind": "deprecated", "from": versions[i - 1]["date"], "to": when}
                )
                pending_break[iri] = when
                deprecations.append((iri, date.fromisoformat(when)))
            for name in version.get("undeprecate", []):
                iri = namespace + name
                events.append(
                    {"term": iri, "kind": "undeprecated", "from": versions[i - 1]["date"], "to": when}
                )
                if iri in pending_break:
                    broke = pending_break.pop(iri)
                    events.append({"term": iri, "kind": "recreated", "from": broke, "to": when})
        events.sort(key=lambda e: (e["to"], e["kind"], e["term"]))
        truth["change_logs"][vid] = events
        truth["total_changes"][vid] = sum(
            1 for e in events if e["kind"] in ("added", "removed", "deprecated") and e["from"]
        )

        adoption_rows = []
        lags = []
        total_instances = 0
        for iri in sorted(first_add):
            version_index, publish = first_add[iri]
            if version_index == 0:
                continue
            uses = sorted(
                (snap, pld, count)
                for (term, pld, snap), count in plants.items()
                if term == iri
            )
            first_use = uses[0][0] if uses else None
            instances = sum(u[2] for u in uses)
            total_instances += instances
            lag = (first_use - publish).days if first_use else None
            if lag is not None:
                lags.append(lag)
            adoption_rows.append(
                {
                    "term": iri,
                    "publish_date": publish.isoformat(),
                    "first_use": first_use.isoformat() if first_use else None,
                    "lag_days": lag,
                    "instance_count": instances,
                    "adopting_plds": sorted({u[1] for u in uses}),
                }
            )
        truth["adoption"][vid] = adoption_rows
        mu = sum(lags) / len(lags) if lags else None
        sigma = (
            math.sqrt(sum((x - mu) ** 2 for x in lags) / len(lags)) if len(lags) >= 2 else None
        )
        truth["vocab_stats"][vid] = {
            "total_new_terms": len(adoption_rows),
            "adopted_terms": len(lags),
            "pct_used": _pct(len(lags), len(adoption_rows)),
            "total_instances": total_instances,
            "mu_days": mu,
            "sigma_days": sigma,
        }

        used = {term for (term, _, _), count in plants.items() if count > 0}
        unused = [iri for iri in sorted(universe) if iri not in used]
        truth["unused"][vid] = {
            "total_terms": len(universe),
            "unused": len(unused),
            "pct_unused": _pct(len(unused), len(universe)) if universe else 0,
        }

        dep_rows = []
        for iri, dep_date in sorted(set(deprecations)):
            series: dict[str, int] = {}
            offenders: dict[str, int] = {}
            for (term, pld, snap), count in plants.items():
                if term == iri and snap >= dep_date:
                    series[snap.isoformat()] = series.get(snap.isoformat(), 0) + count
                    offenders[pld] = offenders.get(pld, 0) + count
            dep_rows.append(
                {
                    "term": iri,
                    "deprecation_date": dep_date.isoformat(),
                    "series": [list(kv) for kv in sorted(series.items())],
                    "plds": [list(kv) for kv in sorted(offenders.items(), key=lambda kv: (-kv[1], kv[0]))],
                }
            )
        truth["deprecated_usage"][vid] = dep_rows

        vocab_plds: dict[str, int] = {}
        timeline = {d: 0 for d in snapshots}
        vocab_terms = set(universe)
        for (term, pld, snap), count in plants.items():
            if term in vocab_terms:
                vocab_plds[pld] = vocab_plds.get(pld, 0) + count
                timeline[snap] += count
                overall_plds[pld] = overall_plds.get(pld, 0) + count
        truth["top_plds"][vid] = [list(kv) for kv in sorted(vocab_plds.items(), key=lambda kv: (-kv[1], kv[0]))]
        truth["timeseries"][vid] = [[d.isoformat(), timeline[d]] for d in snapshots]

        reasons = []
        if len(version_dates) < 2:
            reasons.append("fewer-than-two-versions")
        if version_dates and not any(window[0] <= d <= window[1] for d in version_dates):
            reasons.append("versions-outside-corpus-window")
        if not any(term in vocab_terms for (term, _, _) in plants):
            reasons.append("no-direct-use")
        truth["selection"][vid] = {"eligible": not reasons, "reasons": reasons}

    truth["top_plds_overall"] = [list(kv) for kv in sorted(overall_plds.items(), key=lambda kv: (-kv[1], kv[0]))]
    return truth


def write_benchmark_snapshot(
    path: str | Path, quad_count: int, property_iris: list[str], hosts: int = 97
) -> int:
    """Stream a large well-formed snapshot for throughput and memory
    benchmarks: every line uses one of the given properties in predicate
    position. Returns the number of lines written; memory stays flat
    regardless of quad_count."""
    if not property_iris:
        raise ValueError("at least one property IRI required")
    path = Path(path)
    n_props = len(property_iris)
    with open(path, "w", encoding="utf-8") as handle:
        chunk: list[str] = []
        for i in range(quad_count):
            host = i % hosts
            chunk.append(
                f"<http://host{host}.example.org/resource/{i}> "
                f"<{property_iris[i % n_props]}> "
                f'"value {i}" '
                f"<http://host{host}.example.org/page/{i % 11}> ."
            )
            if len(chunk) == 20_000:
                handle.write("\n".join(chunk) + "\n")
                chunk.clear()
        if chunk:
            handle.write("\n".join(chunk) + "\n")
    return quad_count


def _pct(numerator: int, denominator: int) -> int:
    if denominator == 0:
        return 0
    scaled = numerator * 200 + denominator
    return scaled // (2 * denominator)
