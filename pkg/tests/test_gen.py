import json
from datetime import date

import pytest

from kgvo.gen import CorpusSpecError, build_ground_truth, generate, validate_spec
from kgvo.nquads import open_snapshot, read_corpus_manifest
from kgvo.pld import bundled_psl_path, load_psl
from kgvo.usage import index_snapshot
from kgvo.vocab import load_vocabularies, read_vocab_manifest, union_terms

NS = "http://vocab-alpha.example.org/ns#"


def base_spec() -> dict:
    return {
        "seed": 11,
        "snapshots": ["2014-01-05", "2014-01-12", "2014-01-19"],
        "vocabularies": [
            {
                "vocab_id": "alpha",
                "namespace": NS,
                "versions": [
                    {
                        "date": "2013-12-01",
                        "add": [
                            {"name": "Thing", "kind": "class"},
                            {"name": "label", "kind": "property"},
                        ],
                    },
                    {
                        "date": "2014-01-05",
                        "add": [{"name": "title", "kind": "property"}],
                        "deprecate": ["label"],
                    },
                ],
            }
        ],
        "usages": [
            {"term": NS + "title", "pld": "w3.org", "snapshot": "2014-01-12", "count": 4},
            {"term": NS + "Thing", "pld": "geonames.org", "snapshot": "2014-01-05", "count": 2},
            {"term": NS + "label", "pld": "w3.org", "snapshot": "2014-01-19", "count": 1},
        ],
        "noise": {"malformed_per_snapshot": 3, "untracked_per_snapshot": 10},
    }


class TestValidation:
    def test_valid_spec_has_no_violations(self):
        assert validate_spec(base_spec()) == []

    def test_unknown_usage_term(self):
        spec = base_spec()
        spec["usages"].append({"term": "http://nowhere/x", "pld": "a.org", "snapshot": "2014-01-05", "count": 1})
        violations = validate_spec(spec)
        assert any("not defined by any vocabulary" in v for v in violations)

    def test_usage_snapshot_must_exist(self):
        spec = base_spec()
        spec["usages"][0]["snapshot"] = "2019-01-01"
        assert any("not in the snapshot list" in v for v in validate_spec(spec))

    def test_snapshots_must_increase(self):
        spec = base_spec()
        spec["snapshots"] = ["2014-01-12", "2014-01-05"]
        assert any("strictly increasing" in v for v in validate_spec(spec))

    def test_remove_of_missing_term(self):
        spec = base_spec()
        spec["vocabularies"][0]["versions"][1]["remove"] = ["nonexistent"]
        assert any("remove of missing term" in v for v in validate_spec(spec))

    def test_first_version_must_only_add(self):
        spec = base_spec()
        spec["vocabularies"][0]["versions"][0]["deprecate"] = []
        spec["vocabularies"][0]["versions"][0]["remove"] = ["Thing"]
        assert any("first version may only add" in v for v in validate_spec(spec))

    def test_negative_count(self):
        spec = base_spec()
        spec["usages"][0]["count"] = -2
        assert any("non-negative" in v for v in validate_spec(spec))

    def test_generate_raises_on_invalid(self, tmp_path):
        spec = base_spec()
        spec["snapshots"] = []
        with pytest.raises(CorpusSpecError) as excinfo:
            generate(spec, tmp_path)
        assert excinfo.value.violations


class TestGeneration:
    def test_deterministic_output(self, tmp_path):
        a = generate(base_spec(), tmp_path / "a")
        b = generate(base_spec(), tmp_path / "b")
        files_a = sorted(p.relative_to(a.out_dir) for p in (tmp_path / "a").rglob("*") if p.is_file())
        files_b = sorted(p.relative_to(b.out_dir) for p in (tmp_path / "b").rglob("*") if p.is_file())
        assert files_a == files_b
        for rel in files_a:
            assert (tmp_path / "a" / rel).read_bytes() == (tmp_path / "b" / rel).read_bytes()

    def test_manifests_load(self, tmp_path):
        generated = generate(base_spec(), tmp_path)
        corpus = read_corpus_manifest(generated.corpus_manifest)
        assert [d.isoformat() for d, _ in corpus] == ["2014-01-05", "2014-01-12", "2014-01-19"]
        vocabs = load_vocabularies(read_vocab_manifest(generated.vocab_manifest))
        assert set(vocabs) == {"alpha"}
        assert len(vocabs["alpha"]) == 2
        assert vocabs["alpha"][1].by_iri[NS + "label"].deprecated

    def test_snapshots_parse_with_expected_skips(self, tmp_path):
        generated = generate(base_spec(), tmp_path)
        truth = json.loads(generated.ground_truth.read_text())
        for day, path in read_corpus_manifest(generated.corpus_manifest):
            quads, stats = open_snapshot(path, day)
            emitted = sum(1 for _ in quads)
            assert emitted == truth["planted_quads"][day.isoformat()]
            assert stats.lines_skipped == truth["malformed_lines"][day.isoformat()]

    def test_indexed_counts_match_truth(self, tmp_path):
        generated = generate(base_spec(), tmp_path)
        truth = json.loads(generated.ground_truth.read_text())
        rules = load_psl(bundled_psl_path())
        vocabs = load_vocabularies(read_vocab_manifest(generated.vocab_manifest))
        tracked = union_terms(vocabs["alpha"]).in_namespace()
        for day, path in read_corpus_manifest(generated.corpus_manifest):
            quads, _ = open_snapshot(path, day)
            usage = index_snapshot(quads, tracked, rules, snapshot_date=day)
            expected = {
                (row["term"], row["pld"]): row["count"]
                for row in truth["usage"][day.isoformat()]
            }
            assert {(t, p): c for (t, p), c in usage.counts.items()} == expected

    def test_gzip_variant(self, tmp_path):
        spec = base_spec()
        spec["gzip"] = True
        generated = generate(spec, tmp_path)
        assert all(p.suffix == ".gz" for p in generated.snapshot_paths)
        day, path = read_corpus_manifest(generated.corpus_manifest)[0]
        quads, stats = open_snapshot(path, day)
        assert sum(1 for _ in quads) > 0

    def test_zero_usage_spec(self, tmp_path):
        spec = base_spec()
        spec["usages"] = []
        generated = generate(spec, tmp_path)
        truth = json.loads(generated.ground_truth.read_text())
        assert all(rows == [] for rows in truth["usage"].values())
        assert truth["unused"]["alpha"]["unused"] == truth["unused"]["alpha"]["total_terms"]
        day, path = read_corpus_manifest(generated.corpus_manifest)[0]
        quads, _ = open_snapshot(path, day)
        subjects = {q.subject for q in quads}
        assert all(s.startswith("http://noise.example/") for s in subjects)


class TestGroundTruth:
    def test_change_transcript(self):
        truth = build_ground_truth(base_spec())
        events = truth["change_logs"]["alpha"]
        assert {"term": NS + "title", "kind": "added", "from": "2013-12-01", "to": "2014-01-05"} in events
        assert {"term": NS + "label", "kind": "deprecated", "from": "2013-12-01", "to": "2014-01-05"} in events
        assert truth["total_changes"]["alpha"] == 2

    def test_adoption_lags(self):
        truth = build_ground_truth(base_spec())
        (record,) = truth["adoption"]["alpha"]
        assert record["term"] == NS + "title"
        assert record["lag_days"] == 7
        assert record["instance_count"] == 4

    def test_identical_lags_mu_sigma(self):
        spec = base_spec()
        spec["vocabularies"][0]["versions"][1]["add"] = [
            {"name": f"n{i}", "kind": "property"} for i in range(3)
        ]
        spec["usages"] = [
            {"term": NS + f"n{i}", "pld": "w3.org", "snapshot": "2014-01-12", "count": 1}
            for i in range(3)
        ]
        truth = build_ground_truth(spec)
        stats = truth["vocab_stats"]["alpha"]
        assert stats["mu_days"] == 7.0
        assert stats["sigma_days"] == 0.0
        assert stats["pct_used"] == 100

    def test_recreation_transcript(self):
        spec = base_spec()
        spec["vocabularies"][0]["versions"].append(
            {"date": "2014-02-01", "undeprecate": ["label"]}
        )
        truth = build_ground_truth(spec)
        events = truth["change_logs"]["alpha"]
        assert {"term": NS + "label", "kind": "recreated", "from": "2014-01-05", "to": "2014-02-01"} in events

    def test_deprecated_usage_series(self):
        truth = build_ground_truth(base_spec())
        (row,) = truth["deprecated_usage"]["alpha"]
        assert row["term"] == NS + "label"
        assert row["series"] == [["2014-01-19", 1]]
        assert row["plds"] == [["w3.org", 1]]

    def test_selection_verdicts(self):
        spec = base_spec()
        spec["vocabularies"].append(
            {
                "vocab_id": "lone",
                "namespace": "http://lone.example.org/ns#",
                "versions": [
                    {"date": "2013-01-01", "add": [{"name": "Solo", "kind": "class"}]}
                ],
            }
        )
        truth = build_ground_truth(spec)
        assert truth["selection"]["alpha"] == {"eligible": True, "reasons": []}
        assert truth["selection"]["lone"]["reasons"] == [
            "fewer-than-two-versions",
            "versions-outside-corpus-window",
            "no-direct-use",
        ]


class TestBenchmarkWriter:
    def test_line_count_and_shape(self, tmp_path):
        from kgvo.gen import write_benchmark_snapshot
        from kgvo.nquads import open_snapshot
        from datetime import date

        path = tmp_path / "bench.nq"
        written = write_benchmark_snapshot(path, 30_001, ["http://v.example.org/p0"])
        assert written == 30_001
        quads, stats = open_snapshot(path, date(2014, 1, 5))
        assert sum(1 for _ in quads) == 30_001
        assert stats.lines_skipped == 0

    def test_requires_properties(self, tmp_path):
        from kgvo.gen import write_benchmark_snapshot

        with pytest.raises(ValueError):
            write_benchmark_snapshot(tmp_path / "x.nq", 10, [])
