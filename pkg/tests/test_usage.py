from datetime import date

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kgvo.nquads import RDF_TYPE, Literal, Quad
from kgvo.pld import bundled_psl_path, load_psl
from kgvo.usage import (
    SnapshotUsage,
    UsageKey,
    empty_usage,
    index_snapshot,
    merge,
    read_usage_csv,
    top_plds,
    write_usage_csv,
)
from kgvo.vocab import CLASS, PROPERTY, TermRecord

NS = "http://vocab.example.org/ns#"
DAY = date(2014, 1, 5)

COUNTRY = TermRecord(NS + "Country", CLASS, False, True)
NAME = TermRecord(NS + "name", PROPERTY, False, True)
TRACKED = [COUNTRY, NAME]


@pytest.fixture(scope="module")
def rules():
    return load_psl(bundled_psl_path())


def q(subject, predicate, obj, context=None):
    return Quad(subject, predicate, obj, context, DAY)


class TestUseRule:
    def test_class_counted_via_rdf_type_object(self, rules):
        quads = [q("http://x.geonames.org/1", RDF_TYPE, NS + "Country", "http://sws.geonames.org/doc")]
        usage = index_snapshot(quads, TRACKED, rules)
        assert usage.counts == {UsageKey(NS + "Country", "geonames.org"): 1}

    def test_property_counted_via_predicate(self, rules):
        quads = [q("http://a.example.org/r", NS + "name", Literal("x"))]
        usage = index_snapshot(quads, TRACKED, rules)
        assert usage.counts == {UsageKey(NS + "name", "example.org"): 1}

    def test_tracked_class_in_other_positions_not_counted(self, rules):
        quads = [
            q(NS + "Country", "http://other.org/about", Literal("doc")),
            q("http://a.org/x", "http://other.org/seeAlso", NS + "Country"),
        ]
        usage = index_snapshot(quads, TRACKED, rules)
        assert usage.counts == {}

    def test_rdf_type_with_untracked_class_ignored(self, rules):
        quads = [q("http://a.org/x", RDF_TYPE, "http://other.org/Thing")]
        assert index_snapshot(quads, TRACKED, rules).counts == {}

    def test_rdf_type_with_literal_object_ignored(self, rules):
        quads = [q("http://a.org/x", RDF_TYPE, Literal(NS + "Country"))]
        assert index_snapshot(quads, TRACKED, rules).counts == {}

    def test_rdf_type_never_tracked_as_property(self, rules):
        tracked = TRACKED + [TermRecord(RDF_TYPE, PROPERTY, False, False)]
        quads = [q("http://a.org/x", RDF_TYPE, NS + "Country")]
        usage = index_snapshot(quads, tracked, rules)
        assert usage.counts == {UsageKey(NS + "Country", "a.org"): 1}
        assert usage.total() == 1

    def test_empty_snapshot(self, rules):
        usage = index_snapshot([], TRACKED, rules, snapshot_date=DAY)
        assert usage.counts == {}
        assert usage.snapshot_date == DAY

    def test_mentions_mode_counts_any_position(self, rules):
        quads = [q(NS + "Country", "http://other.org/about", Literal("doc"))]
        modeling = index_snapshot(quads, TRACKED, rules, snapshot_date=DAY)
        mentions = index_snapshot(quads, TRACKED, rules, snapshot_date=DAY, mode="mentions")
        assert modeling.total() == 0
        assert mentions.counts == {UsageKey(NS + "Country", "example.org"): 1}


class TestAttribution:
    QUADS = [
        q("http://sub.example.org/r", NS + "name", Literal("x"), "http://docs.example.co.uk/d"),
        q("http://sub.example.org/r", NS + "name", Literal("y")),
    ]

    def test_context_first(self, rules):
        usage = index_snapshot(self.QUADS, TRACKED, rules, attribution="context-first")
        assert usage.counts == {
            UsageKey(NS + "name", "example.co.uk"): 1,
            UsageKey(NS + "name", "example.org"): 1,
        }

    def test_subject_only(self, rules):
        usage = index_snapshot(self.QUADS, TRACKED, rules, attribution="subject-only")
        assert usage.counts == {UsageKey(NS + "name", "example.org"): 2}

    def test_blank_subject_no_context_gives_none_pld(self, rules):
        quads = [q("_:b0", NS + "name", Literal("x"))]
        usage = index_snapshot(quads, TRACKED, rules)
        assert usage.counts == {UsageKey(NS + "name", None): 1}

    def test_unknown_mode_rejected(self, rules):
        with pytest.raises(ValueError):
            index_snapshot([], TRACKED, rules, attribution="nonsense")


class TestTotalsAndInvariants:
    def test_per_term_and_per_pld_totals(self, rules):
        quads = [
            q("http://a.example.org/1", NS + "name", Literal("x")),
            q("http://a.example.org/2", NS + "name", Literal("y")),
            q("http://b.example.net/3", RDF_TYPE, NS + "Country"),
        ]
        usage = index_snapshot(quads, TRACKED, rules)
        assert usage.per_term_totals == {NS + "name": 2, NS + "Country": 1}
        assert usage.per_pld_totals == {"example.org": 2, "example.net": 1}
        assert sum(usage.per_term_totals.values()) == usage.total()

    def test_conservation_each_quad_counts_once(self, rules):
        quads = [
            q("http://a.example.org/x", NS + "name", NS + "Country"),  # property use only
        ]
        usage = index_snapshot(quads, TRACKED, rules)
        assert usage.total() == 1

    def test_restriction_monotonicity(self, rules):
        quads = [
            q("http://a.example.org/1", NS + "name", Literal("x")),
            q("http://a.example.org/2", RDF_TYPE, NS + "Country"),
        ]
        full = index_snapshot(quads, TRACKED, rules)
        restricted = index_snapshot(quads, [NAME], rules)
        for key, count in restricted.counts.items():
            assert count <= full.counts.get(key, 0)


counts_maps = st.dictionaries(
    st.tuples(st.sampled_from([NS + "a", NS + "b", NS + "c"]), st.sampled_from(["x.org", "y.net", None])).map(
        lambda t: UsageKey(*t)
    ),
    st.integers(min_value=1, max_value=50),
    max_size=6,
)


class TestMerge:
    def test_identity_element(self):
        usage = SnapshotUsage(DAY, {UsageKey(NS + "a", "x.org"): 3})
        assert merge(usage, empty_usage(DAY)) == usage
        assert merge(empty_usage(DAY), usage) == usage

    def test_date_mismatch_rejected(self):
        with pytest.raises(ValueError):
            merge(empty_usage(DAY), empty_usage(date(2015, 1, 1)))

    @given(counts_maps, counts_maps)
    @settings(max_examples=100)
    def test_commutative(self, c1, c2):
        u1, u2 = SnapshotUsage(DAY, c1), SnapshotUsage(DAY, c2)
        assert merge(u1, u2) == merge(u2, u1)

    @given(counts_maps, counts_maps, counts_maps)
    @settings(max_examples=100)
    def test_associative(self, c1, c2, c3):
        u1, u2, u3 = (SnapshotUsage(DAY, c) for c in (c1, c2, c3))
        assert merge(merge(u1, u2), u3) == merge(u1, merge(u2, u3))

    def test_sharded_equals_single_pass(self, rules):
        quads = [
            q(f"http://h{i % 3}.example.org/{i}", NS + "name", Literal(str(i))) for i in range(40)
        ] + [q(f"http://h{i % 2}.example.net/{i}", RDF_TYPE, NS + "Country") for i in range(25)]
        whole = index_snapshot(quads, TRACKED, rules, snapshot_date=DAY)
        shards = [
            index_snapshot(quads[i::4], TRACKED, rules, snapshot_date=DAY) for i in range(4)
        ]
        combined = shards[0]
        for shard in shards[1:]:
            combined = merge(combined, shard)
        assert combined == whole


class TestTopPlds:
    def test_single_snapshot_single_pld(self):
        usage = SnapshotUsage(DAY, {UsageKey(NS + "a", "x.org"): 5})
        assert top_plds([usage], [NS + "a"]) == [("x.org", 5)]

    def test_dominant_pld_ranks_first(self):
        usage = SnapshotUsage(
            DAY,
            {
                UsageKey(NS + "a", "geonames.org"): 900,
                UsageKey(NS + "a", "w3.org"): 30,
                UsageKey(NS + "b", "geonames.org"): 70,
            },
        )
        ranking = top_plds([usage], [NS + "a", NS + "b"])
        assert ranking[0] == ("geonames.org", 970)

    def test_restriction_to_vocab_terms(self):
        usage = SnapshotUsage(
            DAY, {UsageKey(NS + "a", "x.org"): 5, UsageKey("http://other.org/t", "y.net"): 50}
        )
        assert top_plds([usage], [NS + "a"]) == [("x.org", 5)]

    def test_ties_break_alphabetically(self):
        usage = SnapshotUsage(DAY, {UsageKey(NS + "a", "b.org"): 5, UsageKey(NS + "a", "a.org"): 5})
        assert top_plds([usage], [NS + "a"]) == [("a.org", 5), ("b.org", 5)]

    def test_matches_full_recount(self):
        import random

        rng = random.Random(3)
        terms = [NS + t for t in "abcde"]
        plds = ["p1.org", "p2.org", "p3.net", None]
        timeline = []
        for day_offset in range(6):
            counts = {}
            for _ in range(30):
                key = UsageKey(rng.choice(terms), rng.choice(plds))
                counts[key] = counts.get(key, 0) + rng.randint(1, 9)
            timeline.append(SnapshotUsage(date(2014, 1, 5 + day_offset), counts))
        wanted = set(terms[:3])
        expected: dict[str | None, int] = {}
        for usage in timeline:
            for (term, pld), count in usage.counts.items():
                if term in wanted:
                    expected[pld] = expected.get(pld, 0) + count
        ranking = top_plds(timeline, wanted)
        assert dict(ranking) == expected
        totals = [c for _, c in ranking]
        assert totals == sorted(totals, reverse=True)


class TestCsvPersistence:
    def test_round_trip(self, tmp_path, rules):
        quads = [
            q("http://a.example.org/1", NS + "name", Literal("x")),
            q("_:b", NS + "name", Literal("y")),
        ]
        usage = index_snapshot(quads, TRACKED, rules)
        path = tmp_path / "usage_2014-01-05.csv"
        write_usage_csv(usage, path)
        assert read_usage_csv(path) == usage

    def test_empty_usage_round_trip_with_fallback_date(self, tmp_path):
        path = tmp_path / "usage_2014-01-05.csv"
        write_usage_csv(empty_usage(DAY), path)
        loaded = read_usage_csv(path, snapshot_date=DAY)
        assert loaded == empty_usage(DAY)

    def test_rows_sorted(self, tmp_path):
        usage = SnapshotUsage(
            DAY,
            {
                UsageKey(NS + "b", "y.org"): 1,
                UsageKey(NS + "a", "z.org"): 2,
                UsageKey(NS + "a", None): 3,
            },
        )
        path = tmp_path / "u.csv"
        write_usage_csv(usage, path)
        lines = path.read_text().splitlines()
        assert lines[0] == "date,term,pld,count"
        assert lines[1:] == sorted(lines[1:])
