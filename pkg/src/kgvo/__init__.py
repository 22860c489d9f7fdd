"""kgvo: track vocabulary term evolution across versioned ontology
documents and measure its adoption in dated knowledge-graph snapshots."""

from .adoption import (
    AdoptionRecord,
    DeprecatedUsageReport,
    UnusedTermsReport,
    VocabAdoptionStats,
    compute_adoption,
    deprecated_usage,
    unused_terms,
    usage_timeseries,
    vocab_stats,
)
from .diff import (
    ChangeEvent,
    ChangeLog,
    SelectionVerdict,
    build_change_log,
    check_selection,
    diff_versions,
)
from .nquads import (
    Literal,
    ParseStats,
    Quad,
    open_snapshot,
    parse_quad_line,
    read_corpus_manifest,
    serialize_quad,
    stream_snapshot,
)
from .pld import SuffixRules, bundled_psl_path, extract_pld, load_psl
from .turtle import parse_turtle, parse_turtle_file
from .usage import SnapshotUsage, UsageKey, index_snapshot, merge, top_plds
from .vocab import (
    TermRecord,
    VocabVersion,
    extract_terms,
    is_deprecated,
    load_vocab_version,
    read_vocab_manifest,
    union_terms,
)

__version__ = "0.1.0"

__all__ = [
    "AdoptionRecord",
    "ChangeEvent",
    "ChangeLog",
    "DeprecatedUsageReport",
    "Literal",
    "ParseStats",
    "Quad",
    "SelectionVerdict",
    "SnapshotUsage",
    "SuffixRules",
    "TermRecord",
    "UnusedTermsReport",
    "UsageKey",
    "VocabAdoptionStats",
    "VocabVersion",
    "build_change_log",
    "bundled_psl_path",
    "check_selection",
    "compute_adoption",
    "deprecated_usage",
    "diff_versions",
    "extract_pld",
    "extract_terms",
    "index_snapshot",
    "is_deprecated",
    "load_psl",
    "load_vocab_version",
    "merge",
    "open_snapshot",
    "parse_quad_line",
    "parse_turtle",
    "parse_turtle_file",
    "read_corpus_manifest",
    "read_vocab_manifest",
    "serialize_quad",
    "stream_snapshot",
    "top_plds",
    "union_terms",
    "unused_terms",
    "usage_timeseries",
    "vocab_stats",
]
