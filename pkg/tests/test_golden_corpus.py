"""The checked-in mini corpus must reproduce its hand-derived metrics file
exactly: every cell of every row, including the documented chaining
examples, all construct kinds, and all six categories."""

import csv

from lowrisk.dataset import CSV_HEADER, from_analyzed, record_to_row
from lowrisk.java.analyzer import analyze_project
from lowrisk.java.metrics import ConstructKind


def load_golden(path):
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        return header, list(reader)


def test_golden_corpus_matches_exactly(corpus_dir, golden_csv):
    header, golden_rows = load_golden(golden_csv)
    assert header == CSV_HEADER
    methods, report = analyze_project(corpus_dir, "corpus")
    actual_rows = [record_to_row(r) for r in from_analyzed(methods)]
    assert len(actual_rows) == len(golden_rows)
    for got, expected in zip(actual_rows, golden_rows):
        assert got == expected, f"row for {expected[:5]} diverges"
    assert not report.parse_failures


def test_corpus_is_large_enough(golden_csv):
    _, rows = load_golden(golden_csv)
    assert len(rows) >= 30


def test_corpus_covers_every_construct_kind(golden_csv):
    header, rows = load_golden(golden_csv)
    for kind in ConstructKind:
        col = header.index(kind.value)
        assert any(int(row[col]) > 0 for row in rows), f"{kind.value} never occurs"


def test_corpus_covers_all_categories(golden_csv):
    header, rows = load_golden(golden_csv)
    for flag in (
        "is_constructor",
        "is_getter",
        "is_setter",
        "is_empty",
        "is_delegation",
        "is_to_string",
    ):
        col = header.index(flag)
        assert any(row[col] == "true" for row in rows), f"{flag} never set"


def test_corpus_covers_chaining_depths(golden_csv):
    header, rows = load_golden(golden_csv)
    col = header.index("max_chaining")
    depths = {int(row[col]) for row in rows}
    assert {0, 1, 2, 3} <= depths


def test_lambda_method_excluded_with_diagnostic(corpus_dir):
    methods, report = analyze_project(corpus_dir, "corpus")
    assert not any(m.identity.method_name == "lambdaStyle" for m in methods)
    assert any(s.identity.method_name == "lambdaStyle" for s in report.skipped_methods)
