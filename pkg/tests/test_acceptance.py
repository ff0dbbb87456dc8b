"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines. Every tolerance is pinned here; nothing is deferred to calibration.
"""

import json
import random
import statistics
import time
import warnings

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import make_vector
from oracles import (
    as_rule_set,
    brute_force_prune,
    brute_force_rules,
    matched_set,
    prefix_scan_oracle,
    random_rule,
)
from lowrisk.balance import BalanceConfig, balance
from lowrisk.classifier import Variant, order_rules, select_prefix
from lowrisk.dataset import from_analyzed, record_to_row
from lowrisk.discretize import ATTRIBUTE_ITEMS, LABEL_FAULTY, tertile_bounds
from lowrisk.errors import NoAdmissibleRulesWarning
from lowrisk.evaluation import (
    compute_fdr,
    emit_report,
    evaluate_cross_project,
    evaluate_within_project,
)
from lowrisk.java.analyzer import analyze_project
from lowrisk.mining import MiningConfig, mine, prune_redundant
from lowrisk.pipeline import PipelineConfig
from lowrisk.synthetic import generate_corpus


def report(criterion, ok, detail):
    status = "PASS" if ok else "FAIL"
    print(f"[criterion {criterion}] {status} - {detail}")
    assert ok, f"criterion {criterion}: {detail}"


# -- criterion 1: Apriori oracle equivalence ---------------------------------


def test_c1_apriori_oracle_equivalence():
    rng = random.Random(20240)
    start = time.monotonic()
    for case in range(100):
        n_items = rng.randint(3, 10)
        n_transactions = rng.randint(20, 200)
        items = [f"I{i}" for i in range(n_items)]
        db = []
        for _ in range(n_transactions):
            t = {i for i in items if rng.random() < rng.uniform(0.2, 0.8)}
            if rng.random() < 0.5:
                t.add("NotFaulty")
            db.append(frozenset(t))
        cfg = MiningConfig(
            min_support=rng.uniform(0.02, 0.45),
            min_confidence=rng.uniform(0.3, 1.0),
            max_antecedent_len=n_items,
        )
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            mined = prune_redundant(mine(db, cfg))
        oracle_rules = brute_force_rules(
            db, cfg.min_support, cfg.min_confidence, cfg.max_antecedent_len
        )
        from lowrisk.mining import AssociationRule

        oracle_pruned = brute_force_prune(
            [AssociationRule(a, "NotFaulty", s, c) for a, s, c in oracle_rules]
        )
        assert as_rule_set(mined) == as_rule_set(oracle_pruned), f"case {case} diverged"
    elapsed = time.monotonic() - start
    report(1, elapsed < 30, f"mine+prune equals brute-force oracle on 100 DBs in {elapsed:.1f}s (< 30s)")


# -- criterion 2: FDR formula reproduction ------------------------------------


def test_c2_fdr_formula_reproduction():
    ok = (
        compute_fdr(0.40, 0.10) == 4.0
        and 6.95 <= compute_fdr(0.286, 0.041) <= 7.05
        and 3.35 <= compute_fdr(0.138, 0.041) <= 3.40
        and statistics.median([4.3, 5.7, 10.9]) == 5.7
    )
    report(
        2,
        ok,
        f"compute_fdr(0.40,0.10)={compute_fdr(0.40, 0.10)}, "
        f"(0.286,0.041)={compute_fdr(0.286, 0.041):.3f}, "
        f"(0.138,0.041)={compute_fdr(0.138, 0.041):.3f}, "
        f"median(4.3,5.7,10.9)={statistics.median([4.3, 5.7, 10.9])}",
    )


# -- criterion 3 (and 8): SMOTE balance ---------------------------------------


def _run_smote_battery(master_seed):
    """50 random imbalanced datasets; returns (artifact dict, max imbalance)."""
    rng = random.Random(master_seed)
    artifact = {}
    worst_gap = 0
    support_bound_ok = True
    for case in range(50):
        n = rng.randint(120, 240)
        minority_fraction = rng.uniform(0.05, 0.40)
        n_min = max(6, round(n * minority_fraction))
        data = []
        for klass, count in (("min", n_min), ("maj", n - n_min)):
            for _ in range(count):
                bias = 0.3 if klass == "min" else 0.7
                true_names = [
                    name
                    for j, name in enumerate(ATTRIBUTE_ITEMS)
                    if rng.random() < (bias if j < 10 else 0.5)
                ]
                data.append(make_vector(true_names, not_faulty=(klass == "maj")))
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            out = balance(data, BalanceConfig(rng_seed=master_seed * 100 + case))
        n_faulty = sum(1 for v in out if v.label_item == LABEL_FAULTY)
        gap = abs(n_faulty - (len(out) - n_faulty))
        worst_gap = max(worst_gap, gap)
        transactions = [v.to_itemset() for v in out]
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            rules = mine(transactions, MiningConfig(0.10, 0.95, 3))
        bound = 0.5 + 1 / len(out)
        if any(r.support > bound for r in rules):
            support_bound_ok = False
        artifact[str(case)] = {
            "balanced_faulty": n_faulty,
            "balanced_total": len(out),
            "rules": [r.to_json() for r in rules],
        }
    return artifact, worst_gap, support_bound_ok


@pytest.fixture(scope="module")
def smote_battery_runs():
    runs = []
    for _ in range(2):
        start = time.monotonic()
        artifact, worst_gap, bound_ok = _run_smote_battery(master_seed=77)
        runs.append(
            {
                "artifact": artifact,
                "worst_gap": worst_gap,
                "bound_ok": bound_ok,
                "elapsed": time.monotonic() - start,
            }
        )
    return runs


def test_c3_smote_balance(smote_battery_runs):
    run = smote_battery_runs[0]
    ok = run["worst_gap"] <= 1 and run["bound_ok"] and run["elapsed"] < 10
    report(
        3,
        ok,
        f"50 datasets balanced to 50/50 within +/-{run['worst_gap']} vector(s); "
        f"all mined rule supports <= 0.5 + 1/n; {run['elapsed']:.1f}s (< 10s)",
    )


# -- criterion 4: discretization last-occurrence rule --------------------------


@settings(max_examples=300, deadline=None)
@given(st.lists(st.integers(min_value=0, max_value=40), min_size=1, max_size=80))
def test_c4_property(values):
    b = tertile_bounds(values)
    classes = [b.classify(v) for v in sorted(values)]
    assert all(c in (1, 2, 3) for c in classes)
    assert classes == sorted(classes)  # contiguous, disjoint, exhaustive
    assert all(b.classify(v) == 1 for v in values if v == b.class1_upper)


def test_c4_discretization_worked_examples():
    exact = tertile_bounds([1, 1, 1, 2, 2, 2, 3, 3, 3])
    last = tertile_bounds([1, 1, 1, 1, 1, 1, 2, 3, 4])
    degenerate = tertile_bounds([5, 5, 5, 5])
    ok = (
        (exact.class1_upper, exact.class2_upper) == (1, 2)
        and last.class1_upper == 1
        and all(last.classify(1) == 1 for _ in range(3))
        and degenerate.classify(5) == 1
    )
    report(
        4,
        ok,
        "tertile boundaries match worked examples; property test covers "
        "contiguous/exhaustive/disjoint classes and the boundary-value rule",
    )


# -- criterion 5: classifier prefix maximality and monotonicity ----------------


def test_c5_prefix_selection_against_oracle():
    rng = random.Random(99)
    vocab = [f"I{i}" for i in range(8)]
    for case in range(50):
        rules = order_rules(
            {random_rule(rng, vocab, max_len=3) for _ in range(rng.randint(1, 14))}
        )
        training = [frozenset(rng.sample(vocab, rng.randint(0, 6))) for _ in range(50)]
        faulty = [rng.random() < 0.3 for _ in training]
        if not any(faulty):
            faulty[0] = True
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", NoAdmissibleRulesWarning)
            n_strict = select_prefix(rules, training, faulty, Variant.STRICT.default_budget)
            n_lenient = select_prefix(rules, training, faulty, Variant.LENIENT.default_budget)
        assert n_strict == prefix_scan_oracle(
            rules, training, faulty, Variant.STRICT.default_budget
        ), f"case {case}"
        assert n_lenient == prefix_scan_oracle(
            rules, training, faulty, Variant.LENIENT.default_budget
        ), f"case {case}"
        previous = set()
        for n in range(len(rules) + 1):
            current = matched_set(rules, n, training)
            assert previous <= current, f"case {case}: matched set shrank at n={n}"
            previous = current
        assert n_strict <= n_lenient
        assert matched_set(rules, n_strict, training) <= matched_set(rules, n_lenient, training)
    report(5, True, "select_prefix equals exhaustive prefix-scan oracle on 50 fixtures; "
                    "matched sets monotone; strict subset of lenient")


# -- criterion 6: golden metric extraction -------------------------------------


def test_c6_golden_metric_extraction(corpus_dir, golden_csv):
    import csv as csv_mod

    with open(golden_csv, newline="", encoding="utf-8") as fh:
        reader = csv_mod.reader(fh)
        next(reader)
        golden_rows = list(reader)
    methods, _ = analyze_project(corpus_dir, "corpus")
    actual_rows = [record_to_row(r) for r in from_analyzed(methods)]
    ok = actual_rows == golden_rows
    chain_values = {row[10] for row in actual_rows}
    ok = ok and {"2", "3"} <= chain_values and len(golden_rows) >= 30
    report(
        6,
        ok,
        f"{len(actual_rows)} methods match the hand-derived golden CSV exactly "
        f"(incl. chaining depths 2 and 3)",
    )


# -- criterion 7 (and 8): desk-scale end-to-end replication --------------------

E2E_CONFIG = PipelineConfig(
    mining=MiningConfig(min_support=0.05, min_confidence=0.95, max_antecedent_len=3),
    seed=7,
)


def _run_e2e(out_dir):
    corpus = generate_corpus(6, seed=11)
    within_reports = []
    within_times = {}
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for name, methods in corpus.items():
            t0 = time.monotonic()
            reports, _ = evaluate_within_project(methods, name, E2E_CONFIG)
            within_times[name] = time.monotonic() - t0
            within_reports.extend(reports.values())
        cross_reports = []
        for target in corpus:
            reports, _ = evaluate_cross_project(corpus, target, E2E_CONFIG)
            cross_reports.extend(reports.values())
    emit_report(within_reports, out_dir, mode="within", config=E2E_CONFIG,
                basename="within_report")
    emit_report(cross_reports, out_dir, mode="cross", config=E2E_CONFIG,
                basename="cross_report")
    return within_reports, cross_reports, within_times


@pytest.fixture(scope="module")
def e2e_runs(tmp_path_factory):
    runs = []
    for run_id in (1, 2):
        out_dir = tmp_path_factory.mktemp(f"e2e_run{run_id}")
        within, cross, times = _run_e2e(out_dir)
        runs.append({"dir": out_dir, "within": within, "cross": cross, "times": times})
    return runs


def test_c7_end_to_end_replication(e2e_runs):
    run = e2e_runs[0]
    times_ok = all(t < 120 for t in run["times"].values())

    strict_within = [r for r in run["within"] if r.variant is Variant.STRICT]
    budget_ok = all(r.pooled.faulty_in_lfr_fraction <= 0.05 for r in strict_within)
    within_fdr_ok = sum(1 for r in strict_within if r.pooled.fdr_methods >= 2) >= 5

    strict_cross = [r for r in run["cross"] if r.variant is Variant.STRICT]
    cross_fdr_ok = sum(1 for r in strict_cross if r.pooled.fdr_methods >= 2) >= 5

    ok = times_ok and budget_ok and within_fdr_ok and cross_fdr_ok
    slowest = max(run["times"].values())
    report(
        7,
        ok,
        f"6 projects: within-project {slowest:.1f}s max (< 120s); strict faulty-in-LFR "
        f"<= 5% on all; method FDR >= 2 on "
        f"{sum(1 for r in strict_within if r.pooled.fdr_methods >= 2)}/6 within and "
        f"{sum(1 for r in strict_cross if r.pooled.fdr_methods >= 2)}/6 cross targets",
    )


# -- criterion 8: determinism ---------------------------------------------------


def test_c8_determinism(e2e_runs, smote_battery_runs, tmp_path):
    identical = True
    for name in ("within_report.csv", "within_report.json", "cross_report.csv",
                 "cross_report.json"):
        a = (e2e_runs[0]["dir"] / name).read_bytes()
        b = (e2e_runs[1]["dir"] / name).read_bytes()
        if a != b:
            identical = False
    paths = []
    for i, run in enumerate(smote_battery_runs):
        path = tmp_path / f"smote_run{i}.json"
        path.write_text(json.dumps(run["artifact"], indent=2, sort_keys=True),
                        encoding="utf-8")
        paths.append(path)
    if paths[0].read_bytes() != paths[1].read_bytes():
        identical = False
    report(8, identical, "criteria 3 and 7 artifacts are byte-identical across "
                         "re-runs with the same master seed")
