import random

import pytest

from helpers import make_vector
from oracles import matched_set, prefix_scan_oracle, random_rule
from lowrisk.classifier import (
    Classification,
    LfrClassifier,
    Variant,
    order_rules,
    select_prefix,
)
from lowrisk.errors import NoAdmissibleRulesWarning, VocabularyMismatchError
from lowrisk.mining import AssociationRule


def rule(items, conf, supp):
    return AssociationRule(frozenset(items), "NotFaulty", supp, conf)


class TestOrderRules:
    def test_confidence_then_support(self):
        a = rule({"A"}, 0.99, 0.2)
        b = rule({"B"}, 0.95, 0.4)
        c = rule({"C"}, 0.99, 0.3)
        assert order_rules([a, b, c]) == [c, a, b]

    def test_single_rule_unchanged(self):
        a = rule({"A"}, 0.9, 0.1)
        assert order_rules([a]) == [a]

    def test_full_tie_breaks_lexicographically(self):
        a = rule({"B", "C"}, 0.9, 0.2)
        b = rule({"A", "D"}, 0.9, 0.2)
        c = rule({"A", "B"}, 0.9, 0.2)
        assert order_rules([a, b, c]) == [c, b, a]


class TestSelectPrefix:
    def test_budget_arithmetic(self):
        # 200 faulty methods at budget 0.025 allow at most 5 matched faults.
        rules = [rule({f"R{i}"}, 0.99 - i / 100, 0.2) for i in range(8)]
        items = []
        faulty = []
        for i in range(8):  # method i matches rule i only, each faulty
            items.append(frozenset({f"R{i}"}))
            faulty.append(True)
        for _ in range(192):
            items.append(frozenset({"none"}))
            faulty.append(True)
        n = select_prefix(rules, items, faulty, budget=0.025)
        assert n == 5

    def test_zero_fault_rules_select_everything(self):
        rules = [rule({"A"}, 0.99, 0.2), rule({"B"}, 0.98, 0.2)]
        items = [frozenset({"A"}), frozenset({"B"}), frozenset({"C"})]
        faulty = [False, False, True]
        assert select_prefix(rules, items, faulty, budget=0.025) == 2

    def test_breach_at_rule_three(self):
        rules = [rule({"A"}, 0.99, 0.3), rule({"B"}, 0.98, 0.3), rule({"C"}, 0.97, 0.3)]
        items = [frozenset({"A"}), frozenset({"B"}), frozenset({"C"}), frozenset({"C"})]
        faulty = [False, False, True, True]  # rule 3 matches 2 of 2 faults
        assert select_prefix(rules, items, faulty, budget=0.5) == 2

    def test_no_admissible_rules_warns_and_selects_zero(self):
        rules = [rule({"A"}, 0.99, 0.3)]
        items = [frozenset({"A"})]
        faulty = [True]
        with pytest.warns(NoAdmissibleRulesWarning):
            assert select_prefix(rules, items, faulty, budget=0.025) == 0

    def test_agrees_with_prefix_scan_oracle(self):
        rng = random.Random(0)
        vocab = [f"I{i}" for i in range(8)]
        for _ in range(40):
            rules = order_rules({random_rule(rng, vocab, max_len=3) for _ in range(rng.randint(1, 12))})
            items = [
                frozenset(rng.sample(vocab, rng.randint(0, 6))) for _ in range(40)
            ]
            faulty = [rng.random() < 0.3 for _ in items]
            if not any(faulty):
                faulty[0] = True
            budget = rng.choice((0.025, 0.05, 0.2))
            import warnings
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", NoAdmissibleRulesWarning)
                got = select_prefix(rules, items, faulty, budget)
            assert got == prefix_scan_oracle(rules, items, faulty, budget)

    def test_matched_set_monotone_in_n(self):
        rng = random.Random(1)
        vocab = [f"I{i}" for i in range(6)]
        rules = order_rules({random_rule(rng, vocab, max_len=2) for _ in range(8)})
        items = [frozenset(rng.sample(vocab, rng.randint(0, 4))) for _ in range(30)]
        previous = set()
        for n in range(len(rules) + 1):
            current = matched_set(rules, n, items)
            assert previous <= current
            previous = current


def classifier_with(rules, n, variant=Variant.STRICT):
    return LfrClassifier(
        ordered_rules=tuple(rules), n=n, variant=variant, budget=variant.default_budget
    )


class TestClassify:
    def test_zero_rules_never_classifies(self):
        clf = classifier_with([rule({"NoLoops"}, 0.99, 0.2)], n=0)
        vec = make_vector(["NoLoops"])
        assert clf.classify(vec) is Classification.NOT_CLASSIFIED

    def test_exact_antecedent_match(self):
        clf = classifier_with([rule({"NoLoops", "IsSetter"}, 0.99, 0.2)], n=1)
        assert clf.classify(make_vector(["NoLoops", "IsSetter"])) is Classification.LOW_FAULT_RISK
        assert clf.classify(make_vector(["NoLoops"])) is Classification.NOT_CLASSIFIED

    def test_rule_outside_prefix_ignored(self):
        rules = [rule({"NoLoops"}, 0.99, 0.2), rule({"IsSetter"}, 0.98, 0.2)]
        clf = classifier_with(rules, n=1)
        assert clf.classify(make_vector(["IsSetter"])) is Classification.NOT_CLASSIFIED

    def test_label_ignored_during_matching(self):
        clf = classifier_with([rule({"NoLoops"}, 0.99, 0.2)], n=1)
        faulty_vec = make_vector(["NoLoops"], not_faulty=False)
        assert clf.classify(faulty_vec) is Classification.LOW_FAULT_RISK

    def test_matched_rule_index_reports_first_match(self):
        rules = [rule({"IsSetter"}, 0.99, 0.2), rule({"NoLoops"}, 0.98, 0.2)]
        clf = classifier_with(rules, n=2)
        assert clf.matched_rule_index(make_vector(["NoLoops"])) == 1

    def test_vocabulary_mismatch(self):
        clf = LfrClassifier(
            ordered_rules=(rule({"NoLoops"}, 0.99, 0.2),),
            n=1,
            variant=Variant.STRICT,
            budget=0.025,
            vocabulary=("Other",),
        )
        with pytest.raises(VocabularyMismatchError):
            clf.classify(make_vector(["NoLoops"]))

    def test_strict_subset_of_lenient(self):
        rng = random.Random(2)
        vocab = ["NoLoops", "IsSetter", "IsGetter", "NoNullChecks", "IsEmpty"]
        for _ in range(20):
            rules = order_rules({random_rule(rng, vocab, max_len=2) for _ in range(10)})
            vectors = [
                make_vector(rng.sample(vocab, rng.randint(0, 4))) for _ in range(30)
            ]
            n_strict = rng.randint(0, len(rules))
            n_lenient = rng.randint(n_strict, len(rules))
            strict = classifier_with(rules, n_strict)
            lenient = classifier_with(rules, n_lenient, Variant.LENIENT)
            matched_strict = {
                i for i, v in enumerate(vectors)
                if strict.classify(v) is Classification.LOW_FAULT_RISK
            }
            matched_lenient = {
                i for i, v in enumerate(vectors)
                if lenient.classify(v) is Classification.LOW_FAULT_RISK
            }
            assert matched_strict <= matched_lenient

    def test_json_round_trip(self):
        clf = classifier_with(
            [rule({"NoLoops"}, 0.99, 0.2), rule({"IsSetter"}, 0.9, 0.1)], n=1
        )
        assert LfrClassifier.from_json(clf.to_json()) == clf
