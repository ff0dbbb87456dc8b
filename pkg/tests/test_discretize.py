import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import make_metrics, make_record, make_unified
from lowrisk.discretize import (
    ATTRIBUTE_ITEMS,
    LABEL_FAULTY,
    LABEL_NOT_FAULTY,
    VOCABULARY,
    DiscretizationModel,
    MetricBounds,
    fit_discretization,
    itemize,
    tertile_bounds,
)
from lowrisk.errors import DegenerateDistributionWarning
from lowrisk.java.metrics import CategoryFlags


def model_from_values(values):
    b = tertile_bounds(values)
    return DiscretizationModel({metric: b for metric, _ in (
        ("sloc", None), ("cyclomatic_complexity", None), ("max_nesting", None),
        ("max_chaining", None), ("unique_variable_ids", None))})


class TestTertiles:
    def test_exact_thirds(self):
        b = tertile_bounds([1, 1, 1, 2, 2, 2, 3, 3, 3])
        assert (b.class1_upper, b.class2_upper) == (1, 2)

    def test_last_occurrence_rule(self):
        values = [1, 1, 1, 1, 1, 1, 2, 3, 4]
        b = tertile_bounds(values)
        assert b.class1_upper == 1
        assert all(b.classify(v) == 1 for v in values if v == 1)

    def test_degenerate_single_value(self):
        records = [make_record(str(i), metrics=make_metrics(sloc=5)) for i in range(5)]
        with pytest.warns(DegenerateDistributionWarning):
            model = fit_discretization(records)
        assert all(model.classify("sloc", 5) == 1 for _ in range(3))

    def test_requires_three_records(self):
        with pytest.raises(ValueError):
            fit_discretization([make_record("a"), make_record("b")])

    @settings(max_examples=200)
    @given(st.lists(st.integers(min_value=0, max_value=50), min_size=1, max_size=60))
    def test_classes_partition_and_boundary_rule(self, values):
        b = tertile_bounds(values)
        assert b.class1_upper <= b.class2_upper
        # Exhaustive, disjoint, contiguous: every value lands in exactly one class
        # and class membership is monotone in the value.
        classes = [b.classify(v) for v in sorted(values)]
        assert all(c in (1, 2, 3) for c in classes)
        assert classes == sorted(classes)
        # Every occurrence of the boundary value is in class 1.
        assert all(b.classify(v) == 1 for v in values if v == b.class1_upper)
        # Class 1 holds at least a third of the training values.
        assert sum(1 for v in values if b.classify(v) == 1) * 3 >= len(values)

    def test_json_round_trip(self, tmp_path):
        records = [
            make_record(
                str(i),
                metrics=make_metrics(
                    sloc=i + 1, cc=i % 3 + 1, nesting=i % 2, chaining=i % 4, variables=i
                ),
            )
            for i in range(9)
        ]
        model = fit_discretization(records)
        path = tmp_path / "model.json"
        model.save(path)
        assert DiscretizationModel.load(path) == model


def simple_model():
    bounds = {m: MetricBounds(2, 5) for m, _ in (
        ("sloc", 0), ("cyclomatic_complexity", 0), ("max_nesting", 0),
        ("max_chaining", 0), ("unique_variable_ids", 0))}
    return DiscretizationModel(bounds)


class TestItemize:
    def test_paper_named_items(self):
        rec = make_record(
            "setter",
            metrics=make_metrics(sloc=1, assignments=1),
            categories=CategoryFlags(is_setter=True),
        )
        vec = itemize(rec, simple_model())
        items = vec.to_itemset()
        assert "SlocLowestThird" in items
        assert "NoLoops" in items
        assert "IsSetter" in items
        assert "NoNullChecks" in items

    def test_has_no_item_false_when_count_positive(self):
        rec = make_record("m", metrics=make_metrics(method_invocations=2))
        items = itemize(rec, simple_model()).to_itemset()
        assert "NoMethodInvocations" not in items

    def test_label_items(self):
        clean = itemize(make_record("m"), simple_model())
        assert clean.label_item == LABEL_NOT_FAULTY
        assert "NotFaulty" in clean.to_itemset()
        faulty = itemize(make_record("m", faulty=True), simple_model())
        assert faulty.label_item == LABEL_FAULTY
        assert "NotFaulty" not in faulty.to_itemset()

    def test_exactly_one_class_item_per_metric(self):
        for sloc in (1, 2, 3, 5, 6, 99):
            vec = itemize(make_record("m", metrics=make_metrics(sloc=sloc)), simple_model())
            items = vec.to_itemset()
            thirds = [n for n in items if n.startswith("Sloc")]
            assert len(thirds) == 1

    def test_vocabulary_size(self):
        assert len(VOCABULARY) == 5 * 3 + (26 + 2) + 6 + 1
        assert len(ATTRIBUTE_ITEMS) == len(VOCABULARY) - 1

    def test_identical_vectors_mean_identical_profiles(self):
        a = make_record("a", metrics=make_metrics(sloc=1, loops=1))
        b = make_record("b", metrics=make_metrics(sloc=2, loops=2))
        model = simple_model()
        va, vb = itemize(a, model), itemize(b, model)
        # Same classes and same zero-flags and categories => same items.
        assert va.items == vb.items


class TestMajorityVote:
    def test_binary_majority(self):
        occ = [
            make_record("a", faulty=True, metrics=make_metrics(loops=0)),
            make_record("a", faulty=True, metrics=make_metrics(loops=0)),
            make_record("a", faulty=True, metrics=make_metrics(loops=3)),
        ]
        vec = itemize(make_unified(occ), simple_model())
        assert "NoLoops" in vec.to_itemset()

    def test_class_tie_resolves_to_higher_class(self):
        occ = [
            make_record("a", faulty=True, metrics=make_metrics(sloc=1)),  # class 1
            make_record("a", faulty=True, metrics=make_metrics(sloc=9)),  # class 3
        ]
        vec = itemize(make_unified(occ), simple_model())
        assert "SlocHighestThird" in vec.to_itemset()

    def test_binary_tie_resolves_to_true(self):
        occ = [
            make_record("a", faulty=True, metrics=make_metrics(loops=0)),
            make_record("a", faulty=True, metrics=make_metrics(loops=2)),
        ]
        vec = itemize(make_unified(occ), simple_model())
        assert "NoLoops" in vec.to_itemset()
