"""Tertile discretization and binary itemization of method records.

The five numeric metrics are split into three classes at the sorted
one-third and two-thirds boundary values, extended to the last occurrence
of each boundary value so equal values never straddle a class border.
Count metrics become "has-no" items (true iff the count is zero), and the
category flags pass through unchanged. The resulting item vocabulary is
fixed and identical across projects.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from lowrisk.dataset import MethodRecord, UnifiedMethod
from lowrisk.errors import DegenerateDistributionWarning, SchemaError
from lowrisk.java.metrics import CategoryFlags, ConstructKind, RawMetrics

TERTILE_METRICS = (
    ("sloc", "Sloc"),
    ("cyclomatic_complexity", "CyclomaticComplexity"),
    ("max_nesting", "MaxNesting"),
    ("max_chaining", "MaxChaining"),
    ("unique_variable_ids", "UniqueVariableIds"),
)

_THIRDS = ("LowestThird", "MiddleThird", "HighestThird")

NO_ITEM_NAMES: dict[ConstructKind, str] = {
    ConstructKind.METHOD_INVOCATION: "NoMethodInvocations",
    ConstructKind.IF_CONDITION: "NoIfConditions",
    ConstructKind.ELSE_BLOCK: "NoElseBlocks",
    ConstructKind.SWITCH_CASE_BLOCK: "NoSwitchCaseBlocks",
    ConstructKind.TERNARY_OPERATION: "NoTernaryOperations",
    ConstructKind.LOOP: "NoLoops",
    ConstructKind.TRY_BLOCK: "NoTryBlocks",
    ConstructKind.CATCH_CLAUSE: "NoCatchClauses",
    ConstructKind.FINALLY_BLOCK: "NoFinallyBlocks",
    ConstructKind.THROW_STATEMENT: "NoThrowStatements",
    ConstructKind.RETURN_STATEMENT: "NoReturnStatements",
    ConstructKind.CAST_EXPRESSION: "NoCastExpressions",
    ConstructKind.INSTANCEOF_EXPRESSION: "NoInstanceofExpressions",
    ConstructKind.NULL_LITERAL: "NoNullLiterals",
    ConstructKind.NULL_CHECK: "NoNullChecks",
    ConstructKind.ARITHMETIC_INFIX_OP: "NoArithmeticInfixOps",
    ConstructKind.INCREMENTATION: "NoIncrementations",
    ConstructKind.DECREMENTATION: "NoDecrementations",
    ConstructKind.LOGICAL_OPERATOR: "NoLogicalOperators",
    ConstructKind.COMPARISON_OPERATOR: "NoComparisonOperators",
    ConstructKind.ASSIGNMENT: "NoAssignments",
    ConstructKind.ARRAY_ACCESS: "NoArrayAccesses",
    ConstructKind.ARRAY_CREATION: "NoArrayCreations",
    ConstructKind.OBJECT_CREATION: "NoObjectCreations",
    ConstructKind.STRING_LITERAL: "NoStringLiterals",
    ConstructKind.ANONYMOUS_CLASS: "NoAnonymousClasses",
}

_DERIVED_NO_ITEMS = ("NoConditions", "NoArithmeticOperations")

_CATEGORY_ITEMS = tuple(
    "Is" + "".join(part.capitalize() for part in f[3:].split("_")) for f in CategoryFlags.FIELDS
)
# -> IsConstructor, IsGetter, IsSetter, IsEmpty, IsDelegation, IsToString

LABEL_NOT_FAULTY = "NotFaulty"
LABEL_FAULTY = "Faulty"

ATTRIBUTE_ITEMS: tuple[str, ...] = (
    tuple(f"{prefix}{third}" for _, prefix in TERTILE_METRICS for third in _THIRDS)
    + tuple(NO_ITEM_NAMES[kind] for kind in ConstructKind)
    + _DERIVED_NO_ITEMS
    + _CATEGORY_ITEMS
)

VOCABULARY: tuple[str, ...] = ATTRIBUTE_ITEMS + (LABEL_NOT_FAULTY,)


@dataclass(frozen=True)
class MetricBounds:
    class1_upper: int
    class2_upper: int

    def classify(self, value) -> int:
        if value <= self.class1_upper:
            return 1
        if value <= self.class2_upper:
            return 2
        return 3


@dataclass(frozen=True)
class DiscretizationModel:
    """Per-metric tertile boundaries, persisted so prediction reuses them."""

    bounds: Mapping[str, MetricBounds]

    def classify(self, metric: str, value) -> int:
        return self.bounds[metric].classify(value)

    def to_json(self) -> dict:
        return {
            metric: {"class1_upper": b.class1_upper, "class2_upper": b.class2_upper}
            for metric, b in self.bounds.items()
        }

    @classmethod
    def from_json(cls, data: dict) -> "DiscretizationModel":
        bounds = {}
        for metric, _ in TERTILE_METRICS:
            if metric not in data:
                raise SchemaError(f"discretization model missing metric {metric!r}")
            entry = data[metric]
            bounds[metric] = MetricBounds(entry["class1_upper"], entry["class2_upper"])
        return cls(bounds)

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_json(), indent=2) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "DiscretizationModel":
        return cls.from_json(json.loads(Path(path).read_text(encoding="utf-8")))


def tertile_bounds(values: Sequence) -> MetricBounds:
    """Boundary values at the end of the first and second sorted thirds."""
    if not values:
        raise ValueError("no values to discretize")
    ordered = sorted(values)
    n = len(ordered)
    c1 = ordered[math.ceil(n / 3) - 1]
    c2 = ordered[math.ceil(2 * n / 3) - 1]
    return MetricBounds(c1, c2)


def fit_discretization(records: Iterable[MethodRecord]) -> DiscretizationModel:
    """Fit tertile boundaries over all given records (training data only)."""
    records = list(records)
    if len(records) < 3:
        raise ValueError(f"need at least 3 records to fit tertiles, got {len(records)}")
    bounds = {}
    for metric, _ in TERTILE_METRICS:
        values = [getattr(r.metrics, metric) for r in records]
        if len(set(values)) == 1:
            warnings.warn(
                f"metric {metric!r} has a single distinct value ({values[0]}); "
                "all methods map to class 1",
                DegenerateDistributionWarning,
                stacklevel=2,
            )
        bounds[metric] = tertile_bounds(values)
    return DiscretizationModel(bounds)


@dataclass(frozen=True)
class ItemVector:
    """Fixed-order binary items over ATTRIBUTE_ITEMS plus the fault label."""

    items: tuple[bool, ...]
    label_item: str  # LABEL_FAULTY or LABEL_NOT_FAULTY

    def __post_init__(self):
        if len(self.items) != len(ATTRIBUTE_ITEMS):
            raise ValueError(
                f"expected {len(ATTRIBUTE_ITEMS)} items, got {len(self.items)}"
            )
        if self.label_item not in (LABEL_FAULTY, LABEL_NOT_FAULTY):
            raise ValueError(f"unknown label item {self.label_item!r}")

    @property
    def not_faulty(self) -> bool:
        return self.label_item == LABEL_NOT_FAULTY

    def to_itemset(self) -> frozenset[str]:
        """Transaction view: true attribute items plus the NotFaulty item."""
        names = [name for name, on in zip(ATTRIBUTE_ITEMS, self.items) if on]
        if self.not_faulty:
            names.append(LABEL_NOT_FAULTY)
        return frozenset(names)

    def attribute_itemset(self) -> frozenset[str]:
        return frozenset(name for name, on in zip(ATTRIBUTE_ITEMS, self.items) if on)


# Internal discretized view used for majority voting: 5 tertile classes
# followed by the boolean attribute flags in vocabulary order.
def _profile(metrics: RawMetrics, categories: CategoryFlags, model: DiscretizationModel):
    classes = tuple(
        model.classify(metric, getattr(metrics, metric)) for metric, _ in TERTILE_METRICS
    )
    flags = tuple(metrics.construct_counts[kind] == 0 for kind in ConstructKind)
    flags += (metrics.all_conditions == 0, metrics.all_arithmetic == 0)
    flags += tuple(getattr(categories, f) for f in CategoryFlags.FIELDS)
    return classes, flags


def _vote(profiles: Sequence[tuple]) -> tuple:
    """Majority vote; class ties resolve to the higher class, flag ties to true."""
    if len(profiles) == 1:
        return profiles[0]
    n = len(profiles)
    classes = []
    for i in range(len(TERTILE_METRICS)):
        votes = [p[0][i] for p in profiles]
        classes.append(max(set(votes), key=lambda c: (votes.count(c), c)))
    flags = []
    for i in range(len(profiles[0][1])):
        trues = sum(1 for p in profiles if p[1][i])
        flags.append(trues * 2 >= n)
    return tuple(classes), tuple(flags)


def itemize(method: UnifiedMethod | MethodRecord, model: DiscretizationModel) -> ItemVector:
    """Build the binary item vector for one (unified) method.

    For methods with several faulty occurrences, each attribute is set by
    majority vote over the per-occurrence discretized values.
    """
    if isinstance(method, MethodRecord):
        occurrences = [method]
        faulty = method.faulty
    else:
        occurrences = list(method.occurrences)
        faulty = method.faulty
    profiles = [_profile(r.metrics, r.categories, model) for r in occurrences]
    classes, flags = _vote(profiles)
    items = []
    for cls in classes:
        items.extend((cls == 1, cls == 2, cls == 3))
    items.extend(flags)
    return ItemVector(tuple(items), LABEL_FAULTY if faulty else LABEL_NOT_FAULTY)
