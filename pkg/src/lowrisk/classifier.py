"""Low-fault-risk classifier: ordered rule list with a budgeted top-n prefix.

A method is classified "low fault risk" when at least one of the top n
rules matches (logical or). n is the largest prefix length whose matched
methods contain at most budget * (all faulty methods) faulty methods in
the original, unbalanced training set.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from enum import Enum
from typing import AbstractSet, Iterable, Sequence

from lowrisk.discretize import VOCABULARY, ItemVector
from lowrisk.errors import NoAdmissibleRulesWarning, VocabularyMismatchError
from lowrisk.mining import AssociationRule

_BUDGET_EPS = 1e-9


class Variant(Enum):
    STRICT = "strict"
    LENIENT = "lenient"

    @property
    def default_budget(self) -> float:
        return 0.025 if self is Variant.STRICT else 0.05


class Classification(Enum):
    LOW_FAULT_RISK = "LowFaultRisk"
    NOT_CLASSIFIED = "NotClassified"


def order_rules(rules: Iterable[AssociationRule]) -> list[AssociationRule]:
    """Canonical rule order: confidence desc, support desc, size, item names."""
    return sorted(rules, key=AssociationRule.sort_key)


def _matches(rule: AssociationRule, items: AbstractSet[str]) -> bool:
    return rule.antecedent <= items


def select_prefix(
    ordered_rules: Sequence[AssociationRule],
    training_items: Sequence[AbstractSet[str]],
    training_faulty: Sequence[bool],
    budget: float,
) -> int:
    """Largest n whose top-n prefix matches at most budget * all faults.

    Evaluated against the original (pre-balancing) training set; label items
    play no role since antecedents never contain them.
    """
    total_faulty = sum(1 for f in training_faulty if f)
    if total_faulty == 0:
        raise ValueError("training set contains no faulty methods")
    allowed = budget * total_faulty + _BUDGET_EPS
    matched: set[int] = set()
    faulty_matched = 0
    n = 0
    for rule in ordered_rules:
        for idx, items in enumerate(training_items):
            if idx not in matched and _matches(rule, items):
                matched.add(idx)
                if training_faulty[idx]:
                    faulty_matched += 1
        if faulty_matched > allowed:
            break
        n += 1
    if n == 0 and ordered_rules:
        warnings.warn(
            "even the single top rule exceeds the fault budget; "
            "the classifier will match nothing",
            NoAdmissibleRulesWarning,
            stacklevel=2,
        )
    return n


@dataclass(frozen=True)
class LfrClassifier:
    """Ordered rules plus the selected prefix length for one variant."""

    ordered_rules: tuple[AssociationRule, ...]
    n: int
    variant: Variant
    budget: float
    vocabulary: tuple[str, ...] = VOCABULARY
    training_meta: dict = field(default_factory=dict)

    @property
    def active_rules(self) -> tuple[AssociationRule, ...]:
        return self.ordered_rules[: self.n]

    def _check_vocabulary(self, vector: ItemVector) -> None:
        if self.vocabulary != VOCABULARY or len(vector.items) != len(VOCABULARY) - 1:
            raise VocabularyMismatchError(
                "classifier vocabulary does not match the item vector vocabulary"
            )

    def matched_rule_index(self, vector: ItemVector) -> int | None:
        """Index (into the ordered list) of the first matching top-n rule."""
        self._check_vocabulary(vector)
        items = vector.attribute_itemset()
        for idx in range(self.n):
            if _matches(self.ordered_rules[idx], items):
                return idx
        return None

    def classify(self, vector: ItemVector) -> Classification:
        if self.matched_rule_index(vector) is None:
            return Classification.NOT_CLASSIFIED
        return Classification.LOW_FAULT_RISK

    def to_json(self) -> dict:
        return {
            "rules": [r.to_json() for r in self.ordered_rules],
            "n": self.n,
            "variant": self.variant.value,
            "budget": self.budget,
            "vocabulary": list(self.vocabulary),
            "training_meta": dict(self.training_meta),
        }

    @classmethod
    def from_json(cls, data: dict) -> "LfrClassifier":
        return cls(
            ordered_rules=tuple(AssociationRule.from_json(r) for r in data["rules"]),
            n=data["n"],
            variant=Variant(data["variant"]),
            budget=data["budget"],
            vocabulary=tuple(data["vocabulary"]),
            training_meta=dict(data.get("training_meta", {})),
        )


def classify(classifier: LfrClassifier, vector: ItemVector) -> Classification:
    return classifier.classify(vector)
