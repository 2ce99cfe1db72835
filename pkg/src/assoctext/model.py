"""Per-class word-set features and their smoothed class probabilities.

Each class contributes its maximal frequent word-sets (two or more words).
A set mined from class ``o`` gets, under every class ``c``, the probability
``(count_c + 1) / (n_o + N)`` where ``n_o`` is the number of sets mined from
``o`` and ``N`` the total number of sets. A set is only counted in the class
it was mined from, so ``count_c`` is zero for every other class.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

from .apriori import find_frequent_itemsets, maximal_itemsets

__all__ = [
    "FORMAT_VERSION",
    "FeatureSet",
    "ModelConfig",
    "ModelFormatError",
    "ModelValidationError",
    "ModelVersionError",
    "ProbabilityTable",
    "build_probability_table",
    "compute_priors",
    "load_model",
    "mine_class_features",
    "save_model",
    "set_probability",
]

FORMAT_VERSION = 1


class ModelFormatError(ValueError):
    """Model file could not be parsed."""


class ModelVersionError(ModelFormatError):
    """Model file declares an unsupported format version."""


class ModelValidationError(ModelFormatError):
    """Model content parses but violates a table invariant."""


@dataclass(frozen=True)
class ModelConfig:
    min_support: float = 0.05
    min_confidence: float = 0.75
    min_doc_freq: int = 2
    match_threshold: float = 0.5

    def __post_init__(self):
        for name in ("min_support", "min_confidence", "match_threshold"):
            value = getattr(self, name)
            if not 0 < value <= 1:
                raise ValueError(f"{name} must be in (0, 1], got {value}")
        if self.min_doc_freq < 1:
            raise ValueError(f"min_doc_freq must be >= 1, got {self.min_doc_freq}")


@dataclass(frozen=True)
class FeatureSet:
    items: tuple
    origin_class: str
    counts_by_class: dict
    prob_by_class: dict
    argmax_class: str


@dataclass(frozen=True)
class ProbabilityTable:
    classes: tuple
    priors: dict
    sets_per_class: dict
    total_sets: int
    features: tuple
    config: ModelConfig = field(default_factory=ModelConfig)

    def __post_init__(self):
        _validate(self)

    def positive_sets(self, label) -> list:
        return [f for f in self.features if f.argmax_class == label]


def _validate(table: ProbabilityTable) -> None:
    def fail(msg):
        raise ModelValidationError(msg)

    classes = table.classes
    if not classes or len(set(classes)) != len(classes):
        fail("class list must be non-empty and unique")
    if any(not isinstance(c, str) or not c for c in classes):
        fail("class labels must be non-empty strings")
    for name in ("priors", "sets_per_class"):
        if set(getattr(table, name)) != set(classes):
            fail(f"{name} keys do not match the class list")
    if table.total_sets < 1:
        fail("total_sets must be positive")
    if sum(table.sets_per_class.values()) != table.total_sets:
        fail("sets_per_class does not sum to total_sets")
    if len(table.features) != table.total_sets:
        fail("number of features differs from total_sets")
    if abs(sum(table.priors.values()) - 1.0) > 1e-9:
        fail("priors do not sum to 1")
    for c in classes:
        expected = table.sets_per_class[c] / table.total_sets
        if abs(table.priors[c] - expected) > 1e-12:
            fail(f"prior of {c!r} disagrees with its set share")
    origin = {c: 0 for c in classes}
    for f in table.features:
        if not f.items or list(f.items) != sorted(set(f.items)):
            fail(f"feature items must be sorted and distinct: {f.items!r}")
        if f.origin_class not in origin:
            fail(f"unknown origin class {f.origin_class!r}")
        origin[f.origin_class] += 1
        if set(f.prob_by_class) != set(classes) or set(f.counts_by_class) != set(classes):
            fail(f"feature {f.items!r} does not cover every class")
        if any(not p > 0 for p in f.prob_by_class.values()):
            fail(f"feature {f.items!r} has a non-positive probability")
        if f.argmax_class != _argmax(f.prob_by_class, classes):
            fail(f"feature {f.items!r} has an inconsistent argmax class")
    if origin != dict(table.sets_per_class):
        fail("sets_per_class disagrees with feature origins")


def _argmax(values: Mapping, order: Sequence) -> str:
    best = order[0]
    for c in order[1:]:
        if values[c] > values[best]:
            best = c
    return best


def mine_class_features(docs_by_class: Mapping, min_support=0.05, *, min_count=None) -> dict:
    """Mine the maximal multi-word frequent sets of every class.

    ``docs_by_class`` maps a label to that class's keyword sets. Returns
    ``{label: {items: count}}`` in the input's class order.
    """
    mined = {}
    for label, docs in docs_by_class.items():
        docs = list(docs)
        if not docs:
            raise ValueError(f"class {label!r} has no documents")
        if min_count is not None:
            levels = find_frequent_itemsets(docs, min_count=min_count)
        else:
            levels = find_frequent_itemsets(docs, min_support)
        mined[label] = {
            items: count
            for items, count in sorted(maximal_itemsets(levels).items())
            if len(items) >= 2
        }
    return mined


def compute_priors(sets_per_class: Mapping, total_sets: int) -> dict:
    if total_sets <= 0:
        raise ValueError("total_sets must be positive")
    if sum(sets_per_class.values()) != total_sets:
        raise ValueError("sets_per_class must sum to total_sets")
    return {c: n / total_sets for c, n in sets_per_class.items()}


def set_probability(count: int, class_set_count: int, total_sets: int) -> float:
    """Smoothed estimate ``(count + 1) / (class_set_count + total_sets)``."""
    if total_sets < 1:
        raise ValueError("total_sets must be >= 1")
    return (count + 1) / (class_set_count + total_sets)


def build_probability_table(
    mined: Mapping, config: ModelConfig | None = None, classes: Sequence | None = None
) -> ProbabilityTable:
    """Assemble the probability table from per-class mined sets.

    ``classes`` fixes the class order used for argmax tie-breaks; it
    defaults to the key order of ``mined``. A set mined by two classes
    stays two separate features.
    """
    classes = tuple(classes if classes is not None else mined)
    config = config or ModelConfig()
    unknown = set(mined) - set(classes)
    if unknown:
        raise ValueError(f"mined sets for undeclared classes: {sorted(unknown)}")
    sets_per_class = {c: len(mined.get(c, {})) for c in classes}
    total = sum(sets_per_class.values())
    if total == 0:
        raise ValueError("no word-sets were mined for any class")
    priors = compute_priors(sets_per_class, total)

    features = []
    for origin in classes:
        for items, count in mined.get(origin, {}).items():
            items = tuple(sorted(set(items)))
            counts = {c: (count if c == origin else 0) for c in classes}
            # the whole row shares the origin class's denominator
            probs = {
                c: set_probability(counts[c], sets_per_class[origin], total) for c in classes
            }
            features.append(
                FeatureSet(items, origin, counts, probs, _argmax(probs, classes))
            )
    return ProbabilityTable(classes, priors, sets_per_class, total, tuple(features), config)


def table_to_dict(table: ProbabilityTable) -> dict:
    return {
        "version": FORMAT_VERSION,
        "classes": list(table.classes),
        "priors": dict(table.priors),
        "sets_per_class": dict(table.sets_per_class),
        "total_sets": table.total_sets,
        "config": asdict(table.config),
        "features": [
            {
                "items": list(f.items),
                "origin_class": f.origin_class,
                "counts_by_class": dict(f.counts_by_class),
                "prob_by_class": dict(f.prob_by_class),
                "argmax_class": f.argmax_class,
            }
            for f in table.features
        ],
    }


def table_from_dict(data) -> ProbabilityTable:
    if not isinstance(data, dict) or "version" not in data:
        raise ModelFormatError("model document lacks a version field")
    if data["version"] != FORMAT_VERSION:
        raise ModelVersionError(
            f"unsupported model version {data['version']!r} (expected {FORMAT_VERSION})"
        )
    try:
        features = tuple(
            FeatureSet(
                items=tuple(f["items"]),
                origin_class=f["origin_class"],
                counts_by_class={k: int(v) for k, v in f["counts_by_class"].items()},
                prob_by_class={k: float(v) for k, v in f["prob_by_class"].items()},
                argmax_class=f["argmax_class"],
            )
            for f in data["features"]
        )
        config = ModelConfig(**data["config"])
        classes = tuple(data["classes"])
        priors = {k: float(v) for k, v in data["priors"].items()}
        sets_per_class = {k: int(v) for k, v in data["sets_per_class"].items()}
        total_sets = int(data["total_sets"])
    except ModelFormatError:
        raise
    except (KeyError, TypeError, AttributeError, ValueError) as exc:
        raise ModelFormatError(f"malformed model document: {exc}") from exc
    return ProbabilityTable(classes, priors, sets_per_class, total_sets, features, config)


def save_model(table: ProbabilityTable, path) -> None:
    text = json.dumps(table_to_dict(table), indent=2, ensure_ascii=False)
    Path(path).write_text(text + "\n", encoding="utf-8")


def load_model(path) -> ProbabilityTable:
    """Read a model file; raises ``OSError`` or a ``ModelFormatError`` subclass."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"{path}: not valid JSON ({exc})") from exc
    return table_from_dict(data)
