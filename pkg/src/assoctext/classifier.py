"""Positive/negative matched-set scoring over a probability table.

For a class ``c`` the positive sets are the features whose most probable
class is ``c``; every other feature is negative. The score rewards matched
positives and unmatched negatives::

    score(c) = 100 * p / pval + 100 * n / nval + prior(c)
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_labels, check_texts
from .model import ModelConfig, ProbabilityTable, build_probability_table, mine_class_features
from .textprep import DEFAULT_STOPWORDS, extract_keywords, resolve_stopwords

__all__ = [
    "AssociationTextClassifier",
    "ClassScore",
    "Prediction",
    "classify",
    "classify_document",
    "match_fraction",
    "score_class",
    "score_from_counts",
]


@dataclass(frozen=True)
class ClassScore:
    label: str
    pval: int
    nval: int
    p: int
    n: int
    prior: float

    @property
    def positive_term(self) -> float:
        return 100.0 * self.p / self.pval if self.pval else 0.0

    @property
    def negative_term(self) -> float:
        # no negative sets: all of them are (vacuously) unmatched
        return 100.0 * self.n / self.nval if self.nval else 100.0

    @property
    def score(self) -> float:
        return self.positive_term + self.negative_term + self.prior


@dataclass(frozen=True)
class Prediction:
    label: str
    scores: tuple

    def score_of(self, label) -> ClassScore:
        for s in self.scores:
            if s.label == label:
                return s
        raise KeyError(label)


def match_fraction(set_items: Sequence[str], keywords: Iterable[str]) -> float:
    """Share of ``set_items`` present among ``keywords``."""
    if not set_items:
        raise ValueError("set_items must be non-empty")
    kw = keywords if isinstance(keywords, (set, frozenset)) else set(keywords)
    return sum(1 for w in set_items if w in kw) / len(set_items)


def score_from_counts(label, p, pval, n, nval, prior) -> ClassScore:
    """Build a score directly from its count tuple, checking ranges."""
    if min(p, pval, n, nval) < 0 or p > pval or n > nval:
        raise ValueError(f"inconsistent counts for {label!r}: {p}/{pval}, {n}/{nval}")
    return ClassScore(label, pval, nval, p, n, prior)


def _matched_flags(table: ProbabilityTable, keywords, threshold) -> list:
    kw = frozenset(keywords)
    return [match_fraction(f.items, kw) >= threshold for f in table.features]


def _score(label, table, matched) -> ClassScore:
    pval = nval = p = n = 0
    for feature, hit in zip(table.features, matched):
        if feature.argmax_class == label:
            pval += 1
            p += hit
        else:
            nval += 1
            n += not hit
    return ClassScore(label, pval, nval, p, n, table.priors[label])


def score_class(label, table: ProbabilityTable, keywords, match_threshold=None) -> ClassScore:
    if label not in table.priors:
        raise KeyError(f"unknown class label {label!r}")
    threshold = table.config.match_threshold if match_threshold is None else match_threshold
    return _score(label, table, _matched_flags(table, keywords, threshold))


def _pick(scores: Sequence[ClassScore]) -> str:
    best = scores[0]
    for s in scores[1:]:
        if s.score > best.score:
            best = s
    return best.label


def classify(keywords, table: ProbabilityTable, match_threshold=None) -> Prediction:
    """Score every class and return the best one (first in class order on ties)."""
    if not table.features:
        raise ValueError("model has no feature sets")
    threshold = table.config.match_threshold if match_threshold is None else match_threshold
    matched = _matched_flags(table, keywords, threshold)
    scores = tuple(_score(c, table, matched) for c in table.classes)
    return Prediction(_pick(scores), scores)


def classify_document(doc, table: ProbabilityTable, stops=DEFAULT_STOPWORDS) -> Prediction:
    keywords = extract_keywords(doc, stops, table.config.min_doc_freq)
    return classify(keywords, table)


def predict_from_counts(table: ProbabilityTable, counts: dict) -> Prediction:
    """Score from externally supplied ``{label: (p, pval, n, nval)}`` tuples."""
    missing = set(table.classes) - set(counts)
    extra = set(counts) - set(table.classes)
    if missing or extra:
        raise ValueError(
            f"count tuples must cover exactly the model classes "
            f"(missing {sorted(missing)}, unknown {sorted(extra)})"
        )
    scores = tuple(
        score_from_counts(c, *counts[c], prior=table.priors[c]) for c in table.classes
    )
    return Prediction(_pick(scores), scores)


class AssociationTextClassifier(ClassifierMixin, BaseEstimator):
    """Text classifier built on per-class association word-sets.

    Parameters
    ----------
    min_support : float, default=0.05
        Minimum support fraction for per-class Apriori mining.
    min_confidence : float, default=0.75
        Recorded in the model config; rules are not used for scoring.
    min_doc_freq : int, default=2
        In-document frequency for a word to become a keyword.
    match_threshold : float, default=0.5
        Fraction of a word-set that must appear among a document's
        keywords for the set to count as matched.
    stopwords : iterable of str or path-like, optional
        Stopwords; ``None`` selects the built-in list.

    Attributes
    ----------
    classes_ : ndarray of str
    table_ : ProbabilityTable
    """

    def __init__(
        self,
        min_support=0.05,
        min_confidence=0.75,
        min_doc_freq=2,
        match_threshold=0.5,
        stopwords=None,
    ):
        self.min_support = min_support
        self.min_confidence = min_confidence
        self.min_doc_freq = min_doc_freq
        self.match_threshold = match_threshold
        self.stopwords = stopwords

    def _config(self) -> ModelConfig:
        return ModelConfig(
            self.min_support, self.min_confidence, self.min_doc_freq, self.match_threshold
        )

    def fit(self, X, y):
        X = check_texts(X)
        y = check_labels(y, len(X))
        config = self._config()
        self.stopwords_ = resolve_stopwords(self.stopwords)

        classes = sorted(set(y))
        docs_by_class = {c: [] for c in classes}
        for text, label in zip(X, y):
            docs_by_class[label].append(extract_keywords(text, self.stopwords_, config.min_doc_freq))
        mined = mine_class_features(docs_by_class, config.min_support)
        self.table_ = build_probability_table(mined, config, classes)
        self.classes_ = np.array(classes, dtype=object)
        return self

    @classmethod
    def from_table(cls, table: ProbabilityTable, stopwords=None):
        """Wrap an existing table (e.g. one loaded from disk) as a fitted estimator."""
        cfg = table.config
        est = cls(cfg.min_support, cfg.min_confidence, cfg.min_doc_freq, cfg.match_threshold, stopwords)
        est.stopwords_ = resolve_stopwords(stopwords)
        est.table_ = table
        est.classes_ = np.array(table.classes, dtype=object)
        return est

    def _predictions(self, X) -> list:
        check_is_fitted(self, "table_")
        X = check_texts(X)
        return [
            classify(
                extract_keywords(text, self.stopwords_, self.table_.config.min_doc_freq),
                self.table_,
                self.match_threshold,
            )
            for text in X
        ]

    def decision_function(self, X):
        """Per-class scores, shape ``(n_samples, n_classes)``, columns in ``classes_`` order."""
        preds = self._predictions(X)
        return np.array([[s.score for s in pred.scores] for pred in preds], dtype=float)

    def predict(self, X):
        return np.array([pred.label for pred in self._predictions(X)], dtype=object)

    def __sklearn_tags__(self):
        tags = super().__sklearn_tags__()
        tags.input_tags.string = True
        tags.input_tags.two_d_array = False
        return tags
