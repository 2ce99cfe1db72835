"""Turn raw document text into normalized keyword sets.

A keyword set is the transaction unit for itemset mining: the sorted,
distinct, stopword-free words that occur often enough inside one document.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional

from sklearn.base import BaseEstimator, TransformerMixin

__all__ = [
    "DEFAULT_STOPWORDS",
    "KeywordExtractor",
    "RawDocument",
    "extract_keywords",
    "load_stopwords",
    "normalize",
    "tokenize",
]

_WORD_RE = re.compile(r"[^\W\d_]+")

# Function words only. Content-bearing words such as "well", "some", "more",
# "many", "above", "due", "within" or "using" are deliberately kept; they show
# up as keywords in mined word-sets.
_FUNCTION_WORDS = """
about after again against am an and any are as at be because been before
being below between both but by can could did do does doing done during each
few for from further given had has have having he her here hers herself him
himself his how i if in into is it its itself just me might must my myself no
nor not of off on once only or other our ours ourselves out over own same she
should so such than that the their theirs them themselves then there these
they this those through thus to too under until up upon very via was we were
what when where whether which while who whom whose why will with would yet
you your yours yourself yourselves
"""

DEFAULT_STOPWORDS = frozenset(_FUNCTION_WORDS.split()) | frozenset(
    "abcdefghijklmnopqrstuvwxyz"
)


@dataclass(frozen=True)
class RawDocument:
    id: str
    text: str
    label: Optional[str] = None

    def __post_init__(self):
        if not self.id:
            raise ValueError("document id must be non-empty")


def load_stopwords(path) -> frozenset:
    """Read a stopword file: one word per line, ``#`` lines ignored."""
    words = set()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            word = line.strip().lower()
            if not word or word.startswith("#"):
                continue
            if any(ch.isspace() for ch in word):
                raise ValueError(f"stopword entry contains whitespace: {word!r}")
            words.add(word)
    return frozenset(words)


def tokenize(text: str) -> list[str]:
    """Lowercase ``text`` and split it on every non-letter character."""
    return _WORD_RE.findall(text.lower())


def normalize(token: str) -> str:
    """Fold plural forms by dropping a single trailing ``s``."""
    if len(token) >= 3 and token.endswith("s"):
        return token[:-1]
    return token


def extract_keywords(
    doc, stops: Iterable[str] = DEFAULT_STOPWORDS, min_doc_freq: int = 2
) -> tuple[str, ...]:
    """Return the sorted keyword set of one document.

    Parameters
    ----------
    doc : RawDocument or str
        Document (or bare text) to reduce.
    stops : iterable of str
        Words removed both before and after normalization.
    min_doc_freq : int
        Minimum number of occurrences of a normalized word inside the
        document for it to count as a keyword.
    """
    if min_doc_freq < 1:
        raise ValueError(f"min_doc_freq must be >= 1, got {min_doc_freq}")
    text = doc.text if isinstance(doc, RawDocument) else doc
    stops = stops if isinstance(stops, (set, frozenset)) else frozenset(stops)

    counts = Counter()
    for token in tokenize(text):
        if token in stops:
            continue
        word = normalize(token)
        if word in stops:
            continue
        counts[word] += 1
    return tuple(sorted(w for w, c in counts.items() if c >= min_doc_freq))


class KeywordExtractor(BaseEstimator, TransformerMixin):
    """Stateless transformer mapping raw texts to keyword tuples.

    Parameters
    ----------
    stopwords : iterable of str or path-like, optional
        Stopword collection or a stopword file. ``None`` uses the built-in
        English function-word list.
    min_doc_freq : int, default=2
        In-document frequency a word needs to become a keyword.
    """

    def __init__(self, stopwords=None, min_doc_freq=2):
        self.stopwords = stopwords
        self.min_doc_freq = min_doc_freq

    def fit(self, X, y=None):
        self.stopwords_ = resolve_stopwords(self.stopwords)
        return self

    def transform(self, X):
        stops = getattr(self, "stopwords_", None)
        if stops is None:
            stops = resolve_stopwords(self.stopwords)
        return [extract_keywords(doc, stops, self.min_doc_freq) for doc in X]

    def __sklearn_tags__(self):
        tags = super().__sklearn_tags__()
        tags.requires_fit = False
        tags.input_tags.string = True
        tags.input_tags.two_d_array = False
        return tags


def resolve_stopwords(stopwords) -> frozenset:
    if stopwords is None:
        return DEFAULT_STOPWORDS
    if isinstance(stopwords, (str, Path)):
        return load_stopwords(stopwords)
    return frozenset(w.lower() for w in stopwords)
