"""Level-wise Apriori mining, maximal itemsets and strong association rules.

Itemsets are represented as sorted tuples of item strings; a level maps
each k-item tuple to its support count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Optional, Sequence

from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

__all__ = [
    "AprioriMiner",
    "AssociationRule",
    "ItemsetLevels",
    "find_frequent_itemsets",
    "generate_candidates",
    "generate_rules",
    "has_infrequent_subset",
    "maximal_itemsets",
    "min_support_count",
    "read_transactions",
    "support_count",
]

Itemset = tuple


@dataclass
class ItemsetLevels:
    """Frequent itemsets L1..Lk; ``levels[0]`` holds the 1-itemsets."""

    levels: list
    total_transactions: int
    min_support_count: int

    def __iter__(self):
        for level in self.levels:
            yield from level.items()

    def __len__(self):
        return sum(len(level) for level in self.levels)

    def level(self, k: int) -> dict:
        """Frequent k-itemsets (empty dict past the last level)."""
        if 1 <= k <= len(self.levels):
            return self.levels[k - 1]
        return {}

    def counts(self) -> dict:
        return {items: count for items, count in self}


@dataclass(frozen=True)
class AssociationRule:
    antecedent: Itemset
    consequent: Itemset
    support: float
    confidence: float

    def __str__(self):
        return f"{','.join(self.antecedent)} -> {','.join(self.consequent)}"


def _as_itemset(items: Iterable[str]) -> Itemset:
    return tuple(sorted(set(items)))


def read_transactions(path) -> list:
    """Parse a transaction file: whitespace-separated items, one per line.

    Blank lines are empty transactions; lines starting with ``#`` are skipped.
    """
    transactions = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            stripped = line.strip()
            if stripped.startswith("#"):
                continue
            transactions.append(_as_itemset(stripped.split()))
    # Trailing blank lines are layout, not transactions.
    while transactions and not transactions[-1]:
        transactions.pop()
    return transactions


def support_count(items: Iterable[str], transactions: Iterable[Iterable[str]]) -> int:
    """Number of transactions containing every one of ``items``."""
    wanted = set(items)
    return sum(1 for t in transactions if wanted.issubset(t))


def min_support_count(min_support, n_transactions: int) -> int:
    """Smallest count satisfying ``count >= min_support * n_transactions``."""
    if not 0 < min_support <= 1:
        raise ValueError(f"min_support must be in (0, 1], got {min_support}")
    if isinstance(min_support, Fraction):
        needed = math.ceil(min_support * n_transactions)
    else:
        # tolerate float noise such as (2/9) * 9 == 2.0000000000000004
        needed = math.ceil(min_support * n_transactions - 1e-9)
    return max(1, needed)


def has_infrequent_subset(candidate: Itemset, prev_level) -> bool:
    """True if some (k-1)-subset of ``candidate`` is not in ``prev_level``."""
    k = len(candidate)
    return any(s not in prev_level for s in combinations(candidate, k - 1))


def generate_candidates(prev_level) -> set:
    """Join frequent (k-1)-itemsets into pruned k-item candidates."""
    ordered = sorted(prev_level)
    if not ordered:
        return set()
    prev = set(ordered)
    candidates = set()
    for i, l1 in enumerate(ordered):
        prefix = l1[:-1]
        for l2 in ordered[i + 1:]:
            # sorted order keeps every join partner of l1 contiguous after it
            if l2[:-1] != prefix:
                break
            c = l1 + (l2[-1],)
            if not has_infrequent_subset(c, prev):
                candidates.add(c)
    return candidates


def _count_candidates(candidates: set, transactions: Sequence[Itemset], k: int) -> dict:
    counts = dict.fromkeys(candidates, 0)
    n_cand = len(candidates)
    for t in transactions:
        if len(t) < k:
            continue
        if math.comb(len(t), k) <= n_cand:
            for sub in combinations(t, k):
                if sub in counts:
                    counts[sub] += 1
        else:
            # long transaction: checking each candidate is cheaper than
            # enumerating every k-subset of t
            tset = set(t)
            for c in candidates:
                if tset.issuperset(c):
                    counts[c] += 1
    return counts


def find_frequent_itemsets(
    transactions: Iterable[Iterable[str]],
    min_support=None,
    *,
    min_count: Optional[int] = None,
) -> ItemsetLevels:
    """Mine all frequent itemsets level by level.

    Exactly one of ``min_support`` (a fraction in (0, 1]) and ``min_count``
    (an absolute support count) must be given.
    """
    data = [_as_itemset(t) for t in transactions]
    if not data:
        raise ValueError("cannot mine an empty transaction list")
    if (min_support is None) == (min_count is None):
        raise ValueError("give exactly one of min_support and min_count")
    if min_count is None:
        threshold = min_support_count(min_support, len(data))
    else:
        if min_count < 1:
            raise ValueError(f"min_count must be >= 1, got {min_count}")
        threshold = int(min_count)

    item_counts: dict = {}
    for t in data:
        for item in t:
            item_counts[(item,)] = item_counts.get((item,), 0) + 1
    current = {c: n for c, n in item_counts.items() if n >= threshold}

    levels = []
    k = 1
    while current:
        levels.append(dict(sorted(current.items())))
        k += 1
        candidates = generate_candidates(current)
        if not candidates:
            break
        counts = _count_candidates(candidates, data, k)
        current = {c: n for c, n in counts.items() if n >= threshold}
    return ItemsetLevels(levels, len(data), threshold)


def maximal_itemsets(levels: ItemsetLevels) -> dict:
    """Frequent itemsets with no frequent proper superset, with counts.

    By anti-monotonicity a k-itemset with any frequent superset also has a
    frequent superset of size k+1, so only the next level is scanned.
    """
    result = {}
    for k, level in enumerate(levels.levels, start=1):
        covered = set()
        for bigger in levels.level(k + 1):
            covered.update(combinations(bigger, k))
        for items, count in level.items():
            if items not in covered:
                result[items] = count
    return result


def generate_rules(levels: ItemsetLevels, min_confidence: float) -> list:
    """Strong rules ``A -> F - A`` over every frequent F with at least 2 items."""
    if not 0 < min_confidence <= 1:
        raise ValueError(f"min_confidence must be in (0, 1], got {min_confidence}")
    counts = levels.counts()
    n = levels.total_transactions
    rules = []
    for k in range(2, len(levels.levels) + 1):
        for items, count in levels.level(k).items():
            for r in range(1, k):
                for ante in combinations(items, r):
                    confidence = count / counts[ante]
                    if confidence < min_confidence:
                        continue
                    cons = tuple(x for x in items if x not in ante)
                    rules.append(AssociationRule(ante, cons, count / n, confidence))
    rules.sort(key=lambda r: (len(r.antecedent) + len(r.consequent), r.antecedent, r.consequent))
    return rules


class AprioriMiner(BaseEstimator):
    """Estimator wrapper around :func:`find_frequent_itemsets`.

    Parameters
    ----------
    min_support : float, default=0.05
        Minimum support as a fraction of transactions.
    min_count : int, optional
        Absolute support count; overrides ``min_support`` when set.
    min_confidence : float, default=0.75
        Threshold for the rules exposed in ``rules_``.

    Attributes
    ----------
    levels_ : ItemsetLevels
    maximal_itemsets_ : dict
    rules_ : list of AssociationRule
    """

    def __init__(self, min_support=0.05, min_count=None, min_confidence=0.75):
        self.min_support = min_support
        self.min_count = min_count
        self.min_confidence = min_confidence

    def fit(self, X, y=None):
        if self.min_count is not None:
            self.levels_ = find_frequent_itemsets(X, min_count=self.min_count)
        else:
            self.levels_ = find_frequent_itemsets(X, self.min_support)
        self.maximal_itemsets_ = maximal_itemsets(self.levels_)
        self.rules_ = generate_rules(self.levels_, self.min_confidence)
        return self

    @property
    def frequent_itemsets_(self) -> dict:
        check_is_fitted(self, "levels_")
        return self.levels_.counts()

    def __sklearn_tags__(self):
        tags = super().__sklearn_tags__()
        tags.input_tags.two_d_array = False
        return tags
