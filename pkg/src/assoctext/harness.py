"""Corpus loading, stratified splitting, evaluation and training sweeps."""

from __future__ import annotations

import csv
import io
import logging
import math
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Sequence

from .classifier import classify_document
from .model import ModelConfig, ProbabilityTable, build_probability_table, mine_class_features
from .textprep import DEFAULT_STOPWORDS, RawDocument, extract_keywords

__all__ = [
    "Corpus",
    "CorpusError",
    "EmptyCorpusError",
    "EvalReport",
    "SweepRow",
    "evaluate",
    "format_sweep_csv",
    "format_sweep_text",
    "load_corpus",
    "split_corpus",
    "sweep",
    "train_table",
]

log = logging.getLogger(__name__)

DOC_SUFFIX = ".txt"


class CorpusError(ValueError):
    pass


class EmptyCorpusError(CorpusError):
    """The corpus root holds no class directories."""


@dataclass(frozen=True)
class Corpus:
    docs: tuple
    classes: tuple
    skipped: int = 0

    @classmethod
    def from_docs(cls, docs: Iterable[RawDocument], skipped: int = 0) -> "Corpus":
        docs = tuple(docs)
        if any(not d.label for d in docs):
            raise CorpusError("every corpus document needs a label")
        return cls(docs, tuple(sorted({d.label for d in docs})), skipped)

    def by_class(self) -> dict:
        grouped = {c: [] for c in self.classes}
        for d in self.docs:
            grouped[d.label].append(d)
        return grouped

    def __len__(self):
        return len(self.docs)


def load_corpus(root) -> Corpus:
    """Read ``root/<label>/<doc>.txt`` files in lexicographic order.

    Entries that are not ``.txt`` files directly inside a class directory
    are skipped and counted in ``Corpus.skipped``.
    """
    root = Path(root)
    if not root.is_dir():
        raise CorpusError(f"corpus root {root} is not a directory")
    docs = []
    skipped = 0
    class_dirs = []
    for entry in sorted(root.iterdir()):
        if entry.is_dir():
            class_dirs.append(entry)
        else:
            skipped += 1
    if not class_dirs:
        raise EmptyCorpusError(f"corpus root {root} contains no class directories")

    for class_dir in class_dirs:
        found = 0
        for entry in sorted(class_dir.iterdir()):
            if not (entry.is_file() and entry.suffix == DOC_SUFFIX):
                skipped += 1
                continue
            try:
                text = entry.read_text(encoding="utf-8")
            except (OSError, UnicodeDecodeError) as exc:
                raise CorpusError(f"cannot read {entry}: {exc}") from exc
            docs.append(RawDocument(entry.relative_to(root).as_posix(), text, class_dir.name))
            found += 1
        if not found:
            raise CorpusError(f"class directory {class_dir} holds no {DOC_SUFFIX} files")
    if skipped:
        log.warning("skipped %d non-document entries under %s", skipped, root)
    return Corpus.from_docs(docs, skipped)


def _train_size(fraction: float, size: int) -> int:
    # round half up, then keep at least one document on each side
    k = math.floor(fraction * size + 0.5)
    return min(max(k, 1), size - 1)


def split_corpus(corpus: Corpus, train_fraction: float, seed: int = 42):
    """Stratified split: each class contributes its own rounded share to train."""
    if not 0 < train_fraction < 1:
        raise ValueError(f"train_fraction must be in (0, 1), got {train_fraction}")
    train_ids = set()
    for label, docs in corpus.by_class().items():
        if len(docs) < 2:
            raise CorpusError(f"class {label!r} needs at least 2 documents to split")
        rng = random.Random(f"{seed}:{label}")
        order = list(range(len(docs)))
        rng.shuffle(order)
        k = _train_size(train_fraction, len(docs))
        train_ids.update(docs[i].id for i in order[:k])
    train = [d for d in corpus.docs if d.id in train_ids]
    test = [d for d in corpus.docs if d.id not in train_ids]
    return Corpus.from_docs(train), Corpus.from_docs(test)


def train_table(
    corpus: Corpus, config: Optional[ModelConfig] = None, stops=DEFAULT_STOPWORDS
) -> ProbabilityTable:
    config = config or ModelConfig()
    docs_by_class = {
        label: [extract_keywords(d, stops, config.min_doc_freq) for d in docs]
        for label, docs in corpus.by_class().items()
    }
    mined = mine_class_features(docs_by_class, config.min_support)
    return build_probability_table(mined, config, corpus.classes)


@dataclass
class EvalReport:
    per_class: dict
    seed: Optional[int] = None
    predictions: list = field(default_factory=list, repr=False)

    @property
    def total_tested(self) -> int:
        return sum(t for t, _ in self.per_class.values())

    @property
    def total_correct(self) -> int:
        return sum(c for _, c in self.per_class.values())

    @property
    def accuracy_percent(self) -> float:
        total = self.total_tested
        return 100.0 * self.total_correct / total if total else 0.0

    def to_text(self) -> str:
        width = max([len("class"), len("total")] + [len(c) for c in self.per_class])
        lines = []
        if self.seed is not None:
            lines.append(f"seed: {self.seed}")
        lines.append(f"{'class':<{width}}  {'tested':>7}  {'correct':>8}  {'accuracy%':>10}")
        rows = list(self.per_class.items()) + [("total", (self.total_tested, self.total_correct))]
        for label, (tested, correct) in rows:
            acc = f"{100.0 * correct / tested:.6g}" if tested else "-"
            lines.append(f"{label:<{width}}  {tested:>7}  {correct:>8}  {acc:>10}")
        return "\n".join(lines) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["class", "tested", "correct"])
        for label, (tested, correct) in self.per_class.items():
            writer.writerow([label, tested, correct])
        writer.writerow(["total", self.total_tested, self.total_correct])
        return buf.getvalue()


def evaluate(table: ProbabilityTable, test: Corpus, stops=DEFAULT_STOPWORDS, seed=None) -> EvalReport:
    if not test.docs:
        raise EmptyCorpusError("test corpus is empty")
    per_class = {c: [0, 0] for c in test.classes}
    predictions = []
    for doc in test.docs:
        label = classify_document(doc, table, stops).label
        predictions.append((doc.id, doc.label, label))
        per_class[doc.label][0] += 1
        per_class[doc.label][1] += label == doc.label
    return EvalReport({c: tuple(v) for c, v in per_class.items()}, seed, predictions)


@dataclass(frozen=True)
class SweepRow:
    train_fraction: float
    accuracy_percent: float


def sweep(
    corpus: Corpus,
    fractions: Sequence[float],
    seed: int = 42,
    config: Optional[ModelConfig] = None,
    stops=DEFAULT_STOPWORDS,
) -> list:
    """Train and evaluate once per training fraction, in the given order."""
    rows = []
    for fraction in fractions:
        train, test = split_corpus(corpus, fraction, seed)
        table = train_table(train, config, stops)
        report = evaluate(table, test, stops, seed)
        rows.append(SweepRow(fraction, report.accuracy_percent))
    return rows


def format_sweep_text(rows: Sequence[SweepRow], seed=None) -> str:
    lines = [f"seed: {seed}"] if seed is not None else []
    lines.append(f"{'train%':>8}  {'accuracy%':>10}")
    for row in rows:
        lines.append(f"{100 * row.train_fraction:>8.6g}  {row.accuracy_percent:>10.6g}")
    return "\n".join(lines) + "\n"


def format_sweep_csv(rows: Sequence[SweepRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["train_fraction", "accuracy_percent"])
    for row in rows:
        writer.writerow([f"{row.train_fraction:.6g}", f"{row.accuracy_percent:.6g}"])
    return buf.getvalue()
