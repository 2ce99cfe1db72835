"""Input checks for the estimator front-ends."""

from __future__ import annotations

from .textprep import RawDocument


def check_texts(X) -> list:
    """Coerce ``X`` to a list of strings.

    Accepts strings or :class:`RawDocument` objects; rejects a bare string,
    which would otherwise be iterated character by character.
    """
    if isinstance(X, (str, bytes)):
        raise TypeError("expected an iterable of documents, got a single string")
    texts = []
    for i, doc in enumerate(X):
        if isinstance(doc, RawDocument):
            texts.append(doc.text)
        elif isinstance(doc, str):
            texts.append(doc)
        else:
            raise TypeError(f"document {i} is {type(doc).__name__}, expected str")
    return texts


def check_labels(y, n_samples: int) -> list:
    labels = [str(label) for label in y]
    if len(labels) != n_samples:
        raise ValueError(f"got {len(labels)} labels for {n_samples} documents")
    if not labels:
        raise ValueError("cannot fit on zero documents")
    if any(not label for label in labels):
        raise ValueError("class labels must be non-empty")
    return labels
