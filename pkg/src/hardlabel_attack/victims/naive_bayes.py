"""
Multinomial Naive Bayes victim trained from a labelled corpus.
"""

import math
from collections import Counter
from typing import Iterable, Sequence, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from wasabi import msg

from ..core.errors import DegenerateCorpus
from ..core.text import Label, TokenSequence, tokenize


class NaiveBayesVictim(BaseModel):
    """Bag-of-words multinomial Naive Bayes over lowercased tokens.

    Words never seen in training are ignored at prediction time.
    """

    model_config = ConfigDict(frozen=True)

    class_log_priors: list[float]
    word_log_likelihoods: list[dict[str, float]]
    vocabulary: list[str]
    alpha: float = Field(default=1.0, gt=0.0)

    @model_validator(mode="after")
    def _check_distribution(self) -> "NaiveBayesVictim":
        if len(self.class_log_priors) < 2:
            raise ValueError("a victim needs at least two classes")
        if len(self.word_log_likelihoods) != len(self.class_log_priors):
            raise ValueError("one likelihood table per class is required")
        total = float(np.logaddexp.reduce(np.asarray(self.class_log_priors)))
        if abs(math.exp(total) - 1.0) > 1e-9:
            raise ValueError(f"class priors sum to {math.exp(total)}, expected 1")
        return self

    @property
    def num_classes(self) -> int:
        return len(self.class_log_priors)

    def _log_scores(self, text: TokenSequence) -> np.ndarray:
        scores = np.asarray(self.class_log_priors, dtype=float)
        # Sorted so the float sum does not depend on token order.
        for token in sorted(token.lower() for token in text.tokens):
            if token not in self.word_log_likelihoods[0]:
                continue
            scores = scores + np.asarray(
                [table[token] for table in self.word_log_likelihoods]
            )
        return scores

    def predict(self, text: TokenSequence) -> Label:
        return Label(id=int(np.argmax(self._log_scores(text))))

    def predict_proba(self, text: TokenSequence) -> Sequence[float]:
        scores = self._log_scores(text)
        scores = scores - np.logaddexp.reduce(scores)
        return np.exp(scores).tolist()

    @classmethod
    def load(cls, path: str) -> "NaiveBayesVictim":
        with open(path, "r", encoding="utf-8") as f:
            return cls.model_validate_json(f.read())

    def save(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as f:
            f.write(self.model_dump_json(indent=2))


def train_naive_bayes(
    corpus: Iterable[tuple[Union[str, TokenSequence], Union[int, Label]]],
    alpha: float = 1.0,
) -> NaiveBayesVictim:
    """
    Fit a multinomial Naive Bayes model with add-alpha smoothing.

    Args:
        corpus: (text, label) pairs; texts may be raw strings or token sequences.
        alpha: Additive smoothing constant.

    Returns:
        A trained NaiveBayesVictim with classes 0..max(label).

    Raises:
        DegenerateCorpus: If the corpus is empty or any class in 0..max(label)
            has no documents.
    """
    documents: list[tuple[list[str], int]] = []
    for text, label in corpus:
        tokens = tokenize(text) if isinstance(text, str) else text
        label_id = label.id if isinstance(label, Label) else int(label)
        documents.append(([t.lower() for t in tokens.tokens], label_id))

    if not documents:
        raise DegenerateCorpus("corpus is empty")

    num_classes = max(label for _, label in documents) + 1
    doc_counts = Counter(label for _, label in documents)
    missing = [c for c in range(num_classes) if doc_counts[c] == 0]
    if num_classes < 2 or missing:
        raise DegenerateCorpus(
            f"every class needs documents; empty classes: {missing or [1]}"
        )

    word_counts = [Counter() for _ in range(num_classes)]
    for tokens, label in documents:
        word_counts[label].update(tokens)

    vocabulary = sorted(set().union(*word_counts))
    total_docs = len(documents)
    class_log_priors = [math.log(doc_counts[c] / total_docs) for c in range(num_classes)]

    word_log_likelihoods = []
    for counts in word_counts:
        denominator = sum(counts.values()) + alpha * len(vocabulary)
        word_log_likelihoods.append(
            {word: math.log((counts[word] + alpha) / denominator) for word in vocabulary}
        )

    msg.good(
        f"Trained Naive Bayes victim: {num_classes} classes, "
        f"{len(vocabulary)} words, {total_docs} documents"
    )
    return NaiveBayesVictim(
        class_log_priors=class_log_priors,
        word_log_likelihoods=word_log_likelihoods,
        vocabulary=vocabulary,
        alpha=alpha,
    )
