"""
Sentence-similarity providers used to order and filter beam candidates.

Similarity calls never go through the query ledger.
"""

import os
from typing import Optional, Protocol, runtime_checkable

import numpy as np
from wasabi import msg

from ..core.errors import MalformedResponse, NoCoverage
from ..core.http import JsonPoster
from ..core.text import TokenSequence
from ..embeddings.vectors import VectorStore


def _clamp(value: float) -> float:
    return max(-1.0, min(1.0, value))


@runtime_checkable
class SimilarityProvider(Protocol):
    def similarity(self, a: TokenSequence, b: TokenSequence) -> float: ...


def _mean_vector(store: VectorStore, text: TokenSequence) -> np.ndarray:
    keys = [store.resolve(token) for token in text.tokens]
    rows = [store.key_to_index[key] for key in keys if key is not None]
    if not rows:
        raise NoCoverage(f"none of {len(text)} tokens has a vector")
    return store.vectors[rows].mean(axis=0)


def mean_embedding_similarity(
    store: VectorStore, a: TokenSequence, b: TokenSequence
) -> float:
    """Cosine between the mean in-vocabulary word vectors of two sequences."""
    if a.tokens == b.tokens:
        _mean_vector(store, a)
        return 1.0
    u, v = _mean_vector(store, a), _mean_vector(store, b)
    denominator = float(np.linalg.norm(u)) * float(np.linalg.norm(v))
    if denominator == 0.0:
        return 0.0
    return _clamp(float(np.dot(u, v)) / denominator)


class MeanEmbeddingSimilarity:
    """Built-in provider over the same vector store the synonyms come from."""

    def __init__(self, store: VectorStore):
        self.store = store

    def similarity(self, a: TokenSequence, b: TokenSequence) -> float:
        try:
            return mean_embedding_similarity(self.store, a, b)
        except NoCoverage as e:
            msg.warn(f"Similarity treated as 0: {e}")
            return 0.0


class RemoteSimilarity:
    """Sentence encoder behind HTTP: POST {"a": ..., "b": ...} -> {"similarity": float}."""

    def __init__(
        self,
        endpoint: Optional[str] = None,
        timeout: float = 10.0,
        retries: int = 3,
        poster: Optional[JsonPoster] = None,
    ):
        endpoint = endpoint or os.getenv("SIMILARITY_ENDPOINT")
        if not endpoint:
            raise ValueError(
                "no similarity endpoint given and SIMILARITY_ENDPOINT is unset"
            )
        self.endpoint = endpoint
        self.poster = poster or JsonPoster(timeout=timeout, retries=retries)

    def similarity(self, a: TokenSequence, b: TokenSequence) -> float:
        return remote_similarity(self.endpoint, a.text, b.text, poster=self.poster)


def remote_similarity(
    endpoint: str,
    a: str,
    b: str,
    timeout: float = 10.0,
    poster: Optional[JsonPoster] = None,
) -> float:
    poster = poster or JsonPoster(timeout=timeout)
    payload = poster.post(endpoint, {"a": a, "b": b})
    if not isinstance(payload, dict) or "similarity" not in payload:
        raise MalformedResponse(f"expected an object with 'similarity', got {payload!r}")
    value = payload["similarity"]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise MalformedResponse(f"similarity must be a number, got {value!r}")
    if not np.isfinite(value):
        raise MalformedResponse("similarity must be finite")
    return _clamp(float(value))
