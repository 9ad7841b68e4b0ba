"""
Word-vector store and nearest-neighbour synonym candidates.

Neighbours are found by exact cosine scan over L2-normalised rows.
"""

import math
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator
from wasabi import msg

from ..core.errors import DimensionMismatch, UnknownWord, VectorParseError


class CandidateSet(BaseModel):
    """Top-k substitution options for one word, most similar first."""

    model_config = ConfigDict(frozen=True)

    word: str
    candidates: tuple[tuple[str, float], ...] = ()

    @model_validator(mode="after")
    def _check_order(self) -> "CandidateSet":
        cosines = [cosine for _, cosine in self.candidates]
        if any(a < b for a, b in zip(cosines, cosines[1:])):
            raise ValueError("candidates must be ordered by descending cosine")
        if any(synonym == self.word for synonym, _ in self.candidates):
            raise ValueError("a word is never its own candidate")
        return self

    @property
    def words(self) -> list[str]:
        return [synonym for synonym, _ in self.candidates]

    def __len__(self) -> int:
        return len(self.candidates)


class VectorStore:
    """Immutable word -> vector table. All rows share `dim` and are finite."""

    def __init__(self, words: Sequence[str], vectors: np.ndarray):
        vectors = np.array(vectors, dtype=float)
        if vectors.ndim != 2 or vectors.shape[0] != len(words):
            raise ValueError("need one vector row per word")
        if not np.all(np.isfinite(vectors)):
            raise ValueError("vectors must not contain NaN or Inf")

        self.index_to_key: list[str] = list(words)
        self.key_to_index: dict[str, int] = {w: i for i, w in enumerate(words)}
        if len(self.key_to_index) != len(self.index_to_key):
            raise ValueError("duplicate words in vector table")

        self.vectors = vectors
        self.vectors.setflags(write=False)
        norms = np.linalg.norm(vectors, axis=1, keepdims=True)
        self._normed = np.divide(
            vectors, norms, out=np.zeros_like(vectors), where=norms > 0
        )
        self._key_array = np.asarray(self.index_to_key, dtype=str)

    @classmethod
    def from_mapping(cls, table: Mapping[str, Iterable[float]]) -> "VectorStore":
        words = list(table)
        return cls(words, np.asarray([list(table[w]) for w in words], dtype=float))

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    def __len__(self) -> int:
        return len(self.index_to_key)

    def __contains__(self, word: str) -> bool:
        return word in self.key_to_index

    def __getitem__(self, word: str) -> np.ndarray:
        if word not in self.key_to_index:
            raise UnknownWord(word)
        return self.vectors[self.key_to_index[word]]

    def resolve(self, token: str) -> Optional[str]:
        """Key under which a text token is stored: as written, else lowercased."""
        if token in self.key_to_index:
            return token
        lowered = token.lower()
        if lowered in self.key_to_index:
            return lowered
        return None

    def cosines_to(self, word: str) -> np.ndarray:
        """Cosine between `word` and every stored word (0 for zero vectors)."""
        if word not in self.key_to_index:
            raise UnknownWord(word)
        return self._normed @ self._normed[self.key_to_index[word]]


def _parse_floats(fields: list[str], line_no: int) -> list[float]:
    try:
        values = [float(x) for x in fields]
    except ValueError:
        raise VectorParseError(line_no, "components must be decimal numbers")
    if not all(math.isfinite(v) for v in values):
        raise VectorParseError(line_no, "components must be finite")
    return values


def _is_header(fields: list[str]) -> bool:
    return len(fields) == 2 and all(f.isdigit() for f in fields)


def load_vectors(path: str) -> VectorStore:
    """
    Read a whitespace-separated vector file: `word v1 ... vd` per line, with an
    optional leading `count dim` header.

    Duplicate words keep their first row; `dim` comes from the first data row.

    Raises:
        VectorParseError: A row has no components or a non-numeric component.
        DimensionMismatch: A row's component count differs from `dim`.
    """
    words: list[str] = []
    rows: list[list[float]] = []
    seen: set[str] = set()
    dim: Optional[int] = None
    duplicates = 0

    with open(path, "r", encoding="utf-8") as f:
        for line_no, line in enumerate(f, start=1):
            fields = line.split()
            if not fields:
                continue
            if line_no == 1 and _is_header(fields):
                continue
            if len(fields) < 2:
                raise VectorParseError(line_no, "row has no components")

            word, values = fields[0], _parse_floats(fields[1:], line_no)
            if dim is None:
                dim = len(values)
            elif len(values) != dim:
                raise DimensionMismatch(line_no, dim, len(values))

            if word in seen:
                duplicates += 1
                continue
            seen.add(word)
            words.append(word)
            rows.append(values)

    if dim is None:
        raise VectorParseError(0, "file contains no vectors")
    if duplicates:
        msg.warn(f"Ignored {duplicates} duplicate rows in {path}")
    msg.info(f"Loaded {len(words)} vectors of dimension {dim} from {path}")
    return VectorStore(words, np.asarray(rows, dtype=float))


def save_vectors(store: VectorStore, path: str, header: bool = False) -> None:
    """Write a store in the format load_vectors reads, exactly round-trippable."""
    with open(path, "w", encoding="utf-8") as f:
        if header:
            f.write(f"{len(store)} {store.dim}\n")
        for word, row in zip(store.index_to_key, store.vectors):
            f.write(word + " " + " ".join(repr(float(v)) for v in row) + "\n")


def top_k_synonyms(store: VectorStore, word: str, k: int) -> CandidateSet:
    """
    The k stored words with the highest cosine to `word`, excluding `word`.

    Ties are broken by lexicographic word order.

    Raises:
        UnknownWord: If `word` has no vector.
    """
    if k < 1:
        raise ValueError("k must be positive")
    cosines = store.cosines_to(word)
    # lexsort: last key is primary.
    order = np.lexsort((store._key_array, -cosines))
    self_index = store.key_to_index[word]

    candidates = []
    for index in order:
        if index == self_index:
            continue
        candidates.append((store.index_to_key[index], float(cosines[index])))
        if len(candidates) == k:
            break
    return CandidateSet(word=word, candidates=tuple(candidates))
