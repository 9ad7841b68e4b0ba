from typing import Mapping

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from ..core.config import RankingSource
from ..core.errors import NoAttackablePositions
from ..core.text import TokenSequence
from ..embeddings.stopwords import StopWordList
from ..embeddings.vectors import VectorStore


class ImportanceRanking(BaseModel):
    """Attack order over token positions, most important first."""

    model_config = ConfigDict(frozen=True)

    order: tuple[int, ...]
    scores: dict[int, float]
    source: RankingSource = RankingSource.LIME

    @model_validator(mode="after")
    def _check_order(self) -> "ImportanceRanking":
        if set(self.order) != set(self.scores) or len(set(self.order)) != len(
            self.order
        ):
            raise ValueError("order must list every scored position exactly once")
        expected = sorted(self.scores, key=lambda i: (-self.scores[i], i))
        if list(self.order) != expected:
            raise ValueError("order must be by descending score, then index")
        return self

    def __len__(self) -> int:
        return len(self.order)


def attackable_positions(
    x: TokenSequence, stop_words: StopWordList, store: VectorStore
) -> list[int]:
    """Positions that are neither stop words nor missing from the vector store."""
    return [
        i
        for i, token in enumerate(x.tokens)
        if token not in stop_words and store.resolve(token) is not None
    ]


def rank_from_scores(
    x: TokenSequence,
    scores: Mapping[int, float],
    stop_words: StopWordList,
    store: VectorStore,
    source: RankingSource,
) -> ImportanceRanking:
    """
    Keep the attackable positions and sort them by score (descending),
    breaking ties by position.

    Raises:
        NoAttackablePositions: If no position survives the filter.
    """
    positions = attackable_positions(x, stop_words, store)
    if not positions:
        raise NoAttackablePositions(f"no attackable word among {len(x)} tokens")
    kept = {i: float(scores[i]) for i in positions}
    order = sorted(kept, key=lambda i: (-kept[i], i))
    return ImportanceRanking(order=tuple(order), scores=kept, source=source)


def random_rank(
    x: TokenSequence,
    stop_words: StopWordList,
    store: VectorStore,
    rng: np.random.Generator,
) -> ImportanceRanking:
    """Uniformly random attack order; the scores just encode the drawn permutation."""
    positions = attackable_positions(x, stop_words, store)
    if not positions:
        raise NoAttackablePositions(f"no attackable word among {len(x)} tokens")
    permutation = [positions[i] for i in rng.permutation(len(positions))]
    scores = {p: float(len(permutation) - rank) for rank, p in enumerate(permutation)}
    return ImportanceRanking(
        order=tuple(permutation), scores=scores, source=RankingSource.RANDOM
    )
