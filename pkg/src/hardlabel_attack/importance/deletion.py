"""
Score-based baseline ranking: how much the original class probability drops
when a word is deleted. Needs a victim that exposes probabilities.
"""

from typing import Callable, Sequence

from ..core.config import RankingSource
from ..core.errors import ScoreUnavailable
from ..core.text import Label, TokenSequence
from ..embeddings.stopwords import StopWordList
from ..embeddings.vectors import VectorStore
from ..victims.oracle import HardLabelOracle, ProbabilisticOracle, QueryLedger
from .ranking import ImportanceRanking, attackable_positions, rank_from_scores

Scorer = Callable[[TokenSequence], Sequence[float]]


def scorer_for(oracle: HardLabelOracle, ledger: QueryLedger) -> Scorer:
    """Billed probability scorer for an in-process victim.

    Raises:
        ScoreUnavailable: If the victim only reveals labels.
    """
    if not isinstance(oracle, ProbabilisticOracle):
        raise ScoreUnavailable(
            f"{type(oracle).__name__} exposes no class probabilities"
        )
    return lambda text: ledger.query_proba(oracle, text)


def deletion_rank(
    x: TokenSequence,
    y: Label,
    scorer: Scorer,
    stop_words: StopWordList,
    store: VectorStore,
) -> ImportanceRanking:
    """
    Importance of position i is P(y | x) - P(y | x without word i).

    Only attackable positions are scored, so deletions of stop words cost no
    queries.
    """
    positions = attackable_positions(x, stop_words, store)
    base = float(scorer(x)[y.id])
    scores = dict.fromkeys(range(len(x)), 0.0)
    for i in positions:
        if len(x) == 1:
            break
        reduced = TokenSequence(tokens=x.tokens[:i] + x.tokens[i + 1 :])
        scores[i] = base - float(scorer(reduced)[y.id])
    return rank_from_scores(x, scores, stop_words, store, RankingSource.DELETION)
