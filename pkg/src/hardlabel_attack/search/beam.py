"""
Beam-search building blocks: expanding a state at its next ranked word,
checking children against the victim, and refilling the beam.

Lists of states are kept in generation order and only ever sorted stably, so
similarity ties always resolve to the earliest-generated state.
"""

from dataclasses import dataclass, replace
from typing import Mapping, Optional, Sequence

import numpy as np

from ..core.config import SamplingRule
from ..core.errors import BudgetExhausted, RankingExhausted
from ..core.text import Label, TokenSequence
from ..embeddings.vectors import CandidateSet
from ..importance.ranking import ImportanceRanking
from ..similarity.providers import SimilarityProvider
from ..victims.oracle import HardLabelOracle, QueryLedger, query


@dataclass
class BeamState:
    """A candidate adversarial text and how far down the ranking it has got."""

    text: TokenSequence
    next_rank_pos: int
    similarity: float
    substitutions: int
    label: Optional[Label] = None

    def advanced(self) -> "BeamState":
        """The same text, skipping the position it was just expanded at."""
        return replace(self, next_rank_pos=self.next_rank_pos + 1)

    def can_grow(self, ranking: ImportanceRanking, pert_threshold: float) -> bool:
        """True if one more substitution is allowed and a ranked position is left."""
        n = len(self.text)
        return (
            self.next_rank_pos < len(ranking.order)
            and (self.substitutions + 1) / n < pert_threshold
        )


def expand(
    state: BeamState,
    ranking: ImportanceRanking,
    candidates: Mapping[int, CandidateSet],
    similarity: SimilarityProvider,
    pert_threshold: float,
) -> list[BeamState]:
    """
    One child per synonym of the word at the state's next ranked position.

    Children whose perturbation rate would reach the threshold are dropped.

    Raises:
        RankingExhausted: If every ranked position has been consumed.
    """
    if state.next_rank_pos >= len(ranking.order):
        raise RankingExhausted("no ranked position left")

    position = ranking.order[state.next_rank_pos]
    n = len(state.text)
    if (state.substitutions + 1) / n >= pert_threshold:
        return []

    benign = state.text.benign
    current = state.text.tokens[position]
    children = []
    for word in candidates[position].words:
        if word == current:
            continue
        text = state.text.with_substitution(position, word)
        children.append(
            BeamState(
                text=text,
                next_rank_pos=state.next_rank_pos + 1,
                similarity=similarity.similarity(benign, text),
                substitutions=state.substitutions + 1,
            )
        )
    return children


def _by_similarity(states: Sequence[BeamState]) -> list[BeamState]:
    return sorted(states, key=lambda s: -s.similarity)


def check_success(
    children: Sequence[BeamState],
    oracle: HardLabelOracle,
    ledger: QueryLedger,
    y_true: Label,
) -> Optional[BeamState]:
    """
    Label children from most to least similar and return the most similar one
    whose label differs from y_true.

    Querying stops at the first flip: every child after it is at most as
    similar, so it cannot be the answer. Labels are stored on the states.

    Raises:
        BudgetExhausted: If the budget runs out before any flip is seen.
    """
    for child in _by_similarity(children):
        child.label = query(oracle, ledger, child.text)
        if not child.label.same_class(y_true):
            return child
    return None


def sample_beam(
    states: Sequence[BeamState],
    beam_size: int,
    rule: SamplingRule,
    rng: np.random.Generator,
) -> list[BeamState]:
    """
    Pick the next beam from the non-flipping states of a round.

    Stratified takes floor(b/3) most similar, floor(b/3) least similar and
    floor(b/3) drawn at random from the rest. When fewer states than that
    exist all of them pass. For b < 3 it keeps the b most similar. The other
    rules take b states by their single criterion. Output is ordered by
    descending similarity.
    """
    ordered = _by_similarity(states)
    total = len(ordered)

    if rule == SamplingRule.TOP_SIM:
        return ordered[:beam_size]
    if rule == SamplingRule.BOTTOM_SIM:
        return ordered[max(0, total - beam_size) :]
    if rule == SamplingRule.UNIFORM_RANDOM:
        if total <= beam_size:
            return ordered
        picks = np.sort(rng.choice(total, size=beam_size, replace=False))
        return [ordered[i] for i in picks]

    third = beam_size // 3
    if third == 0:
        return ordered[:beam_size]
    if total <= 3 * third:
        return ordered

    top = ordered[:third]
    bottom = ordered[total - third :]
    middle = ordered[third : total - third]
    picks = np.sort(rng.choice(len(middle), size=third, replace=False))
    return top + [middle[i] for i in picks] + bottom
