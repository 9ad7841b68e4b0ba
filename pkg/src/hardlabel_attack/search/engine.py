"""
End-to-end hard-label attack on one sample: confirm the victim gets it right,
rank the words, then beam-search synonym substitutions until the label flips,
the budget runs out or nothing is left to try.
"""

import threading
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from wasabi import msg

from ..core.config import AttackConfig, RankingSource
from ..core.errors import BudgetExhausted, RankingExhausted
from ..core.logging_utils import preview, safe_log_user_data
from ..core.outcome import AttackOutcome, AttackStatus
from ..core.text import Label, TokenSequence, perturbation_rate
from ..embeddings.stopwords import StopWordList
from ..embeddings.vectors import CandidateSet, VectorStore, top_k_synonyms
from ..importance.deletion import deletion_rank, scorer_for
from ..importance.lime import lime_rank
from ..importance.ranking import ImportanceRanking, attackable_positions, random_rank
from ..similarity.providers import MeanEmbeddingSimilarity, SimilarityProvider
from ..victims.oracle import HardLabelOracle, QueryLedger, query
from .beam import BeamState, check_success, expand, sample_beam

# Independent random streams per attack, so e.g. the number of surrogate
# samples never shifts the beam sampler's draws.
_LIME_STREAM, _RANK_STREAM, _SEARCH_STREAM = 0, 1, 2


@dataclass
class AttackResources:
    """Everything an attack needs besides the victim and the config."""

    store: VectorStore
    stop_words: StopWordList
    similarity: Optional[SimilarityProvider] = None
    _candidate_cache: dict = field(default_factory=dict, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def __post_init__(self):
        if self.similarity is None:
            self.similarity = MeanEmbeddingSimilarity(self.store)

    def candidates(self, token: str, k: int) -> CandidateSet:
        """Cached top-k synonyms for a text token (looked up via store.resolve)."""
        key = (self.store.resolve(token), k)
        with self._lock:
            cached = self._candidate_cache.get(key)
        if cached is None:
            cached = top_k_synonyms(self.store, key[0], k)
            with self._lock:
                self._candidate_cache.setdefault(key, cached)
        return cached


def stream(config: AttackConfig, sample_id: int, kind: int) -> np.random.Generator:
    return np.random.default_rng([config.seed, sample_id, kind])


def _rank(
    x: TokenSequence,
    y: Label,
    oracle: HardLabelOracle,
    ledger: QueryLedger,
    config: AttackConfig,
    resources: AttackResources,
    sample_id: int,
) -> ImportanceRanking:
    if config.ranking == RankingSource.RANDOM:
        return random_rank(
            x,
            resources.stop_words,
            resources.store,
            stream(config, sample_id, _RANK_STREAM),
        )
    if config.ranking == RankingSource.DELETION:
        return deletion_rank(
            x,
            y,
            scorer_for(oracle, ledger),
            resources.stop_words,
            resources.store,
        )
    return lime_rank(
        x,
        y,
        oracle,
        ledger,
        config,
        resources.stop_words,
        resources.store,
        stream(config, sample_id, _LIME_STREAM),
    )


def beam_search(
    x: TokenSequence,
    y: Label,
    oracle: HardLabelOracle,
    ledger: QueryLedger,
    config: AttackConfig,
    ranking: ImportanceRanking,
    resources: AttackResources,
    rng: np.random.Generator,
) -> Optional[BeamState]:
    """
    Run the beam loop. Returns the flipping state, or None once every state is
    retired. Propagates BudgetExhausted.
    """
    candidates = {
        i: resources.candidates(x.tokens[i], config.synonym_k) for i in ranking.order
    }
    beam = [
        BeamState(text=x, next_rank_pos=0, similarity=1.0, substitutions=0, label=y)
    ]
    seen = {x.tokens}

    while beam:
        carried: list[BeamState] = []
        children: list[BeamState] = []
        for state in beam:
            try:
                grown = expand(
                    state,
                    ranking,
                    candidates,
                    resources.similarity,
                    config.pert_threshold,
                )
            except RankingExhausted:
                continue
            carried.append(state.advanced())
            for child in grown:
                if child.text.tokens in seen:
                    continue
                seen.add(child.text.tokens)
                children.append(child)

        if not carried:
            return None

        flipped = check_success(children, oracle, ledger, y)
        if flipped is not None:
            return flipped

        pool = [
            s
            for s in carried + children
            if s.can_grow(ranking, config.pert_threshold)
        ]
        beam = sample_beam(pool, config.beam_size, config.sampling_rule, rng)
    return None


def attack(
    x: TokenSequence,
    y: Label,
    oracle: HardLabelOracle,
    config: AttackConfig,
    resources: AttackResources,
    sample_id: int = 0,
) -> AttackOutcome:
    """
    Attack one sample under config.query_budget label queries.

    The first query confirms the victim predicts y; a mismatch ends the attack
    as SkippedMisclassified. Surrogate sampling and search share the rest of
    the budget.
    """
    ledger = QueryLedger(config.query_budget)

    def finish(status: AttackStatus, best: Optional[BeamState] = None) -> AttackOutcome:
        outcome = AttackOutcome(
            sample_id=sample_id,
            status=status,
            original=x,
            original_label=y,
            adversarial=best.text if best else None,
            adversarial_label=best.label if best else None,
            pert_rate=perturbation_rate(x, best.text) if best else 0.0,
            similarity=best.similarity if best else 1.0,
            queries_used=ledger.used,
            ranking_source=config.ranking,
        )
        msg.info(
            f"Sample {sample_id}: {status.value} after {ledger.used} queries"
        )
        if best is not None:
            safe_log_user_data(msg.text, f"  {preview(best.text.text)}")
        return outcome

    if not query(oracle, ledger, x).same_class(y):
        return finish(AttackStatus.SKIPPED_MISCLASSIFIED)

    if not attackable_positions(x, resources.stop_words, resources.store):
        msg.warn(f"Sample {sample_id}: no attackable word")
        return finish(AttackStatus.CANDIDATES_EXHAUSTED)

    try:
        ranking = _rank(x, y, oracle, ledger, config, resources, sample_id)
        if ledger.exhausted:
            return finish(AttackStatus.BUDGET_EXHAUSTED)
        best = beam_search(
            x,
            y,
            oracle,
            ledger,
            config,
            ranking,
            resources,
            stream(config, sample_id, _SEARCH_STREAM),
        )
    except BudgetExhausted:
        return finish(AttackStatus.BUDGET_EXHAUSTED)

    if best is None:
        return finish(AttackStatus.CANDIDATES_EXHAUSTED)
    return finish(AttackStatus.SUCCESS, best)
