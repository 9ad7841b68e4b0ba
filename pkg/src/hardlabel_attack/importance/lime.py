"""
Word importance from a kernel-weighted linear surrogate fit on masked copies
of the input.

Each neighborhood sample masks a random subset of positions, the victim labels
it, and a weighted ridge regression of "label unchanged" on the keep-mask
gives one coefficient per position. Large coefficients mark the words whose
removal flips the label.
"""

import math
from typing import Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from wasabi import msg

from ..core.config import AttackConfig, KernelDistance, RankingSource
from ..core.errors import SingularSystem, TooShort, ZeroVector
from ..core.text import Label, TokenSequence
from ..embeddings.stopwords import StopWordList
from ..embeddings.vectors import VectorStore
from ..victims.oracle import HardLabelOracle, QueryLedger, query
from .ranking import ImportanceRanking, rank_from_scores

_MIN_WEIGHT = float(np.finfo(float).tiny)


class NeighborhoodSample(BaseModel):
    model_config = ConfigDict(frozen=True)

    mask: tuple[int, ...]
    text: TokenSequence
    label: Optional[Label] = None
    target: Optional[float] = None

    @model_validator(mode="after")
    def _check_mask(self) -> "NeighborhoodSample":
        if len(self.mask) != len(self.text):
            raise ValueError("mask and text lengths differ")
        if set(self.mask) != {0, 1}:
            raise ValueError("mask needs at least one kept and one masked position")
        return self

    @property
    def labelled(self) -> bool:
        return self.target is not None


class SurrogateFit(BaseModel):
    model_config = ConfigDict(frozen=True)

    theta0: float
    theta: tuple[float, ...]
    weights: tuple[float, ...]
    kernel_width: float = Field(gt=0.0)
    ridge_lambda: float = Field(ge=0.0)

    @model_validator(mode="after")
    def _check_values(self) -> "SurrogateFit":
        if not all(math.isfinite(t) for t in (self.theta0, *self.theta)):
            raise ValueError("surrogate coefficients must be finite")
        if not all(0.0 < w <= 1.0 for w in self.weights):
            raise ValueError("kernel weights must lie in (0, 1]")
        return self


def neighborhood_from_masks(
    x: TokenSequence, masks: Sequence[Sequence[int]]
) -> list[NeighborhoodSample]:
    """Build (unlabelled) neighborhood samples for explicit keep-masks."""
    return [
        NeighborhoodSample(mask=tuple(int(v) for v in mask), text=x.with_mask(list(mask)))
        for mask in masks
    ]


def sample_neighborhood(
    x: TokenSequence, m: int, rng: np.random.Generator
) -> list[NeighborhoodSample]:
    """
    Draw m masks, each position kept independently with probability 0.5.

    A mask that keeps everything or nothing is redrawn.

    Raises:
        TooShort: If x has fewer than two tokens.
    """
    n = len(x)
    if n < 2:
        raise TooShort(f"cannot mask a {n}-token sequence")

    masks = []
    while len(masks) < m:
        mask = rng.integers(0, 2, size=n)
        kept = int(mask.sum())
        if 0 < kept < n:
            masks.append(mask.tolist())
    return neighborhood_from_masks(x, masks)


def cosine_binary(v1: Sequence[int], v2: Sequence[int]) -> float:
    a = np.asarray(v1, dtype=float)
    b = np.asarray(v2, dtype=float)
    if a.shape != b.shape:
        raise ValueError("vectors differ in length")
    norm_a, norm_b = float(np.linalg.norm(a)), float(np.linalg.norm(b))
    if norm_a == 0.0 or norm_b == 0.0:
        raise ZeroVector("cosine is undefined for an all-zero mask")
    return float(np.dot(a, b)) / (norm_a * norm_b)


def kernel_weight(d: float, sigma: float) -> float:
    if sigma <= 0:
        raise ValueError("kernel width must be positive")
    # Floored so that narrow kernels never produce a zero weight.
    return max(math.exp(-(d * d) / (sigma * sigma)), _MIN_WEIGHT)


def solve_weighted_ridge(
    design: np.ndarray,
    targets: np.ndarray,
    weights: np.ndarray,
    ridge_lambda: float,
) -> tuple[float, np.ndarray]:
    """
    Minimise sum_i w_i (t_i - b0 - b . z_i)^2 + lambda * |b|^2 in closed form.

    The intercept b0 is not penalised. Returns (b0, b).

    Raises:
        SingularSystem: If the normal equations have no unique solution
            (only possible with lambda = 0).
    """
    design = np.asarray(design, dtype=float)
    m, n = design.shape
    z = np.hstack([np.ones((m, 1)), design])
    w = np.asarray(weights, dtype=float)
    t = np.asarray(targets, dtype=float)

    gram = z.T @ (w[:, None] * z)
    penalty = np.full(n + 1, ridge_lambda)
    penalty[0] = 0.0
    gram[np.diag_indices_from(gram)] += penalty
    rhs = z.T @ (w * t)

    try:
        solution = np.linalg.solve(gram, rhs)
    except np.linalg.LinAlgError as e:
        raise SingularSystem(f"normal equations are singular: {e}")
    if not np.all(np.isfinite(solution)):
        raise SingularSystem("normal equations gave a non-finite solution")
    return float(solution[0]), solution[1:]


def fit_surrogate(
    x: TokenSequence,
    samples: Sequence[NeighborhoodSample],
    sigma: float,
    ridge_lambda: float,
    distance: KernelDistance = KernelDistance.COSINE,
) -> SurrogateFit:
    """Weighted ridge fit of the keep-label indicator on the samples' keep-masks."""
    if not samples:
        raise ValueError("at least one labelled sample is required")
    if any(not s.labelled for s in samples):
        raise ValueError("every neighborhood sample must be labelled first")

    benign = [1] * len(x)
    weights = []
    for sample in samples:
        d = cosine_binary(sample.mask, benign)
        if distance == KernelDistance.ONE_MINUS_COSINE:
            d = 1.0 - d
        weights.append(kernel_weight(d, sigma))

    design = np.asarray([s.mask for s in samples], dtype=float)
    targets = np.asarray([s.target for s in samples], dtype=float)
    theta0, theta = solve_weighted_ridge(
        design, targets, np.asarray(weights), ridge_lambda
    )
    return SurrogateFit(
        theta0=theta0,
        theta=tuple(float(v) for v in theta),
        weights=tuple(weights),
        kernel_width=sigma,
        ridge_lambda=ridge_lambda,
    )


def rank_words(
    x: TokenSequence,
    fit: SurrogateFit,
    stop_words: StopWordList,
    store: VectorStore,
) -> ImportanceRanking:
    """Attackable positions by descending surrogate coefficient."""
    if len(fit.theta) != len(x):
        raise ValueError(f"{len(fit.theta)} coefficients for {len(x)} tokens")
    scores = dict(enumerate(fit.theta))
    return rank_from_scores(x, scores, stop_words, store, RankingSource.LIME)


def label_neighborhood(
    samples: Sequence[NeighborhoodSample],
    oracle: HardLabelOracle,
    ledger: QueryLedger,
    y: Label,
) -> list[NeighborhoodSample]:
    """Query the victim once per sample; target is 1 iff the label is unchanged."""
    labelled = []
    for sample in samples:
        label = query(oracle, ledger, sample.text)
        target = 1.0 if label.same_class(y) else 0.0
        labelled.append(sample.model_copy(update={"label": label, "target": target}))
    return labelled


def lime_rank(
    x: TokenSequence,
    y: Label,
    oracle: HardLabelOracle,
    ledger: QueryLedger,
    config: AttackConfig,
    stop_words: StopWordList,
    store: VectorStore,
    rng: np.random.Generator,
) -> ImportanceRanking:
    """
    Sample, label and fit a neighborhood, then rank the attackable words.

    The labelled sample count is config.lime_queries_for(n). Sequences too
    short to mask, runs with no query left for sampling and fits whose
    normal equations cannot be solved fall back to all-zero scores (plain
    position order).
    """
    m = config.lime_queries_for(len(x))
    if len(x) < 2 or m < 1:
        msg.warn(f"Surrogate skipped for {len(x)} tokens with {m} sample queries")
        return _position_order(x, stop_words, store)

    samples = sample_neighborhood(x, m, rng)
    samples = label_neighborhood(samples, oracle, ledger, y)
    try:
        fit = fit_surrogate(
            x, samples, config.kernel_width, config.ridge_lambda, config.kernel_distance
        )
    except SingularSystem as e:
        msg.warn(f"Surrogate fit failed, using position order: {e}")
        return _position_order(x, stop_words, store)
    return rank_words(x, fit, stop_words, store)


def _position_order(
    x: TokenSequence, stop_words: StopWordList, store: VectorStore
) -> ImportanceRanking:
    scores = dict.fromkeys(range(len(x)), 0.0)
    return rank_from_scores(x, scores, stop_words, store, RankingSource.LIME)
