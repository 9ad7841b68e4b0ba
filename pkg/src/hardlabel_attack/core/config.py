from enum import Enum
from typing import Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator


class RankingSource(Enum):
    """Where the word attack order comes from."""

    LIME = "lime"
    RANDOM = "random"
    DELETION = "deletion"


class SamplingRule(Enum):
    """How the beam is refilled from the non-flipping candidates of a round."""

    STRATIFIED = "stratified"
    TOP_SIM = "top"
    BOTTOM_SIM = "bottom"
    UNIFORM_RANDOM = "random"


class KernelDistance(Enum):
    # COSINE feeds the raw mask cosine into the kernel, ONE_MINUS_COSINE its complement.
    COSINE = "cosine"
    ONE_MINUS_COSINE = "one_minus_cosine"


class AttackConfig(BaseModel):
    """Effective configuration of one attack run. Validated once, then frozen."""

    model_config = ConfigDict(frozen=True)

    query_budget: int = Field(default=100, ge=1)
    pert_threshold: float = Field(default=0.10, gt=0.0, le=1.0)
    beam_size: int = Field(default=10, ge=1)
    synonym_k: int = Field(default=50, ge=1)
    kernel_width: float = Field(default=25.0, gt=0.0)
    ridge_lambda: float = Field(default=1e-3, gt=0.0)
    lime_query_cap: Union[int, Literal["auto"]] = "auto"
    neighborhood_size: Optional[int] = Field(default=None, ge=1)
    kernel_distance: KernelDistance = KernelDistance.COSINE
    ranking: RankingSource = RankingSource.LIME
    sampling_rule: SamplingRule = SamplingRule.STRATIFIED
    asr_includes_skipped: bool = False
    seed: int = Field(default=0, ge=0, lt=2**64)

    @model_validator(mode="after")
    def _check_lime_cap(self) -> "AttackConfig":
        if self.lime_query_cap != "auto":
            if self.lime_query_cap < 1:
                raise ValueError("lime_query_cap must be positive or 'auto'")
            if self.lime_query_cap > self.query_budget:
                raise ValueError(
                    f"lime_query_cap {self.lime_query_cap} exceeds query_budget "
                    f"{self.query_budget}"
                )
        return self

    def lime_queries_for(self, n_tokens: int) -> int:
        """Number of neighborhood samples that get labeled for an n-token input."""
        wanted = self.neighborhood_size or n_tokens
        if self.lime_query_cap == "auto":
            return min(wanted, self.query_budget // 2)
        return min(wanted, self.lime_query_cap)

    def to_dict(self) -> dict:
        return self.model_dump(mode="json")
