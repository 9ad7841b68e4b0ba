from enum import Enum
from typing import Any, Dict, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .config import RankingSource
from .text import Label, TokenSequence


class AttackStatus(Enum):
    """Terminal states of a single attack."""

    SUCCESS = "success"
    BUDGET_EXHAUSTED = "budget_exhausted"
    CANDIDATES_EXHAUSTED = "candidates_exhausted"
    SKIPPED_MISCLASSIFIED = "skipped_misclassified"


class AttackOutcome(BaseModel):
    """The record one attack leaves behind; the metrics are computed from these."""

    model_config = ConfigDict(frozen=True)

    sample_id: int = Field(default=0, ge=0)
    status: AttackStatus
    original: TokenSequence
    original_label: Label
    adversarial: Optional[TokenSequence] = None
    adversarial_label: Optional[Label] = None
    pert_rate: float = Field(default=0.0, ge=0.0, le=1.0)
    similarity: float = Field(default=1.0, ge=-1.0, le=1.0)
    queries_used: int = Field(ge=0)
    ranking_source: RankingSource = RankingSource.LIME

    @model_validator(mode="after")
    def _check_success_record(self) -> "AttackOutcome":
        if self.status == AttackStatus.SUCCESS:
            if self.adversarial is None or self.adversarial_label is None:
                raise ValueError("a successful outcome needs the adversarial text")
            if self.adversarial_label.same_class(self.original_label):
                raise ValueError("a successful outcome must change the label")
        return self

    @property
    def succeeded(self) -> bool:
        return self.status == AttackStatus.SUCCESS

    @property
    def skipped(self) -> bool:
        return self.status == AttackStatus.SKIPPED_MISCLASSIFIED

    def to_dict(self) -> Dict[str, Any]:
        """Flat JSON-ready view used by the report writer."""
        return {
            "sample_id": self.sample_id,
            "status": self.status.value,
            "original": self.original.text,
            "original_label": self.original_label.id,
            "adversarial": self.adversarial.text if self.adversarial else None,
            "adversarial_label": (
                self.adversarial_label.id if self.adversarial_label else None
            ),
            "pert_rate": self.pert_rate,
            "similarity": self.similarity,
            "queries_used": self.queries_used,
            "ranking_source": self.ranking_source.value,
        }
