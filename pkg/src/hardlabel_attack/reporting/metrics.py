"""
Aggregate metrics over a finished batch of attacks.
"""

from datetime import datetime, timezone
from typing import Optional, Sequence

import numpy as np
from pydantic import BaseModel, Field

from ..core.config import AttackConfig
from ..core.errors import EmptyRun
from ..core.outcome import AttackOutcome


def _attacked(
    outcomes: Sequence[AttackOutcome], include_skipped: bool
) -> list[AttackOutcome]:
    if include_skipped:
        return list(outcomes)
    return [o for o in outcomes if not o.skipped]


def attack_success_rate(
    outcomes: Sequence[AttackOutcome], include_skipped: bool = False
) -> float:
    """
    Successes over attacked samples. Samples the victim already got wrong are
    left out of the denominator unless include_skipped is set.

    Raises:
        EmptyRun: If the denominator is zero.
    """
    attacked = _attacked(outcomes, include_skipped)
    if not attacked:
        raise EmptyRun("no attacked samples to compute a success rate over")
    return sum(o.succeeded for o in attacked) / len(attacked)


def _mean(values: list[float]) -> Optional[float]:
    return float(np.mean(values)) if values else None


class RunReport(BaseModel):
    """Outcomes of one run, the configuration that produced them, and aggregates."""

    outcomes: list[AttackOutcome]
    config: AttackConfig
    asr: float = Field(ge=0.0, le=1.0)
    mean_pert: Optional[float] = None
    mean_sim: Optional[float] = None
    mean_queries: Optional[float] = None
    skipped: int = Field(ge=0)
    successes: int = Field(ge=0)
    attacked: int = Field(ge=0)
    created_at: str = Field(
        default_factory=lambda: datetime.now(timezone.utc).isoformat()
    )

    def aggregates(self) -> dict:
        return {
            "asr": self.asr,
            "mean_pert": self.mean_pert,
            "mean_sim": self.mean_sim,
            "mean_queries": self.mean_queries,
            "attacked": self.attacked,
            "successes": self.successes,
            "skipped": self.skipped,
        }

    def summary_line(self) -> str:
        """One-line human summary; similarity printed as a percentage."""
        pert = "n/a" if self.mean_pert is None else f"{self.mean_pert * 100:.2f}%"
        sim = "n/a" if self.mean_sim is None else f"{self.mean_sim * 100:.2f}"
        queries = "n/a" if self.mean_queries is None else f"{self.mean_queries:.1f}"
        return (
            f"ASR {self.asr * 100:.2f}% ({self.successes}/{self.attacked}) | "
            f"Pert {pert} | Sim {sim} | Query {queries} | skipped {self.skipped}"
        )


def build_report(outcomes: Sequence[AttackOutcome], config: AttackConfig) -> RunReport:
    """
    Aggregate outcomes into a RunReport.

    A run where every sample was skipped gets asr 0 rather than failing, so
    its report can still be written.
    """
    attacked = _attacked(outcomes, config.asr_includes_skipped)
    successes = [o for o in outcomes if o.succeeded]
    asr = (
        attack_success_rate(outcomes, config.asr_includes_skipped) if attacked else 0.0
    )
    return RunReport(
        outcomes=list(outcomes),
        config=config,
        asr=asr,
        mean_pert=_mean([o.pert_rate for o in successes]),
        mean_sim=_mean([o.similarity for o in successes]),
        mean_queries=_mean([float(o.queries_used) for o in attacked]),
        skipped=sum(o.skipped for o in outcomes),
        successes=len(successes),
        attacked=len(attacked),
    )
