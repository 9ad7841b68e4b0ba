"""
The black-box victim interface and the per-attack query accounting around it.

Only label queries routed through a `QueryLedger` count against the budget.
"""

from dataclasses import dataclass
from typing import Protocol, Sequence, runtime_checkable

from ..core.errors import BudgetExhausted
from ..core.text import Label, TokenSequence


@runtime_checkable
class HardLabelOracle(Protocol):
    """A victim that reveals nothing but its predicted class."""

    num_classes: int

    def predict(self, text: TokenSequence) -> Label: ...


@runtime_checkable
class ProbabilisticOracle(HardLabelOracle, Protocol):
    """An in-process victim that can also expose class probabilities."""

    def predict_proba(self, text: TokenSequence) -> Sequence[float]: ...


@runtime_checkable
class MeteredOracle(HardLabelOracle, Protocol):
    """A victim that reports its own billable attempts (e.g. retried HTTP calls)."""

    def predict_metered(self, text: TokenSequence, ledger: "QueryLedger") -> Label: ...


@dataclass
class QueryLedger:
    """Budget and usage counter for one attack. Not shared between attacks."""

    budget: int
    used: int = 0

    def __post_init__(self):
        if self.budget < 1:
            raise ValueError("query budget must be positive")

    @property
    def remaining(self) -> int:
        return self.budget - self.used

    @property
    def exhausted(self) -> bool:
        return self.used >= self.budget

    def ensure_available(self) -> None:
        if self.used >= self.budget:
            raise BudgetExhausted(f"all {self.budget} queries used")

    def record(self) -> None:
        """Count one billable call; never lets usage pass the budget."""
        self.ensure_available()
        self.used += 1

    def query(self, oracle: HardLabelOracle, text: TokenSequence) -> Label:
        if isinstance(oracle, MeteredOracle):
            self.ensure_available()
            return oracle.predict_metered(text, self)
        self.record()
        return oracle.predict(text)

    def query_proba(
        self, oracle: ProbabilisticOracle, text: TokenSequence
    ) -> Sequence[float]:
        """Score query used by score-based baselines; billed like a label query."""
        self.record()
        return oracle.predict_proba(text)


def query(oracle: HardLabelOracle, ledger: QueryLedger, text: TokenSequence) -> Label:
    """Ask the victim for a label, charging exactly one query to the ledger."""
    label = ledger.query(oracle, text)
    if label.id >= oracle.num_classes:
        raise ValueError(
            f"victim returned class {label.id} but declares {oracle.num_classes}"
        )
    return label
