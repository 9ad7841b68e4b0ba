"""
Exception hierarchy shared by every stage of an attack run.
"""

from typing import Optional


class AttackError(ValueError):
    """Base class for all errors raised by the attack engine and its plumbing."""


class EmptyText(AttackError):
    """Raised when tokenization yields no tokens."""


class LengthMismatch(AttackError):
    """Raised when two token sequences that must align have different lengths."""


class BudgetExhausted(AttackError):
    """Raised when a query would exceed the per-attack budget.

    `best` carries the best label-flipping state observed before the budget
    ran out, when there is one.
    """

    def __init__(self, message: str = "query budget exhausted", best=None):
        super().__init__(message)
        self.best = best


class DegenerateCorpus(AttackError):
    """Raised when a training corpus leaves a class without documents."""


class RemoteVictimError(AttackError):
    """Base class for transport and protocol failures of HTTP backends."""


class RemoteTimeout(RemoteVictimError):
    pass


class MalformedResponse(RemoteVictimError):
    pass


class ServerError(RemoteVictimError):
    def __init__(self, status: int, message: Optional[str] = None):
        super().__init__(message or f"server returned HTTP {status}")
        self.status = status


class VectorParseError(AttackError):
    def __init__(self, line_no: int, message: str = "unparseable vector row"):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class DimensionMismatch(AttackError):
    def __init__(self, line_no: int, expected: int, found: int):
        super().__init__(
            f"line {line_no}: expected {expected} components, found {found}"
        )
        self.line_no = line_no


class UnknownWord(AttackError):
    """Raised when a word has no vector in the store."""


class TooShort(AttackError):
    """Raised when a sequence is too short to build a masked neighborhood."""


class ZeroVector(AttackError):
    pass


class SingularSystem(AttackError):
    pass


class NoAttackablePositions(AttackError):
    """Raised when every position is a stop word or missing from the store."""


class ScoreUnavailable(AttackError):
    """Raised when a ranking needs class probabilities the victim cannot give."""


class NoCoverage(AttackError):
    """Raised when a sequence has no in-vocabulary token to embed."""


class EmptyRun(AttackError):
    """Raised when metrics are requested over zero attacked samples."""


class ReportWriteError(AttackError):
    pass


class DatasetFormatError(AttackError):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class RankingExhausted(AttackError):
    """Raised when a beam state has no ranked position left to substitute."""
