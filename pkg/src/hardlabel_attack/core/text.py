import string
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .errors import EmptyText, LengthMismatch

MASK_TOKEN = "[MASK]"

_PUNCTUATION = frozenset(string.punctuation)


class Label(BaseModel):
    """A class index returned by a victim, optionally with a display name."""

    model_config = ConfigDict(frozen=True)

    id: int = Field(ge=0)
    name: Optional[str] = None

    def same_class(self, other: "Label") -> bool:
        # Names are cosmetic; two labels agree when their ids do.
        return self.id == other.id


class TokenSequence(BaseModel):
    """A tokenized sample, optionally tied back to the benign sample it came from."""

    model_config = ConfigDict(frozen=True)

    tokens: tuple[str, ...]
    original: Optional["TokenSequence"] = None

    @model_validator(mode="after")
    def _check_alignment(self) -> "TokenSequence":
        if len(self.tokens) < 1:
            raise ValueError("a token sequence needs at least one token")
        if self.original is not None and len(self.original.tokens) != len(
            self.tokens
        ):
            raise ValueError(
                f"length {len(self.tokens)} does not match original length "
                f"{len(self.original.tokens)}"
            )
        return self

    def __len__(self) -> int:
        return len(self.tokens)

    @property
    def benign(self) -> "TokenSequence":
        """The unperturbed sequence this one descends from (itself if none)."""
        return self.original if self.original is not None else self

    @property
    def substituted_positions(self) -> frozenset[int]:
        if self.original is None:
            return frozenset()
        return frozenset(
            i
            for i, (token, reference) in enumerate(
                zip(self.tokens, self.original.tokens)
            )
            if token != reference
        )

    @property
    def text(self) -> str:
        return " ".join(self.tokens)

    def with_substitution(self, position: int, word: str) -> "TokenSequence":
        """Return a copy with `word` at `position`, linked to the benign sample."""
        tokens = list(self.tokens)
        tokens[position] = word
        return TokenSequence(tokens=tuple(tokens), original=self.benign)

    def with_mask(self, keep: list[int]) -> "TokenSequence":
        """Replace every position whose `keep` flag is 0 with the mask token."""
        if len(keep) != len(self.tokens):
            raise LengthMismatch(
                f"mask of length {len(keep)} for {len(self.tokens)} tokens"
            )
        tokens = tuple(
            token if flag else MASK_TOKEN for token, flag in zip(self.tokens, keep)
        )
        return TokenSequence(tokens=tokens, original=self.benign)


def tokenize(text: str) -> TokenSequence:
    """Split on whitespace, then peel boundary ASCII punctuation into own tokens.

    Case is preserved and punctuation inside a word ("don't") stays attached.
    """
    tokens: list[str] = []
    for chunk in text.split():
        start, end = 0, len(chunk)
        while start < end and chunk[start] in _PUNCTUATION:
            start += 1
        while end > start and chunk[end - 1] in _PUNCTUATION:
            end -= 1
        tokens.extend(chunk[:start])
        if start < end:
            tokens.append(chunk[start:end])
        tokens.extend(chunk[end:])

    if not tokens:
        raise EmptyText("text contains no tokens")
    return TokenSequence(tokens=tuple(tokens))


def perturbation_rate(x: TokenSequence, x_adv: TokenSequence) -> float:
    """Fraction of aligned positions whose tokens differ (exact, case-sensitive)."""
    if len(x) != len(x_adv):
        raise LengthMismatch(f"cannot compare {len(x)} tokens with {len(x_adv)}")
    changed = sum(1 for a, b in zip(x.tokens, x_adv.tokens) if a != b)
    return changed / len(x)
