from typing import Iterable, Optional

from pydantic import BaseModel, ConfigDict, field_validator

from ..core.datasets import bundled_path


class StopWordList(BaseModel):
    """Words never chosen for substitution. Membership ignores case."""

    model_config = ConfigDict(frozen=True)

    words: frozenset[str]

    @field_validator("words", mode="before")
    @classmethod
    def _lowercase(cls, value: Iterable[str]) -> frozenset[str]:
        return frozenset(word.strip().lower() for word in value if word.strip())

    def __contains__(self, word: str) -> bool:
        return word.lower() in self.words

    def __len__(self) -> int:
        return len(self.words)


def load_stop_words(path: Optional[str] = None) -> StopWordList:
    """Read one word per line; `#` starts a comment. Defaults to the bundled list."""
    path = path or bundled_path("stopwords.txt")
    with open(path, "r", encoding="utf-8") as f:
        words = [line.split("#", 1)[0] for line in f]
    return StopWordList(words=words)


def is_stop_word(stop_words: StopWordList, word: str) -> bool:
    return word in stop_words
