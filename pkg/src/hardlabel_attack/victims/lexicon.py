import json
from typing import ClassVar, Optional

from pydantic import BaseModel, ConfigDict, field_validator

from ..core.text import Label, TokenSequence


class LexiconVictim(BaseModel):
    """Keyword-sum classifier: class 1 iff the summed weights of present words exceed the threshold.

    Words are matched case-insensitively and each distinct word counts once.
    """

    model_config = ConfigDict(frozen=True)

    num_classes: ClassVar[int] = 2

    keyword_weights: dict[str, float]
    threshold: float = 0.0
    label_names: Optional[tuple[str, str]] = None

    @field_validator("keyword_weights")
    @classmethod
    def _lowercase_keys(cls, value: dict[str, float]) -> dict[str, float]:
        return {word.lower(): weight for word, weight in value.items()}

    def score(self, text: TokenSequence) -> float:
        present = {token.lower() for token in text.tokens}
        return sum(self.keyword_weights.get(word, 0.0) for word in sorted(present))

    def predict(self, text: TokenSequence) -> Label:
        class_id = 1 if self.score(text) > self.threshold else 0
        name = self.label_names[class_id] if self.label_names else None
        return Label(id=class_id, name=name)

    @classmethod
    def load(cls, path: str) -> "LexiconVictim":
        with open(path, "r", encoding="utf-8") as f:
            return cls.model_validate(json.load(f))

    def save(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as f:
            f.write(self.model_dump_json(indent=2))
