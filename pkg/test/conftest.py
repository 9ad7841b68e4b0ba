import sys
from pathlib import Path
# Add the src directory to the Python path for all tests
sys.path.insert(0, str(Path(__file__).parent.parent / 'src'))

import numpy as np
import pytest

from hardlabel_attack.core.text import Label, TokenSequence
from hardlabel_attack.embeddings.stopwords import StopWordList, load_stop_words
from hardlabel_attack.embeddings.vectors import VectorStore
from hardlabel_attack.search.engine import AttackResources
from hardlabel_attack.victims.lexicon import LexiconVictim


class CountingOracle:
    """Wraps a victim and counts every call that reaches it."""

    def __init__(self, victim):
        self.victim = victim
        self.num_classes = victim.num_classes
        self.calls = 0

    def predict(self, text: TokenSequence) -> Label:
        self.calls += 1
        return self.victim.predict(text)


class CountingSimilarity:
    """Wraps a similarity provider and counts its calls."""

    def __init__(self, provider):
        self.provider = provider
        self.calls = 0

    def similarity(self, a: TokenSequence, b: TokenSequence) -> float:
        self.calls += 1
        return self.provider.similarity(a, b)


def seq(*tokens: str) -> TokenSequence:
    return TokenSequence(tokens=tuple(tokens))


@pytest.fixture
def stop_words():
    """Fixture providing the bundled English stop-word list."""
    return load_stop_words()


@pytest.fixture
def empty_stop_words():
    """Fixture providing a stop-word list that filters nothing."""
    return StopWordList(words=[])


@pytest.fixture
def sentiment_store():
    """Fixture providing a small store with a positive, a negative and a neutral cluster."""
    return VectorStore.from_mapping(
        {
            "good": [1.0, 0.1, 0.0],
            "great": [0.95, 0.15, 0.0],
            "fine": [0.9, 0.3, 0.0],
            "bad": [-1.0, 0.1, 0.0],
            "awful": [-0.95, 0.15, 0.0],
            "poor": [-0.9, 0.3, 0.0],
            "film": [0.0, 0.1, 1.0],
            "movie": [0.0, 0.15, 0.95],
            "plot": [0.1, 0.1, 0.9],
            "day": [0.05, 0.2, 0.8],
        }
    )


@pytest.fixture
def bad_word_victim():
    """Fixture providing a victim that answers class 0 exactly when "bad" is present."""
    return LexiconVictim(keyword_weights={"bad": -1.0}, threshold=-0.5)


@pytest.fixture
def sentiment_resources(sentiment_store, empty_stop_words):
    """Fixture providing attack resources over the sentiment store."""
    return AttackResources(store=sentiment_store, stop_words=empty_stop_words)


@pytest.fixture
def rng():
    """Fixture providing a seeded random generator."""
    return np.random.default_rng(1234)
