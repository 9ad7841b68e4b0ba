import numpy as np
import pytest
from pydantic import ValidationError

from hardlabel_attack.core.errors import DimensionMismatch, UnknownWord, VectorParseError
from hardlabel_attack.embeddings.stopwords import (
    StopWordList,
    is_stop_word,
    load_stop_words,
)
from hardlabel_attack.embeddings.vectors import (
    CandidateSet,
    VectorStore,
    load_vectors,
    save_vectors,
    top_k_synonyms,
)


def _write(tmp_path, content, name="vectors.txt"):
    path = tmp_path / name
    path.write_text(content, encoding="utf-8")
    return str(path)


@pytest.fixture
def abcd_store():
    """Fixture providing the four-word store from the synonym example."""
    return VectorStore.from_mapping(
        {"a": [1.0, 0.0], "b": [0.9, 0.1], "c": [0.0, 1.0], "d": [-1.0, 0.0]}
    )


class TestLoadVectors:
    """Test suite for load_vectors and save_vectors."""

    def test_basic_file(self, tmp_path):
        """Test a two-row file without header."""
        store = load_vectors(_write(tmp_path, "good 1 0\nbad -1 0\n"))

        assert store.dim == 2
        assert len(store) == 2
        assert list(store["bad"]) == [-1.0, 0.0]

    def test_dimension_mismatch(self, tmp_path):
        """Test that a short row reports its line number."""
        with pytest.raises(DimensionMismatch) as e:
            load_vectors(_write(tmp_path, "good 1 0\nbad -1\n"))
        assert e.value.line_no == 2

    def test_header_skipped(self, tmp_path):
        """Test that a count/dim header gives the same store."""
        plain = load_vectors(_write(tmp_path, "good 1 0\nbad -1 0\n", "a.txt"))
        with_header = load_vectors(_write(tmp_path, "2 2\ngood 1 0\nbad -1 0\n", "b.txt"))

        assert with_header.index_to_key == plain.index_to_key
        assert np.array_equal(with_header.vectors, plain.vectors)

    def test_non_numeric_component(self, tmp_path):
        """Test that an unparseable component raises a parse error."""
        with pytest.raises(VectorParseError) as e:
            load_vectors(_write(tmp_path, "good 1 0\nbad x 0\n"))
        assert e.value.line_no == 2

    def test_row_without_components(self, tmp_path):
        """Test that a bare word raises a parse error."""
        with pytest.raises(VectorParseError):
            load_vectors(_write(tmp_path, "good 1 0\nbad\n"))

    def test_duplicates_keep_first(self, tmp_path):
        """Test that a repeated word keeps its first vector."""
        store = load_vectors(_write(tmp_path, "good 1 0\ngood 5 5\nbad -1 0\n"))

        assert len(store) == 2
        assert list(store["good"]) == [1.0, 0.0]

    def test_save_load_fixed_point(self, tmp_path):
        """Test that saving and reloading reproduces the store exactly."""
        rng = np.random.default_rng(0)
        words = [f"w{i}" for i in range(50)]
        store = VectorStore(words, rng.normal(size=(50, 7)))

        first = str(tmp_path / "first.txt")
        second = str(tmp_path / "second.txt")
        save_vectors(store, first)
        reloaded = load_vectors(first)
        save_vectors(reloaded, second, header=True)
        again = load_vectors(second)

        assert again.index_to_key == store.index_to_key
        assert np.array_equal(again.vectors, store.vectors)


class TestVectorStore:
    """Test suite for VectorStore invariants."""

    def test_rejects_nan(self):
        """Test that non-finite components are rejected."""
        with pytest.raises(ValueError):
            VectorStore(["a"], np.array([[np.nan, 1.0]]))

    def test_read_only(self, abcd_store):
        """Test that stored vectors cannot be modified."""
        with pytest.raises(ValueError):
            abcd_store.vectors[0, 0] = 5.0

    def test_unknown_word(self, abcd_store):
        """Test that indexing a missing word raises UnknownWord."""
        with pytest.raises(UnknownWord):
            abcd_store["zzz"]

    def test_resolve(self):
        """Test lookup as written first, then lowercased."""
        store = VectorStore.from_mapping({"good": [1.0], "Paris": [2.0]})

        assert store.resolve("Good") == "good"
        assert store.resolve("Paris") == "Paris"
        assert store.resolve("paris") is None


class TestTopKSynonyms:
    """Test suite for top_k_synonyms."""

    def test_example(self, abcd_store):
        """Test the brute-force example: a's two nearest are b and c."""
        assert top_k_synonyms(abcd_store, "a", 2).words == ["b", "c"]

    def test_truncated_to_available(self, abcd_store):
        """Test that k larger than the store returns every other word."""
        result = top_k_synonyms(abcd_store, "a", 10)
        assert result.words == ["b", "c", "d"]
        assert result.candidates[-1][1] == pytest.approx(-1.0)

    def test_unknown_word(self, abcd_store):
        """Test that a missing word raises UnknownWord."""
        with pytest.raises(UnknownWord):
            top_k_synonyms(abcd_store, "zzz", 2)

    def test_ties_broken_lexicographically(self):
        """Test that equal cosines are ordered by word."""
        store = VectorStore.from_mapping(
            {"w": [1.0, 0.0], "z": [0.0, 1.0], "y": [0.0, 2.0], "x": [-1.0, 0.0]}
        )
        assert top_k_synonyms(store, "w", 2).words == ["y", "z"]

    def test_matches_brute_force(self):
        """Test agreement with a direct scan on a random store."""
        rng = np.random.default_rng(11)
        words = [f"word{i:04d}" for i in range(2000)]
        store = VectorStore(words, rng.normal(size=(2000, 12)))

        for word in rng.choice(words, size=20, replace=False):
            word = str(word)
            u = store[word]
            scored = []
            for other in words:
                if other == word:
                    continue
                v = store[other]
                scored.append(
                    (-float(np.dot(u, v) / (np.linalg.norm(u) * np.linalg.norm(v))), other)
                )
            expected = [w for _, w in sorted(scored)[:25]]

            result = top_k_synonyms(store, word, 25)
            assert result.words == expected
            assert word not in result.words
            assert len(result) == 25

    def test_candidate_set_invariants(self):
        """Test that unordered candidates or the word itself are rejected."""
        with pytest.raises(ValidationError):
            CandidateSet(word="a", candidates=(("b", 0.1), ("c", 0.5)))
        with pytest.raises(ValidationError):
            CandidateSet(word="a", candidates=(("a", 1.0),))


class TestStopWords:
    """Test suite for the stop-word list."""

    def test_canonical_stop_word(self, stop_words):
        """Test that "the" is a stop word."""
        assert is_stop_word(stop_words, "the")

    def test_case_insensitive(self, stop_words):
        """Test that "The" is a stop word too."""
        assert is_stop_word(stop_words, "The")

    def test_content_word(self, stop_words):
        """Test that "filmmaker" is not a stop word."""
        assert not is_stop_word(stop_words, "filmmaker")

    def test_bundled_list_size(self, stop_words):
        """Test that the bundled list is a full English list."""
        assert len(stop_words) >= 120

    def test_custom_file_with_comments(self, tmp_path):
        """Test that comments and blank lines are ignored and words lowercased."""
        path = _write(tmp_path, "# header\nFoo\n\nbar  # trailing\n", "stops.txt")
        stops = load_stop_words(path)

        assert stops.words == frozenset({"foo", "bar"})
        assert "FOO" in stops

    def test_direct_construction_lowercases(self):
        """Test the model-level normalisation."""
        assert StopWordList(words=["The", "A"]).words == frozenset({"the", "a"})
