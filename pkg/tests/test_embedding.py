"""Vector loading, similarity counting, and nearest-candidate lookup."""

import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from foonplan.embedding import (
    EmbeddingTable,
    SimilarityConfig,
    compute_similarity,
    embed,
    load_embeddings,
    nearest_ingredient,
    similarity,
)
from foonplan.errors import EmbeddingError

from oracles import pair_overlap


def _write(tmp_path, text):
    path = tmp_path / "vectors.txt"
    path.write_text(text, encoding="utf-8")
    return path


class TestLoading:
    def test_vectors_are_unit_normalized(self, tmp_path):
        table = load_embeddings(_write(tmp_path, "2 2\nonion 3 4\nleek 0 2\n"))
        assert table.dimension == 2
        np.testing.assert_allclose(table.vectors["onion"], [0.6, 0.8])
        np.testing.assert_allclose(np.linalg.norm(table.vectors["leek"]), 1.0)

    def test_tokens_normalized_and_blank_lines_skipped(self, tmp_path):
        table = load_embeddings(_write(tmp_path, "1 2\n\nOnion 1 0\n\n"))
        assert "onion" in table
        assert " Onion " in table  # lookup normalizes too

    @pytest.mark.parametrize(
        "text,message",
        [
            ("", "empty embedding file"),
            ("2\nonion 1 0\n", "header"),
            ("x 2\nonion 1 0\n", "non-numeric header"),
            ("1 0\nonion\n", "dimension must be positive"),
            ("1 2\nonion 1\n", "has 1 components, expected 2"),
            ("1 2\nonion 1 x\n", "non-numeric component"),
            ("1 2\nonion 0 0\n", "zero vector"),
            ("2 2\nonion 1 0\n", "header promises 2 vectors, file has 1"),
        ],
    )
    def test_malformed_files(self, tmp_path, text, message):
        with pytest.raises(EmbeddingError, match=message):
            load_embeddings(_write(tmp_path, text))

    def test_demo_table_loads(self, table):
        assert "onion" in table
        assert "prunes" in table


class TestEmbed:
    @pytest.fixture()
    def small(self, tmp_path):
        return load_embeddings(_write(tmp_path, "3 2\nfeta 1 0\ncheese 0 1\nonion 1 0\n"))

    def test_multi_word_mean_is_renormalized(self, small):
        vec = embed(small, "feta cheese")
        np.testing.assert_allclose(vec, [math.sqrt(0.5), math.sqrt(0.5)])
        assert math.isclose(float(np.linalg.norm(vec)), 1.0)

    def test_unknown_words_are_skipped(self, small):
        np.testing.assert_allclose(embed(small, "fresh feta"), [1.0, 0.0])

    def test_fully_unknown_name_embeds_to_none(self, small):
        assert embed(small, "pineapple") is None

    def test_unknown_names_fall_back_to_string_equality(self, small):
        assert similarity(small, "pineapple", "pineapple") == 1.0
        assert similarity(small, "pineapple", "Pineapple  ") == 1.0
        assert similarity(small, "pineapple", "mango") == 0.0
        assert similarity(small, "pineapple", "onion") == 0.0

    def test_known_pair_cosine(self, small):
        assert math.isclose(similarity(small, "feta", "onion"), 1.0)
        assert math.isclose(similarity(small, "feta", "cheese"), 0.0)


class TestConfig:
    def test_default_threshold(self):
        assert SimilarityConfig().threshold == 0.90

    def test_threshold_bounds(self):
        with pytest.raises(EmbeddingError):
            SimilarityConfig(threshold=1.5)
        with pytest.raises(EmbeddingError):
            SimilarityConfig(threshold=-1.5)


class TestComputeSimilarity:
    def test_counts_every_matching_pair(self, table, config):
        # zucchini~cucumber and the identical names each contribute one pair
        score = compute_similarity(table, config, ["onion", "zucchini"], ["onion", "cucumber"])
        assert score == 2

    def test_one_request_name_can_match_twice(self, table, config):
        score = compute_similarity(table, config, ["onion"], ["onion", "shallot"])
        assert score == 2

    def test_threshold_is_strict(self, tmp_path):
        t = load_embeddings(_write(tmp_path, "2 2\na 1 0\nb 1 0\n"))
        assert compute_similarity(t, SimilarityConfig(threshold=1.0), ["a"], ["b"]) == 0
        assert compute_similarity(t, SimilarityConfig(threshold=0.999999), ["a"], ["b"]) == 1

    def test_raising_threshold_never_raises_score(self, table):
        names = list(table.vectors)
        req, avail = names[:6], names[6:18]
        scores = [
            compute_similarity(table, SimilarityConfig(t), req, avail)
            for t in (0.0, 0.5, 0.9, 0.95, 1.0)
        ]
        assert scores == sorted(scores, reverse=True)


class TestNearestIngredient:
    def test_picks_highest_cosine(self, table):
        name, confidence = nearest_ingredient(table, "carrot", ["cucumber", "onion", "lemon"])
        assert name == "cucumber"
        assert confidence == pytest.approx(100 * 0.97 / math.sqrt(0.97**2 + 0.243**2))

    def test_ties_break_lexicographically(self, tmp_path):
        t = load_embeddings(_write(tmp_path, "3 2\nx 1 0\nbeta 1 0\nalpha 1 0\n"))
        assert nearest_ingredient(t, "x", ["beta", "alpha"]) == ("alpha", 100.0)

    def test_self_match_scores_100(self, table):
        assert nearest_ingredient(table, "onion", ["onion", "shallot"]) == ("onion", 100.0)

    def test_unembeddable_name_matches_itself_by_string(self, tmp_path):
        t = load_embeddings(_write(tmp_path, "1 2\nonion 1 0\n"))
        assert nearest_ingredient(t, "mystery", ["mystery"]) == ("mystery", 100.0)

    def test_no_candidates_rejected(self, table):
        with pytest.raises(EmbeddingError, match="no candidates"):
            nearest_ingredient(table, "carrot", [])

    def test_no_embedding_basis_rejected(self, tmp_path):
        t = load_embeddings(_write(tmp_path, "1 2\nonion 1 0\n"))
        with pytest.raises(EmbeddingError, match="no substitution basis"):
            nearest_ingredient(t, "mystery", ["enigma", "riddle"])


class TestAgainstReferenceCounter:
    """The package score must equal an independently coded pair counter."""

    def test_demo_vocabulary_random_sets(self, table, config):
        from foonplan.demo import _AXES, _VECTORS

        dense = {
            token: [parts.get(axis, 0.0) for axis in _AXES]
            for token, parts in _VECTORS.items()
        }
        names = sorted(dense) + ["feta cheese", "olive oil", "unknown thing"]
        rng = random.Random(7)
        for _ in range(300):
            req = rng.sample(names, rng.randint(1, 6))
            avail = rng.sample(names, rng.randint(1, 10))
            expected = pair_overlap(dense, config.threshold, req, avail)
            assert compute_similarity(table, config, req, avail) == expected


@st.composite
def random_tables(draw):
    dim = draw(st.integers(2, 5))
    count = draw(st.integers(2, 6))
    vectors = {}
    for i in range(count):
        vec = draw(
            st.lists(
                st.floats(-1, 1, allow_nan=False, allow_infinity=False),
                min_size=dim,
                max_size=dim,
            ).filter(lambda v: any(abs(x) > 1e-6 for x in v))
        )
        vectors[f"w{i}"] = vec
    return vectors


@settings(max_examples=80, deadline=None)
@given(random_tables(), st.data())
def test_score_matches_reference_on_random_tables(raw, data):
    table = EmbeddingTable(
        dimension=len(next(iter(raw.values()))),
        vectors={k: np.asarray(v) / np.linalg.norm(v) for k, v in raw.items()},
    )
    names = list(raw) + ["missing"]
    req = data.draw(st.lists(st.sampled_from(names), min_size=1, max_size=4))
    avail = data.draw(st.lists(st.sampled_from(names), min_size=1, max_size=4))
    threshold = data.draw(st.sampled_from([0.0, 0.5, 0.9]))
    expected = pair_overlap(raw, threshold, req, avail)
    assert compute_similarity(table, SimilarityConfig(threshold), req, avail) == expected
