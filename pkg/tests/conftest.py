"""Shared fixtures: the bundled demo networks, kitchen, and embeddings."""

from __future__ import annotations

import pytest

from foonplan.demo import (
    UTENSILS,
    all_subgraphs,
    board_slicing_fixture,
    core_subgraphs,
    demo_dish_classes,
    demo_integration_policy,
    demo_kitchen,
    demo_request,
    demo_state_classes,
    embedding_text,
)
from foonplan.embedding import SimilarityConfig, load_embeddings
from foonplan.store import merge


@pytest.fixture(scope="session")
def table(tmp_path_factory):
    path = tmp_path_factory.mktemp("emb") / "embeddings.txt"
    path.write_text(embedding_text(), encoding="utf-8")
    return load_embeddings(path)


@pytest.fixture(scope="session")
def config():
    return SimilarityConfig()


@pytest.fixture(scope="session")
def core_foon():
    """The five food recipes merged: exactly the 30-unit network."""
    return merge(
        core_subgraphs(), utensils=UTENSILS, dish_classes=demo_dish_classes()
    )


@pytest.fixture(scope="session")
def full_foon():
    """All eight demo recipes merged (39 units)."""
    return merge(
        all_subgraphs(), utensils=UTENSILS, dish_classes=demo_dish_classes()
    )


@pytest.fixture(scope="session")
def kitchen():
    return demo_kitchen()


@pytest.fixture(scope="session")
def state_classes():
    return demo_state_classes()


@pytest.fixture(scope="session")
def policy():
    return demo_integration_policy()


@pytest.fixture(scope="session")
def request_fixture():
    return demo_request()


@pytest.fixture(scope="session")
def board_fixture():
    """Two-unit slicing recipe plus its minimal kitchen."""
    return board_slicing_fixture()
