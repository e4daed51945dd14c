"""Reference-recipe selection: overlap first, then coverage, then id."""

from fractions import Fraction

import pytest

from foonplan.errors import NoRecipesError
from foonplan.goals import identify_goal_node
from foonplan.model import PlanningRequest


def test_demo_request_selects_greek_salad(full_foon, table, config, request_fixture):
    selection = identify_goal_node(full_foon, table, config, request_fixture)
    assert selection.recipe_id == "greek_salad"
    assert selection.goal.name == "greek salad"
    assert selection.goal.state_labels == ("dressed",)
    # onion, cucumber, feta cheese, and oregano pair up; prunes matches nothing
    assert selection.overlap_score == 4
    assert selection.coverage == Fraction(4, 6)


def test_equal_overlap_falls_to_coverage(full_foon, table, config):
    # cucumber scores one pair against both salads; garden_salad is the
    # smaller recipe, so one covered ingredient means more there.
    request = PlanningRequest((("cucumber", "sliced"),), "Salad")
    selection = identify_goal_node(full_foon, table, config, request)
    assert selection.recipe_id == "garden_salad"
    assert selection.overlap_score == 1
    assert selection.coverage == Fraction(1, 4)


def test_similarity_counts_in_overlap(full_foon, table, config):
    # zucchini is near cucumber, shallot near onion: greek_salad gets two
    # pairs plus feta; garden only has the cucumber stand-in.
    request = PlanningRequest(
        (("zucchini", "diced"), ("shallot", "sliced"), ("feta cheese", "crumbled")),
        "Salad",
    )
    selection = identify_goal_node(full_foon, table, config, request)
    assert selection.recipe_id == "greek_salad"
    assert selection.overlap_score == 3


def test_blank_slate_falls_to_lexicographic_id(full_foon, table, config):
    # prunes resembles nothing in any salad: all zero, all coverage zero
    request = PlanningRequest((("prunes", "chopped"),), "Salad")
    selection = identify_goal_node(full_foon, table, config, request)
    assert selection.recipe_id == "garden_salad"
    assert selection.overlap_score == 0
    assert selection.coverage == Fraction(0)


def test_dish_type_filters_candidates(full_foon, table, config):
    request = PlanningRequest((("egg", "whisked"),), "Omelette")
    selection = identify_goal_node(full_foon, table, config, request)
    assert selection.recipe_id in ("cheese_omelette", "veggie_omelette")
    assert selection.goal.name == "omelette"


def test_unknown_dish_type_lists_known_classes(full_foon, table, config):
    request = PlanningRequest((("onion", "sliced"),), "Pizza")
    with pytest.raises(NoRecipesError, match="no recipes of dish type 'Pizza'") as err:
        identify_goal_node(full_foon, table, config, request)
    text = str(err.value)
    assert "Salad" in text and "Omelette" in text and "Drinks" in text
