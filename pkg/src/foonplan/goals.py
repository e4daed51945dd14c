"""Picking the reference recipe whose goal the planner will aim for.

Among all recipes of the requested dish class, the winner is the one
whose ingredient set shares the most similarity pairs with the request.
Ties fall first to the recipe with the larger fraction of its own
ingredients covered by the request (a small recipe fully covered beats a
sprawling one touched twice), then to the lexicographically smallest
recipe id.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .embedding import EmbeddingTable, SimilarityConfig, compute_similarity, similarity
from .errors import NoRecipesError
from .model import ObjectNode, PlanningRequest
from .store import RecipeEntry, UniversalFoon, find_goal_candidates


@dataclass(frozen=True)
class GoalSelection:
    recipe_id: str
    goal: ObjectNode
    overlap_score: int
    coverage: Fraction
    recipe_ingredients: tuple[str, ...]


def identify_goal_node(
    foon: UniversalFoon,
    table: EmbeddingTable,
    config: SimilarityConfig,
    request: PlanningRequest,
) -> GoalSelection:
    candidates = find_goal_candidates(foon, request.dish_type)
    if not candidates:
        known = sorted(foon.class_registry)
        raise NoRecipesError(
            f"no recipes of dish type '{request.dish_type}' in the network "
            f"(available: {', '.join(known) if known else 'none'})"
        )
    best: GoalSelection | None = None
    for entry in candidates:
        score = compute_similarity(table, config, request.names, entry.ingredients)
        coverage = _coverage(table, config, request.names, entry)
        selection = GoalSelection(entry.id, entry.goal, score, coverage, entry.ingredients)
        if best is None or _beats(selection, best):
            best = selection
    assert best is not None
    return best


def _coverage(
    table: EmbeddingTable,
    config: SimilarityConfig,
    requested: tuple[str, ...],
    entry: RecipeEntry,
) -> Fraction:
    """Fraction of the recipe's ingredients the request can stand in for."""
    if not entry.ingredients:
        return Fraction(0)
    covered = 0
    for ing in entry.ingredients:
        if ing in requested or any(similarity(table, r, ing) > config.threshold for r in requested):
            covered += 1
    return Fraction(covered, len(entry.ingredients))


def _beats(a: GoalSelection, b: GoalSelection) -> bool:
    if a.overlap_score != b.overlap_score:
        return a.overlap_score > b.overlap_score
    if a.coverage != b.coverage:
        return a.coverage > b.coverage
    return a.recipe_id < b.recipe_id
