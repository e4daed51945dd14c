"""Backward search for a reference task tree.

Starting from the units that produce the goal, the search walks input
requirements backward until everything rests on kitchen-available
objects. Where several units produce the same object key, it enumerates
every combination of choices, scores each resulting tree by ingredient
overlap with the request, and keeps the best: highest overlap first,
fewest units on a tie, earliest enumerated after that.

Before searching, the unit universe is adapted to the request: units
whose ingredients have nothing to do with the request are dropped when
they only compete as alternatives, and irrelevant leaf ingredients are
stripped out of the units that survive. Relevance means the name is in
the request, or its embedding similarity to a requested name beats the
threshold, so near-synonyms keep the recipes they appear in alive.
"""

from __future__ import annotations

import hashlib
import itertools
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Optional, Sequence

from .documents import dumps_canonical, object_to_doc, tree_from_doc, tree_to_doc, unit_to_doc, write_text_atomic
from .embedding import EmbeddingTable, SimilarityConfig, compute_similarity, similarity
from .errors import NoPathError, SearchBudgetError
from .kitchen import KitchenModel, base_available, executable_order
from .model import (
    FunctionalUnit,
    NodeKey,
    ObjectNode,
    TaskTree,
    ordered_unique,
)
from .store import UniversalFoon, ingredient_names

DEFAULT_MAX_PATHS = 10_000
DEFAULT_MAX_DEPTH = 100


@dataclass(frozen=True)
class CandidatePath:
    """One complete goal-reaching tree found by the search."""

    units: tuple[FunctionalUnit, ...]
    overlap_score: int

    @property
    def length(self) -> int:
        return len(self.units)


@dataclass
class SearchNode:
    """One frame of the backward expansion, kept for diagnostics."""

    unit: FunctionalUnit
    depth: int
    parent: Optional["SearchNode"] = None


@dataclass
class _Budget:
    max_paths: int
    max_depth: int
    paths_seen: int = 0
    best_score: Optional[int] = None

    def count_combination(self):
        self.paths_seen += 1
        if self.paths_seen > self.max_paths:
            raise SearchBudgetError(
                f"more than {self.max_paths} unit combinations",
                paths_seen=self.paths_seen,
                best_score=self.best_score,
            )

    def check_depth(self, depth: int):
        if depth > self.max_depth:
            raise SearchBudgetError(
                f"expansion deeper than {self.max_depth} levels",
                paths_seen=self.paths_seen,
                best_score=self.best_score,
            )


class _Relevance:
    """Caches which leaf ingredient names matter to this request."""

    def __init__(self, table: EmbeddingTable, config: SimilarityConfig, requested: Sequence[str]):
        self.table = table
        self.config = config
        self.requested = tuple(requested)
        self._cache: dict[str, bool] = {}

    def __call__(self, name: str) -> bool:
        hit = self._cache.get(name)
        if hit is None:
            hit = name in self.requested or any(
                similarity(self.table, r, name) > self.config.threshold for r in self.requested
            )
            self._cache[name] = hit
        return hit


def adapt_units(
    foon: UniversalFoon,
    table: EmbeddingTable,
    config: SimilarityConfig,
    kitchen: KitchenModel,
    requested_names: Sequence[str],
) -> dict[FunctionalUnit, Optional[FunctionalUnit]]:
    """Map each unit to its request-adapted form, or None when pruned.

    A unit is pruned when it demands a prepared ingredient that is
    irrelevant to the request and offers no relevant ingredient of its
    own; such a unit only makes sense for a different dish. Surviving
    units lose their irrelevant leaf ingredients everywhere: inputs,
    outputs, and composite ingredient lists. Utensils and composites are
    structural and always stay.
    """
    relevant = _Relevance(table, config, requested_names)

    def leaf(node: ObjectNode) -> bool:
        return not node.ingredients and node.name not in foon.utensils

    adapted: dict[FunctionalUnit, Optional[FunctionalUnit]] = {}
    for unit in foon.units:
        blocking = 0
        kept_relevant = 0
        for node in unit.inputs:
            if not leaf(node):
                continue
            if relevant(node.name):
                kept_relevant += 1
            elif not base_available(node, kitchen):
                blocking += 1
        if blocking and not kept_relevant:
            adapted[unit] = None
            continue
        adapted[unit] = _strip_unit(unit, relevant, leaf)
    return adapted


def _strip_unit(
    unit: FunctionalUnit,
    relevant: Callable[[str], bool],
    leaf: Callable[[ObjectNode], bool],
) -> Optional[FunctionalUnit]:
    def keep(node: ObjectNode) -> bool:
        return not leaf(node) or relevant(node.name)

    def clean(node: ObjectNode) -> ObjectNode:
        kept = tuple(i for i in node.ingredients if relevant(i))
        if kept == node.ingredients:
            return node
        return ObjectNode(node.name, node.states, kept, node.location)

    inputs = tuple(clean(n) for n in unit.inputs if keep(n))
    outputs = tuple(clean(n) for n in unit.outputs if keep(n))
    if not inputs or not outputs:
        return None
    if inputs == unit.inputs and outputs == unit.outputs:
        return unit
    return FunctionalUnit(inputs, unit.motion, outputs)


def retrieve_reference_task_tree(
    foon: UniversalFoon,
    table: EmbeddingTable,
    config: SimilarityConfig,
    kitchen: KitchenModel,
    goal: ObjectNode,
    ingredients: Sequence[tuple[str, str]],
    *,
    max_paths: int = DEFAULT_MAX_PATHS,
    max_depth: int = DEFAULT_MAX_DEPTH,
    cache: Optional["TreeCache"] = None,
) -> TaskTree:
    """Find the best executable unit sequence producing ``goal``.

    ``ingredients`` are the requested (name, state) pairs. Exceeding the
    search budgets raises instead of silently returning a partial answer.
    """
    requested_names = tuple(ordered_unique(name for name, _ in ingredients))
    if cache is not None:
        cached = cache.get(foon, kitchen, config, goal, ingredients)
        if cached is not None:
            return cached

    root_units = foon.units_producing(goal.key)
    if not root_units:
        raise NoPathError(f"nothing in the network produces the goal", unmet=(goal.key,))

    adapted = adapt_units(foon, table, config, kitchen, requested_names)
    unit_rank = {unit: i for i, unit in enumerate(foon.units)}

    def producers_for(key: NodeKey) -> list[FunctionalUnit]:
        out = []
        for unit in foon.units_producing(key):
            stripped = adapted.get(unit)
            if stripped is not None and key in stripped.output_keys():
                out.append(stripped)
        return out

    budget = _Budget(max_paths, max_depth)
    unmet: list[NodeKey] = []

    def expand(node: SearchNode, chain: frozenset) -> list[frozenset]:
        """All unit sets that satisfy the inputs of ``node.unit``."""
        budget.check_depth(node.depth)
        per_key: list[list[frozenset]] = []
        needed = ordered_unique(
            n.key for n in node.unit.inputs if not base_available(n, kitchen)
        )
        for key in needed:
            alternatives: list[frozenset] = []
            for producer in producers_for(key):
                if producer in chain:
                    continue
                child = SearchNode(producer, node.depth + 1, node)
                for sub in expand(child, chain | {producer}):
                    alternatives.append(sub | {producer})
            if not alternatives:
                unmet.append(key)
                return []
            per_key.append(ordered_unique(alternatives))
        if not per_key:
            return [frozenset()]
        combos: list[frozenset] = []
        for choice in itertools.product(*per_key):
            budget.count_combination()
            combos.append(frozenset().union(*choice))
        return ordered_unique(combos)

    best: Optional[CandidatePath] = None
    for root in root_units:
        stripped_root = adapted.get(root)
        if stripped_root is None or goal.key not in stripped_root.output_keys():
            continue
        frame = SearchNode(stripped_root, 1)
        for subset in expand(frame, frozenset({stripped_root})):
            budget.count_combination()
            units = sorted(subset | {stripped_root}, key=_stable_rank(unit_rank))
            order = executable_order(units, kitchen)
            if order is None:
                continue
            score = compute_similarity(
                table, config, requested_names, ingredient_names(order, foon.utensils)
            )
            candidate = CandidatePath(tuple(order), score)
            if best is None or _better(candidate, best):
                best = candidate
            budget.best_score = best.overlap_score

    if best is None:
        raise NoPathError(
            "no executable path reaches the goal with this kitchen and request",
            unmet=ordered_unique(unmet),
        )
    tree = TaskTree(best.units, goal)
    if cache is not None:
        cache.put(foon, kitchen, config, goal, ingredients, tree)
    return tree


def _stable_rank(unit_rank: dict[FunctionalUnit, int]) -> Callable[[FunctionalUnit], tuple]:
    def rank(unit: FunctionalUnit) -> tuple:
        base = unit_rank.get(unit)
        if base is not None:
            return (0, base)
        # stripped variants are not in the original index; order them by
        # verb then repr so sorting never depends on hash seeds
        return (1, unit.motion.verb, repr(unit))

    return rank


def _better(a: CandidatePath, b: CandidatePath) -> bool:
    if a.overlap_score != b.overlap_score:
        return a.overlap_score > b.overlap_score
    return a.length < b.length


class TreeCache:
    """Opt-in on-disk cache of reference trees.

    Keys cover the goal, the requested ingredient set, the similarity
    threshold, and fingerprints of the network and kitchen, so a cache
    directory can be shared across unrelated runs without collisions.
    Writers are serialized within the process and write atomically, so
    concurrent readers only ever see complete documents.
    """

    def __init__(self, directory: str | Path):
        self.directory = Path(directory)
        self._lock = threading.Lock()

    def _key(self, foon, kitchen, config, goal, ingredients) -> str:
        fingerprint = {
            "goal": object_to_doc(goal),
            "ingredients": sorted(list(pair) for pair in set(ingredients)),
            "threshold": config.threshold,
            "network": _foon_fingerprint(foon),
            "kitchen": _kitchen_fingerprint(kitchen),
        }
        return hashlib.sha256(dumps_canonical(fingerprint).encode("utf-8")).hexdigest()

    def get(self, foon, kitchen, config, goal, ingredients) -> Optional[TaskTree]:
        path = self.directory / f"{self._key(foon, kitchen, config, goal, ingredients)}.json"
        if not path.exists():
            return None
        import json

        return tree_from_doc(json.loads(path.read_text(encoding="utf-8")), source=str(path))

    def put(self, foon, kitchen, config, goal, ingredients, tree: TaskTree) -> None:
        path = self.directory / f"{self._key(foon, kitchen, config, goal, ingredients)}.json"
        with self._lock:
            write_text_atomic(path, dumps_canonical(tree_to_doc(tree)))


def _foon_fingerprint(foon: UniversalFoon) -> str:
    text = dumps_canonical([unit_to_doc(u) for u in foon.units] + [sorted(foon.utensils)])
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def _kitchen_fingerprint(kitchen: KitchenModel) -> str:
    doc = {
        "base_items": sorted(
            [item.name, sorted(item.states), item.location or ""] for item in kitchen.base_items
        ),
        "utensils": sorted(kitchen.utensils),
    }
    return hashlib.sha256(dumps_canonical(doc).encode("utf-8")).hexdigest()
