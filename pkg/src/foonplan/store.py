"""The universal network: merged subgraphs plus lookup indexes.

Merging is a union over functional units with duplicates eliminated, so
it is commutative and associative up to unit-set equality. The indexes
map location-free object keys to the units producing or consuming them,
in first-insertion order, which keeps every later search deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

from .documents import (
    DishClassConfig,
    dumps_canonical,
    object_from_doc,
    object_to_doc,
    subgraph_from_doc,
    unit_from_doc,
    unit_to_doc,
    _Reader,
    _load_json,
    write_text_atomic,
)
from .errors import DocumentError, MergeError
from .model import (
    FunctionalUnit,
    NodeKey,
    ObjectNode,
    Subgraph,
    derive_goal,
    ordered_unique,
)


@dataclass(frozen=True)
class RecipeEntry:
    """What the network remembers about one merged recipe."""

    id: str
    goal: ObjectNode
    ingredients: tuple[str, ...]
    dish_class: Optional[str] = None


@dataclass(frozen=True)
class UniversalFoon:
    """Merged units plus the derived indexes.

    The index mappings are plain dicts rebuilt deterministically from
    ``units``; they are never mutated after construction.
    """

    units: tuple[FunctionalUnit, ...]
    producers: Mapping[NodeKey, tuple[FunctionalUnit, ...]]
    consumers: Mapping[NodeKey, tuple[FunctionalUnit, ...]]
    recipes: tuple[RecipeEntry, ...]
    utensils: frozenset[str] = frozenset()

    @property
    def class_registry(self) -> dict[str, tuple[str, ...]]:
        registry: dict[str, list[str]] = {}
        for entry in self.recipes:
            if entry.dish_class:
                registry.setdefault(entry.dish_class, []).append(entry.id)
        return {k: tuple(v) for k, v in registry.items()}

    def units_producing(self, key: NodeKey) -> tuple[FunctionalUnit, ...]:
        return self.producers.get(key, ())

    def units_consuming(self, key: NodeKey) -> tuple[FunctionalUnit, ...]:
        return self.consumers.get(key, ())

    def ingredient_names(self) -> tuple[str, ...]:
        return ingredient_names(self.units, self.utensils)

    def has_object_named(self, name: str) -> bool:
        return name in self._name_universe()

    def _name_universe(self) -> frozenset[str]:
        names: set[str] = set()
        for unit in self.units:
            for node in (*unit.inputs, *unit.outputs):
                names.add(node.name)
                names.update(node.ingredients)
        return frozenset(names)


def build_indexes(units: Sequence[FunctionalUnit]) -> tuple[dict, dict]:
    producers: dict[NodeKey, list[FunctionalUnit]] = {}
    consumers: dict[NodeKey, list[FunctionalUnit]] = {}
    for unit in units:
        for node in unit.outputs:
            bucket = producers.setdefault(node.key, [])
            if unit not in bucket:
                bucket.append(unit)
        for node in unit.inputs:
            bucket = consumers.setdefault(node.key, [])
            if unit not in bucket:
                bucket.append(unit)
    return (
        {k: tuple(v) for k, v in producers.items()},
        {k: tuple(v) for k, v in consumers.items()},
    )


def ingredient_names(units: Iterable[FunctionalUnit], utensils: frozenset[str]) -> tuple[str, ...]:
    """Every ingredient name appearing in ``units``, insertion-ordered.

    Leaf object names count; composite node names do not (a salad is made
    of ingredients, it is not one), but the entries of composite
    ingredient lists do. Utensil names never count.
    """
    names: list[str] = []
    for unit in units:
        for node in (*unit.inputs, *unit.outputs):
            if node.name not in utensils and not node.ingredients:
                names.append(node.name)
            for entry in node.ingredients:
                if entry not in utensils:
                    names.append(entry)
    return tuple(ordered_unique(names))


def merge(
    subgraphs: Sequence[Subgraph],
    *,
    utensils: frozenset[str] = frozenset(),
    dish_classes: Optional[DishClassConfig] = None,
) -> UniversalFoon:
    """Union the subgraphs into one network, dropping duplicate units.

    Iteration order is the given subgraph order and each subgraph's unit
    order, so merging the same inputs always yields the same network. A
    recipe entry (goal plus full ingredient set) is derived per subgraph;
    a subgraph with no explicit goal and no unique terminal is an error.
    """
    seen_ids: set[str] = set()
    units: dict[FunctionalUnit, None] = {}
    recipes: list[RecipeEntry] = []
    for subgraph in subgraphs:
        if subgraph.id in seen_ids:
            raise MergeError(f"duplicate subgraph id '{subgraph.id}'")
        seen_ids.add(subgraph.id)
        for unit in subgraph.units:
            units.setdefault(unit, None)
        goal = derive_goal(subgraph)
        dish_class = subgraph.dish_class
        if dish_classes is not None:
            dish_class = dish_classes.assignment.get(subgraph.id, dish_class)
            if dish_class is not None and dish_class not in dish_classes.classes:
                raise MergeError(
                    f"subgraph '{subgraph.id}' is assigned undeclared dish class '{dish_class}'"
                )
        recipes.append(
            RecipeEntry(
                id=subgraph.id,
                goal=goal,
                ingredients=ingredient_names(subgraph.units, utensils),
                dish_class=dish_class,
            )
        )
    merged = tuple(units)
    producers, consumers = build_indexes(merged)
    return UniversalFoon(merged, producers, consumers, tuple(recipes), utensils)


def find_goal_candidates(foon: UniversalFoon, dish_type: str) -> tuple[RecipeEntry, ...]:
    """All recipes of the given dish class, in merge order."""
    return tuple(e for e in foon.recipes if e.dish_class == dish_type)


# ---------------------------------------------------------------------------
# universal network documents


def universal_to_doc(foon: UniversalFoon) -> dict:
    return {
        "units": [unit_to_doc(u) for u in foon.units],
        "recipes": [
            {
                "id": e.id,
                **({"dish_class": e.dish_class} if e.dish_class else {}),
                "goal": object_to_doc(e.goal),
                "ingredients": list(e.ingredients),
            }
            for e in foon.recipes
        ],
        "utensils": sorted(foon.utensils),
    }


def universal_from_doc(doc, source: Optional[str] = None) -> UniversalFoon:
    reader = _Reader(source)
    reader.mapping(doc, "$", ("units", "recipes", "utensils"))
    raw_units = reader.expect(doc.get("units"), list, "$.units", "a list")
    units = tuple(unit_from_doc(d, reader, f"$.units[{i}]") for i, d in enumerate(raw_units))
    raw_utensils = reader.expect(doc.get("utensils", []), list, "$.utensils", "a list")
    for i, u in enumerate(raw_utensils):
        reader.expect(u, str, f"$.utensils[{i}]", "a string")
    utensils = frozenset(raw_utensils)
    recipes = []
    raw_recipes = reader.expect(doc.get("recipes", []), list, "$.recipes", "a list")
    for i, entry in enumerate(raw_recipes):
        where = f"$.recipes[{i}]"
        reader.mapping(entry, where, ("id", "dish_class", "goal", "ingredients"))
        ident = reader.expect(entry.get("id"), str, f"{where}.id", "a string")
        dish_class = entry.get("dish_class")
        if dish_class is not None:
            reader.expect(dish_class, str, f"{where}.dish_class", "a string")
        if entry.get("goal") is None:
            reader.fail(f"{where}.goal", "recipe entry needs a goal")
        goal = object_from_doc(entry["goal"], reader, f"{where}.goal")
        raw_ings = reader.expect(entry.get("ingredients", []), list, f"{where}.ingredients", "a list")
        for j, ing in enumerate(raw_ings):
            reader.expect(ing, str, f"{where}.ingredients[{j}]", "a string")
        recipes.append(RecipeEntry(ident, goal, tuple(raw_ings), dish_class))
    producers, consumers = build_indexes(units)
    return UniversalFoon(units, producers, consumers, tuple(recipes), utensils)


def load_universal(path) -> UniversalFoon:
    return universal_from_doc(_load_json(path), source=str(path))


def save_universal(path, foon: UniversalFoon) -> None:
    write_text_atomic(path, dumps_canonical(universal_to_doc(foon)))


def load_network(paths: Sequence, *, utensils: frozenset[str] = frozenset(),
                 dish_classes: Optional[DishClassConfig] = None) -> UniversalFoon:
    """Load either one pre-merged network document or a set of subgraphs.

    A single file containing a ``units``/``recipes`` document is used
    as-is; anything else is treated as subgraph documents (canonical JSON,
    or legacy ``.txt``) and merged.
    """
    from pathlib import Path

    from .documents import load_legacy_subgraph

    subgraphs = []
    for path in paths:
        path = Path(path)
        if path.suffix.lower() == ".txt":
            subgraphs.append(load_legacy_subgraph(path))
            continue
        doc = _load_json(path)
        if isinstance(doc, dict) and "recipes" in doc and "id" not in doc:
            if len(paths) != 1:
                raise MergeError("a pre-merged network document cannot be combined with other inputs")
            return universal_from_doc(doc, source=str(path))
        subgraphs.append(subgraph_from_doc(doc, source=str(path)))
    return merge(subgraphs, utensils=utensils, dish_classes=dish_classes)
