"""Kitchen availability model and the task tree executability validator.

A kitchen declares concrete base items (name, states, optional location)
plus a lexicon of utensil and container names. Two implicit rules sit on
top of the declarations: any object in a bare whole or raw state counts
as available, and any utensil-named object without contents counts as
available. Everything else has to be produced by an earlier unit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .model import FunctionalUnit, NodeKey, ObjectNode, TaskTree, normalize_name

IMPLICIT_BASE_STATES = (frozenset({"whole"}), frozenset({"raw"}))


@dataclass(frozen=True)
class BaseItem:
    name: str
    states: frozenset[str] = frozenset()
    location: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "name", normalize_name(self.name))
        object.__setattr__(self, "states", frozenset(normalize_name(s) for s in self.states))
        if self.location is not None:
            object.__setattr__(self, "location", normalize_name(self.location) or None)


@dataclass(frozen=True)
class KitchenModel:
    base_items: tuple[BaseItem, ...] = ()
    utensils: frozenset[str] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "base_items", tuple(self.base_items))
        object.__setattr__(self, "utensils", frozenset(normalize_name(u) for u in self.utensils))

    def is_utensil(self, name: str) -> bool:
        return name in self.utensils


def base_available(node: ObjectNode, kitchen: KitchenModel) -> bool:
    """True when the kitchen supplies this exact node without any cooking.

    Declared items must match name, state label set, and location. The
    location check is what forces a planner to include the step that puts
    an onion onto the cutting board: the kitchen has a whole onion, not a
    whole onion already on the board. Composites carrying ingredients are
    never base-available.
    """
    if node.ingredients:
        return False
    labels = frozenset(node.state_labels)
    for item in kitchen.base_items:
        if item.name == node.name and item.states == labels and item.location == node.location:
            return True
    if node.location is None:
        if labels in IMPLICIT_BASE_STATES:
            return True
        if kitchen.is_utensil(node.name):
            return True
    return False


def validate_tree(tree: TaskTree, kitchen: KitchenModel) -> list[str]:
    """Check executability; return human-readable violations, empty if fine.

    Walking the units in order, every input must be base-available or
    produced by an earlier unit (at key level, so location differences do
    not matter once an object exists). A key consumed at one step and
    produced again later marks a cycle in what should be a forward order.
    The goal must be produced by some unit, or be base-available when the
    tree is empty.
    """
    problems: list[str] = []
    produced: set[NodeKey] = set()
    consumed_at: dict[NodeKey, int] = {}
    for idx, unit in enumerate(tree.units):
        for node in unit.inputs:
            if base_available(node, kitchen):
                continue
            if node.key in produced:
                consumed_at.setdefault(node.key, idx)
                continue
            consumed_at.setdefault(node.key, idx)
            problems.append(
                f"unit {idx} ({unit.motion.verb}): input {_describe(node)} is neither "
                f"base-available nor produced earlier"
            )
        for node in unit.outputs:
            if node.key in consumed_at and consumed_at[node.key] < idx and node.key not in produced:
                problems.append(
                    f"unit {idx} ({unit.motion.verb}): output {_describe(node)} was already "
                    f"consumed at unit {consumed_at[node.key]}; the order is cyclic"
                )
            produced.add(node.key)
    if tree.units:
        if tree.goal.key not in produced:
            problems.append(f"goal {_describe(tree.goal)} is not produced by any unit")
    elif not base_available(tree.goal, kitchen):
        problems.append(f"goal {_describe(tree.goal)} of an empty tree is not base-available")
    return problems


def executable_order(units: Iterable[FunctionalUnit], kitchen: KitchenModel) -> Optional[list[FunctionalUnit]]:
    """Order ``units`` so each one's inputs are met when it runs.

    Greedy and stable: each round fires the first still-pending unit whose
    inputs are all base-available or already produced. Returns None when
    no full ordering exists, which is how cross-branch circular
    dependencies get rejected during retrieval.
    """
    pending = list(units)
    produced: set[NodeKey] = set()
    order: list[FunctionalUnit] = []
    while pending:
        fired = None
        for unit in pending:
            ok = all(
                base_available(n, kitchen) or n.key in produced
                for n in unit.inputs
            )
            if ok:
                fired = unit
                break
        if fired is None:
            return None
        pending.remove(fired)
        order.append(fired)
        produced.update(n.key for n in fired.outputs)
    return order


def _describe(node: ObjectNode) -> str:
    states = ",".join(node.state_labels)
    text = f"{node.name}{{{states}}}" if states else node.name
    if node.location:
        text += f" [{node.location}]"
    return text
