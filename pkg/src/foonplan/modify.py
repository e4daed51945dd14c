"""Turning a reference tree into a final tree for the exact request.

Three escalating repairs cover ingredients the reference tree lacks: a
subtree retrieved from the network when the ingredient is known, a state
substitution when the object is known but the requested state is not
producible, and an object substitution (nearest embedding neighbor,
renamed) when the network has never seen the ingredient at all. Repaired
subtrees splice in ahead of the earliest unit that can accept a new
input, and everything the request did not ask for is removed at the end.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Optional, Sequence

from .documents import IntegrationPolicy, StateClassConfig
from .embedding import EmbeddingTable, SimilarityConfig, nearest_ingredient, similarity
from .errors import IntegrationError, PlanningError, SubstitutionError
from .goals import GoalSelection, identify_goal_node
from .kitchen import KitchenModel, base_available, validate_tree
from .model import (
    FunctionalUnit,
    ObjectNode,
    PlanningRequest,
    StateLabel,
    SubstitutionRecord,
    TaskTree,
    ordered_unique,
)
from .retrieval import DEFAULT_MAX_DEPTH, DEFAULT_MAX_PATHS, TreeCache, retrieve_reference_task_tree
from .store import UniversalFoon


@dataclass(frozen=True)
class MotionVerbStats:
    """Most frequent producing verb per state label, network-wide."""

    verb_by_state: dict[str, str]


def build_motion_stats(foon: UniversalFoon) -> MotionVerbStats:
    counts: dict[str, Counter] = {}
    for unit in foon.units:
        labels = ordered_unique(s.label for node in unit.outputs for s in node.states)
        for label in labels:
            counts.setdefault(label, Counter())[unit.motion.verb] += 1
    verb_by_state = {}
    for label, counter in counts.items():
        best = sorted(counter.items(), key=lambda pair: (-pair[1], pair[0]))[0]
        verb_by_state[label] = best[0]
    return MotionVerbStats(verb_by_state)


class _MissingState(Exception):
    """Internal signal: the object is known but the state is unreachable."""


def retrieve_subtree(
    foon: UniversalFoon,
    table: EmbeddingTable,
    config: SimilarityConfig,
    kitchen: KitchenModel,
    name: str,
    state: str,
    request: PlanningRequest,
    *,
    max_paths: int = DEFAULT_MAX_PATHS,
    max_depth: int = DEFAULT_MAX_DEPTH,
    cache: Optional[TreeCache] = None,
) -> TaskTree:
    """Tree producing (name, state), empty when the kitchen has it as-is.

    Raises the missing-state signal when the object is known but nothing
    produces it in the requested state; callers fall through to state
    substitution.
    """
    target = ObjectNode(name, (StateLabel(state),))
    if base_available(target, kitchen):
        return TaskTree((), target)
    if not foon.units_producing(target.key):
        raise _MissingState(f"nothing produces {name} in state '{state}'")
    ingredients = tuple(request.ingredients) + ((target.name, state),)
    return retrieve_reference_task_tree(
        foon, table, config, kitchen, target, ingredients,
        max_paths=max_paths, max_depth=max_depth, cache=cache,
    )


def substitute_state(
    foon: UniversalFoon,
    table: EmbeddingTable,
    config: SimilarityConfig,
    kitchen: KitchenModel,
    state_classes: StateClassConfig,
    stats: MotionVerbStats,
    name: str,
    state: str,
    request: PlanningRequest,
    *,
    max_paths: int = DEFAULT_MAX_PATHS,
    max_depth: int = DEFAULT_MAX_DEPTH,
    cache: Optional[TreeCache] = None,
) -> tuple[TaskTree, list[SubstitutionRecord]]:
    """Reach an unproducible state through a same-class analog.

    Among producible states sharing the requested state's class, the one
    with the shortest producing subtree wins (lexicographic on ties).
    The analog's labels are rewritten to the requested state and the
    producing units take the verb most often associated with it.
    """
    target_state = StateLabel(state).label
    if state_classes.class_of(target_state) is None:
        raise SubstitutionError(
            f"state '{target_state}' of '{name}' is not assigned to any state class; "
            f"no analog can be chosen"
        )
    best: Optional[tuple[TaskTree, str]] = None
    for analog in state_classes.analogs(target_state):
        probe = ObjectNode(name, (StateLabel(analog),))
        if not foon.units_producing(probe.key):
            continue
        subtree = retrieve_reference_task_tree(
            foon, table, config, kitchen, probe,
            tuple(request.ingredients) + ((probe.name, analog),),
            max_paths=max_paths, max_depth=max_depth, cache=cache,
        )
        if best is None or len(subtree.units) < len(best[0].units):
            best = (subtree, analog)
    if best is None:
        raise SubstitutionError(
            f"no state in class '{state_classes.class_of(target_state)}' is producible "
            f"for '{name}'; cannot reach state '{target_state}'"
        )
    subtree, analog = best
    relabeled = _relabel_state(subtree, name, analog, target_state)
    new_verb = stats.verb_by_state.get(target_state)
    units = []
    swapped = False
    for unit in relabeled.units:
        produces_target = any(
            node.name == name and target_state in node.state_labels for node in unit.outputs
        )
        if produces_target and new_verb is not None and unit.motion.verb != new_verb:
            units.append(FunctionalUnit(unit.inputs, type(unit.motion)(new_verb), unit.outputs))
            swapped = True
        else:
            units.append(unit)
    note = (
        f"motion verb changed to '{new_verb}'" if swapped
        else "motion verb unchanged"
    )
    record = SubstitutionRecord(
        kind="state",
        original=analog,
        replacement=target_state,
        confidence=max(0.0, 100.0 * similarity(table, analog, target_state)),
        note=note,
    )
    return TaskTree(tuple(units), relabeled.goal), [record]


def _relabel_state(tree: TaskTree, name: str, old: str, new: str) -> TaskTree:
    def fix_node(node: ObjectNode) -> ObjectNode:
        if node.name != name or old not in node.state_labels:
            return node
        states = tuple(
            StateLabel(new, s.argument) if s.label == old else s for s in node.states
        )
        return ObjectNode(node.name, states, node.ingredients, node.location)

    units = tuple(
        FunctionalUnit(
            tuple(fix_node(n) for n in u.inputs),
            u.motion,
            tuple(fix_node(n) for n in u.outputs),
        )
        for u in tree.units
    )
    return TaskTree(units, fix_node(tree.goal), tree.provenance)


def substitute_object(
    foon: UniversalFoon,
    table: EmbeddingTable,
    config: SimilarityConfig,
    kitchen: KitchenModel,
    state_classes: StateClassConfig,
    stats: MotionVerbStats,
    name: str,
    state: str,
    request: PlanningRequest,
    *,
    max_paths: int = DEFAULT_MAX_PATHS,
    max_depth: int = DEFAULT_MAX_DEPTH,
    cache: Optional[TreeCache] = None,
) -> tuple[TaskTree, list[SubstitutionRecord]]:
    """Plan an ingredient the network has never seen.

    The nearest known ingredient under the embedding stands in: its
    subtree is retrieved (with a state substitution if even the stand-in
    cannot reach the requested state) and every occurrence of its name is
    rewritten to the requested one. Confidence is the cosine similarity
    of the pair, as a percentage.
    """
    stand_in, confidence = nearest_ingredient(table, name, foon.ingredient_names())
    records: list[SubstitutionRecord] = [
        SubstitutionRecord("object", original=stand_in, replacement=ObjectNode(name).name,
                           confidence=max(0.0, confidence))
    ]
    try:
        subtree = retrieve_subtree(
            foon, table, config, kitchen, stand_in, state, request,
            max_paths=max_paths, max_depth=max_depth, cache=cache,
        )
    except _MissingState:
        subtree, state_records = substitute_state(
            foon, table, config, kitchen, state_classes, stats, stand_in, state, request,
            max_paths=max_paths, max_depth=max_depth, cache=cache,
        )
        records.extend(state_records)
    renamed = _rename_object(subtree, stand_in, ObjectNode(name).name)
    if not renamed.units and not base_available(renamed.goal, kitchen):
        raise SubstitutionError(
            f"substituting '{name}' by '{stand_in}' bottoms out at a kitchen item "
            f"'{stand_in}' that has no counterpart for '{name}'"
        )
    return renamed, records


def _rename_object(tree: TaskTree, old: str, new: str) -> TaskTree:
    def fix_node(node: ObjectNode) -> ObjectNode:
        name = new if node.name == old else node.name
        ingredients = tuple(new if i == old else i for i in node.ingredients)
        if name == node.name and ingredients == node.ingredients:
            return node
        return ObjectNode(name, node.states, ingredients, node.location)

    units = tuple(
        FunctionalUnit(
            tuple(fix_node(n) for n in u.inputs),
            u.motion,
            tuple(fix_node(n) for n in u.outputs),
        )
        for u in tree.units
    )
    return TaskTree(units, fix_node(tree.goal), tree.provenance)


def integrate_subtree(
    tree: TaskTree,
    subtree: TaskTree,
    policy: IntegrationPolicy,
) -> TaskTree:
    """Splice a repaired subtree into the earliest accepting unit.

    The subtree's units are inserted just before the first unit whose
    verb the integration policy accepts; that unit gains the subtree's
    goal as an input and its composite outputs learn the new ingredient
    name. Later composites with the same name pick the name up too, so
    the final dish still knows what went into it. An empty subtree adds
    only the input: the ingredient comes straight from the kitchen.
    """
    accept_at = None
    for idx, unit in enumerate(tree.units):
        if policy.accepts(unit.motion.verb):
            accept_at = idx
            break
    if accept_at is None:
        verbs = ", ".join(sorted(policy.accepting_verbs))
        raise IntegrationError(
            f"the reference tree has no unit that can accept '{subtree.goal.name}' "
            f"(accepting verbs: {verbs})"
        )
    added = subtree.goal.name
    existing = set(tree.units)
    spliced = [u for u in subtree.units if u not in existing]

    accepting = tree.units[accept_at]
    new_inputs = accepting.inputs + (subtree.goal,)
    listed = [n for n in accepting.outputs if n.ingredients]
    carrying: set = set()
    new_outputs = []
    fallback_done = False
    for node in accepting.outputs:
        if node.ingredients:
            extended = _extend_list(node, added)
            new_outputs.append(extended)
            carrying.add(extended.key)
        elif not listed and not fallback_done and node.name != added:
            extended = _extend_list(node, added)
            new_outputs.append(extended)
            carrying.add(extended.key)
            fallback_done = True
        else:
            new_outputs.append(node)
    new_accepting = FunctionalUnit(new_inputs, accepting.motion, tuple(new_outputs))

    units = list(tree.units[:accept_at]) + spliced + [new_accepting]
    for unit in tree.units[accept_at + 1:]:
        units.append(_propagate(unit, carrying, added))
    return TaskTree(tuple(units), tree.goal, tree.provenance)


def _extend_list(node: ObjectNode, name: str) -> ObjectNode:
    if name in node.ingredients:
        return node
    return ObjectNode(node.name, node.states, node.ingredients + (name,), node.location)


def _propagate(unit: FunctionalUnit, carrying: set, added: str) -> FunctionalUnit:
    """Push the new name along the consumption chain of edited outputs.

    ``carrying`` holds the node keys known to contain the added
    ingredient; a unit consuming one passes the name on to its own
    composite outputs, so the final dish lists everything in it.
    """
    if not any(n.key in carrying for n in unit.inputs):
        return unit
    new_inputs = tuple(
        _extend_list(n, added) if n.key in carrying and n.ingredients else n
        for n in unit.inputs
    )
    new_outputs = []
    for node in unit.outputs:
        if node.ingredients:
            extended = _extend_list(node, added)
            new_outputs.append(extended)
            carrying.add(extended.key)
        else:
            new_outputs.append(node)
    return FunctionalUnit(new_inputs, unit.motion, tuple(new_outputs))


def remove_extraneous(
    tree: TaskTree,
    requested_names: Sequence[str],
    utensils: frozenset[str],
    kitchen: KitchenModel,
) -> TaskTree:
    """Delete every leaf ingredient the request did not ask for.

    Composites (nodes carrying an ingredient list) and utensils stay;
    their lists are cleaned to the requested names. A unit that loses all
    the leaf ingredients it had is deleted, and consumers of its outputs
    are rewired to its same-named inputs, which hands a container chain
    back its earlier, emptier stage. Removal that disconnects the goal is
    an error.
    """
    wanted = set(requested_names)

    def leaf(node: ObjectNode) -> bool:
        return not node.ingredients and node.name not in utensils

    def removable(node: ObjectNode) -> bool:
        return leaf(node) and node.name not in wanted and node.name != tree.goal.name

    def clean(node: ObjectNode) -> ObjectNode:
        kept = tuple(i for i in node.ingredients if i in wanted)
        if kept == node.ingredients:
            return node
        return ObjectNode(node.name, node.states, kept, node.location)

    units = list(tree.units)
    while True:
        replacements: dict = {}
        dropped_keys: set = set()
        next_units: list[FunctionalUnit] = []
        deleted_any = False
        for unit in units:
            had_leaf_ing = any(leaf(n) for n in unit.inputs)
            inputs = tuple(clean(n) for n in unit.inputs if not removable(n))
            outputs = tuple(clean(n) for n in unit.outputs if not removable(n))
            has_leaf_ing = any(leaf(n) for n in inputs)
            if (had_leaf_ing and not has_leaf_ing) or not inputs or not outputs:
                deleted_any = True
                for node in unit.outputs:
                    same_name = next((i for i in unit.inputs if i.name == node.name), None)
                    if same_name is not None and not removable(same_name):
                        replacements[node.key] = clean(same_name)
                    else:
                        dropped_keys.add(node.key)
                continue
            next_units.append(FunctionalUnit(inputs, unit.motion, outputs))
        if replacements or dropped_keys:
            rewired = []
            for unit in next_units:
                inputs = tuple(
                    replacements.get(n.key, n)
                    for n in unit.inputs
                    if n.key not in dropped_keys or n.key in replacements
                )
                if not inputs:
                    deleted_any = True
                    continue
                rewired.append(FunctionalUnit(inputs, unit.motion, unit.outputs))
            next_units = rewired
        units = next_units
        if not deleted_any:
            break

    produced = {key for unit in units for key in unit.output_keys()}
    if units and tree.goal.key not in produced:
        raise PlanningError(
            f"removing unrequested ingredients disconnected the goal "
            f"'{tree.goal.name}'; the request cannot make this dish"
        )
    if not units and not base_available(tree.goal, kitchen):
        raise PlanningError(
            f"removing unrequested ingredients deleted every unit producing "
            f"'{tree.goal.name}'"
        )
    goal = clean(tree.goal)
    return TaskTree(tuple(units), goal, tree.provenance)


def construct_final_task_tree(
    foon: UniversalFoon,
    table: EmbeddingTable,
    config: SimilarityConfig,
    kitchen: KitchenModel,
    state_classes: StateClassConfig,
    policy: IntegrationPolicy,
    request: PlanningRequest,
    *,
    max_paths: int = DEFAULT_MAX_PATHS,
    max_depth: int = DEFAULT_MAX_DEPTH,
    cache: Optional[TreeCache] = None,
) -> tuple[TaskTree, GoalSelection]:
    """The full pipeline: select goal, retrieve, repair, prune, validate."""
    for name in request.names:
        if kitchen.is_utensil(name):
            raise PlanningError(
                f"requested ingredient '{name}' is a utensil; utensils are assumed "
                f"present and cannot be cooked"
            )
    selection = identify_goal_node(foon, table, config, request)
    tree = retrieve_reference_task_tree(
        foon, table, config, kitchen, selection.goal, request.ingredients,
        max_paths=max_paths, max_depth=max_depth, cache=cache,
    )
    stats = build_motion_stats(foon)
    records: list[SubstitutionRecord] = []
    for name, state in request.ingredients:
        if _appears_as_input(tree, name, state):
            continue
        if foon.has_object_named(name):
            try:
                subtree = retrieve_subtree(
                    foon, table, config, kitchen, name, state, request,
                    max_paths=max_paths, max_depth=max_depth, cache=cache,
                )
                new_records: list[SubstitutionRecord] = []
            except _MissingState:
                subtree, new_records = substitute_state(
                    foon, table, config, kitchen, state_classes, stats, name, state, request,
                    max_paths=max_paths, max_depth=max_depth, cache=cache,
                )
        else:
            subtree, new_records = substitute_object(
                foon, table, config, kitchen, state_classes, stats, name, state, request,
                max_paths=max_paths, max_depth=max_depth, cache=cache,
            )
        tree = integrate_subtree(tree, subtree, policy)
        records.extend(new_records)

    tree = remove_extraneous(tree, request.names, foon.utensils, kitchen)

    for name, state in request.ingredients:
        if not _present_anywhere(tree, name):
            raise IntegrationError(
                f"requested ingredient '{name}' is missing from the final tree"
            )
    problems = validate_tree(TaskTree(tree.units, tree.goal), kitchen)
    if problems:
        raise PlanningError(
            "final tree is not executable: " + "; ".join(problems)
        )
    goal = _final_goal_node(tree)
    return TaskTree(tree.units, goal, tuple(records)), selection


def _final_goal_node(tree: TaskTree) -> ObjectNode:
    """The goal as the tree actually produces it.

    Integration may have widened the final composite's ingredient list, so
    the last unit producing the goal key is more truthful than the goal
    node the reference recipe started from.
    """
    for unit in reversed(tree.units):
        for node in unit.outputs:
            if node.key == tree.goal.key:
                return node
    return tree.goal


def _appears_as_input(tree: TaskTree, name: str, state: str) -> bool:
    target = StateLabel(state).label
    for unit in tree.units:
        for node in unit.inputs:
            if node.name == name and target in node.state_labels:
                return True
    return False


def _present_anywhere(tree: TaskTree, name: str) -> bool:
    for unit in tree.units:
        for node in (*unit.inputs, *unit.outputs):
            if node.name == name or name in node.ingredients:
                return True
    return False
