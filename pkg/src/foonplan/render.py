"""Graphviz DOT rendering for task trees.

Object nodes are ellipses colored by role (starting inputs green,
intermediates yellow, final outputs blue) and motions are red boxes.
The output is plain DOT text; any Graphviz install can rasterize it.
"""

from __future__ import annotations

from .kitchen import KitchenModel, base_available
from .model import ObjectNode, TaskTree

_INPUT_FILL = "#a9f5a9"
_MIDDLE_FILL = "#f2f5a9"
_OUTPUT_FILL = "#2e64fe"
_MOTION_FILL = "#f78181"


def _node_label(node: ObjectNode) -> str:
    parts = [node.name]
    for state in node.states:
        if state.argument:
            parts.append(f"{state.label}({state.argument})")
        else:
            parts.append(state.label)
    if node.ingredients:
        parts.append("{" + ", ".join(node.ingredients) + "}")
    if node.location:
        parts.append(f"[{node.location}]")
    return "\\n".join(parts)


def _escape(text: str) -> str:
    return text.replace('"', '\\"')


def render_tree_dot(tree: TaskTree, kitchen: KitchenModel) -> str:
    """Deterministic DOT text for a task tree."""
    produced = {key for unit in tree.units for key in unit.output_keys()}
    consumed = {key for unit in tree.units for key in unit.input_keys()}

    node_ids: dict[ObjectNode, str] = {}
    order: list[ObjectNode] = []

    def identify(node: ObjectNode) -> str:
        if node not in node_ids:
            node_ids[node] = f"o{len(node_ids)}"
            order.append(node)
        return node_ids[node]

    lines = [
        "digraph task_tree {",
        "  rankdir=LR;",
        '  node [style=filled, fontname="Helvetica"];',
    ]
    edges = []
    for idx, unit in enumerate(tree.units):
        motion_id = f"m{idx}"
        weight = "" if unit.motion.weight is None else f"\\n{unit.motion.weight:g}"
        lines.append(
            f'  {motion_id} [shape=box, fillcolor="{_MOTION_FILL}", '
            f'label="{_escape(unit.motion.verb)}{weight}"];'
        )
        for node in unit.inputs:
            edges.append(f"  {identify(node)} -> {motion_id};")
        for node in unit.outputs:
            edges.append(f"  {motion_id} -> {identify(node)};")

    for node in order:
        starting = node.key not in produced and (
            base_available(node, kitchen) or node.key in consumed
        )
        final = node.key not in consumed and node.key in produced
        if starting:
            fill, font = _INPUT_FILL, "black"
        elif final:
            fill, font = _OUTPUT_FILL, "white"
        else:
            fill, font = _MIDDLE_FILL, "black"
        lines.append(
            f'  {node_ids[node]} [shape=ellipse, fillcolor="{fill}", '
            f'fontcolor="{font}", label="{_escape(_node_label(node))}"];'
        )
    lines.extend(edges)
    lines.append("}")
    return "\n".join(lines) + "\n"
