"""Reading and writing every document the toolkit exchanges.

The canonical format is JSON with a fixed field order, so serializing a
parsed document reproduces it byte for byte. The older line-oriented
O/S/M text format is supported for import only. Config files (kitchen,
dish classes, state classes, integration policy) are small JSON
documents validated on load; unknown fields warn and are ignored so old
tools can read files written by newer ones.
"""

from __future__ import annotations

import json
import logging
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional

from .errors import DocumentError
from .kitchen import BaseItem, KitchenModel
from .model import (
    FunctionalUnit,
    MotionNode,
    ObjectNode,
    PlanningRequest,
    StateLabel,
    Subgraph,
    SubstitutionRecord,
    TaskTree,
    normalize_name,
)

log = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# low-level helpers


def write_text_atomic(path: str | Path, text: str) -> None:
    """Write via a temp file in the same directory plus rename.

    Readers never observe a half-written file, and two writers racing on
    the same path leave one complete version.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def dumps_canonical(doc: Any) -> str:
    """The one true JSON rendering: 2-space indent, stable field order."""
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def _load_json(path: str | Path) -> Any:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DocumentError(f"cannot read file: {exc}", source=str(path)) from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"invalid JSON at line {exc.lineno}: {exc.msg}", source=str(path)) from exc


class _Reader:
    """Walks a decoded JSON tree with dotted-path error context."""

    def __init__(self, source: Optional[str]):
        self.source = source

    def fail(self, where: str, message: str):
        raise DocumentError(message, source=self.source, where=where)

    def expect(self, value, types, where: str, label: str):
        if not isinstance(value, types):
            self.fail(where, f"expected {label}, got {type(value).__name__}")
        return value

    def mapping(self, value, where: str, known: tuple[str, ...]):
        self.expect(value, dict, where, "an object")
        for key in value:
            if key not in known:
                log.warning("%s: ignoring unknown field %r at %s", self.source or "<doc>", key, where)
        return value


# ---------------------------------------------------------------------------
# graph documents


def object_to_doc(node: ObjectNode) -> dict:
    doc: dict[str, Any] = {"name": node.name}
    if node.states:
        doc["states"] = [
            {"label": s.label, **({"argument": s.argument} if s.argument else {})}
            for s in node.states
        ]
    if node.ingredients:
        doc["ingredients"] = list(node.ingredients)
    if node.location:
        doc["location"] = node.location
    return doc


def object_from_doc(doc: Any, reader: _Reader, where: str) -> ObjectNode:
    reader.mapping(doc, where, ("name", "states", "ingredients", "location"))
    name = reader.expect(doc.get("name"), str, f"{where}.name", "a string")
    states = []
    raw_states = doc.get("states", [])
    reader.expect(raw_states, list, f"{where}.states", "a list")
    for i, s in enumerate(raw_states):
        sw = f"{where}.states[{i}]"
        reader.mapping(s, sw, ("label", "argument"))
        label = reader.expect(s.get("label"), str, f"{sw}.label", "a string")
        argument = s.get("argument")
        if argument is not None:
            reader.expect(argument, str, f"{sw}.argument", "a string")
        states.append(StateLabel(label, argument))
    ingredients = doc.get("ingredients", [])
    reader.expect(ingredients, list, f"{where}.ingredients", "a list")
    for i, ing in enumerate(ingredients):
        reader.expect(ing, str, f"{where}.ingredients[{i}]", "a string")
    location = doc.get("location")
    if location is not None:
        reader.expect(location, str, f"{where}.location", "a string")
    return ObjectNode(name, tuple(states), tuple(ingredients), location)


def unit_to_doc(unit: FunctionalUnit) -> dict:
    motion: dict[str, Any] = {"verb": unit.motion.verb}
    if unit.motion.weight is not None:
        motion["weight"] = unit.motion.weight
    return {
        "inputs": [object_to_doc(n) for n in unit.inputs],
        "motion": motion,
        "outputs": [object_to_doc(n) for n in unit.outputs],
    }


def unit_from_doc(doc: Any, reader: _Reader, where: str) -> FunctionalUnit:
    reader.mapping(doc, where, ("inputs", "motion", "outputs"))
    raw_inputs = reader.expect(doc.get("inputs"), list, f"{where}.inputs", "a list")
    raw_outputs = reader.expect(doc.get("outputs"), list, f"{where}.outputs", "a list")
    motion_doc = doc.get("motion")
    reader.mapping(motion_doc, f"{where}.motion", ("verb", "weight"))
    verb = reader.expect(motion_doc.get("verb"), str, f"{where}.motion.verb", "a string")
    weight = motion_doc.get("weight")
    if weight is not None and not isinstance(weight, (int, float)):
        reader.fail(f"{where}.motion.weight", "expected a number")
    inputs = [object_from_doc(d, reader, f"{where}.inputs[{i}]") for i, d in enumerate(raw_inputs)]
    outputs = [object_from_doc(d, reader, f"{where}.outputs[{i}]") for i, d in enumerate(raw_outputs)]
    return FunctionalUnit(tuple(inputs), MotionNode(verb, weight), tuple(outputs))


def subgraph_to_doc(subgraph: Subgraph) -> dict:
    doc: dict[str, Any] = {"id": subgraph.id}
    if subgraph.dish_class:
        doc["dish_class"] = subgraph.dish_class
    if subgraph.goal is not None:
        doc["goal"] = object_to_doc(subgraph.goal)
    doc["units"] = [unit_to_doc(u) for u in subgraph.units]
    return doc


def subgraph_from_doc(doc: Any, source: Optional[str] = None) -> Subgraph:
    reader = _Reader(source)
    reader.mapping(doc, "$", ("id", "dish_class", "goal", "units"))
    ident = reader.expect(doc.get("id"), str, "$.id", "a string")
    dish_class = doc.get("dish_class")
    if dish_class is not None:
        reader.expect(dish_class, str, "$.dish_class", "a string")
    goal = None
    if doc.get("goal") is not None:
        goal = object_from_doc(doc["goal"], reader, "$.goal")
    raw_units = reader.expect(doc.get("units"), list, "$.units", "a list")
    if not raw_units:
        reader.fail("$.units", "a subgraph needs at least one unit")
    units = [unit_from_doc(d, reader, f"$.units[{i}]") for i, d in enumerate(raw_units)]
    return Subgraph(ident, tuple(units), dish_class, goal)


def load_subgraph(path: str | Path) -> Subgraph:
    return subgraph_from_doc(_load_json(path), source=str(path))


def save_subgraph(path: str | Path, subgraph: Subgraph) -> None:
    write_text_atomic(path, dumps_canonical(subgraph_to_doc(subgraph)))


def tree_to_doc(tree: TaskTree) -> dict:
    doc: dict[str, Any] = {"goal": object_to_doc(tree.goal)}
    doc["units"] = [unit_to_doc(u) for u in tree.units]
    doc["substitutions"] = [record_to_doc(r) for r in tree.provenance]
    return doc


def record_to_doc(record: SubstitutionRecord) -> dict:
    doc: dict[str, Any] = {
        "kind": record.kind,
        "original": record.original,
        "replacement": record.replacement,
        "confidence": record.confidence,
    }
    if record.note:
        doc["note"] = record.note
    return doc


def record_from_doc(doc: Any, reader: _Reader, where: str) -> SubstitutionRecord:
    reader.mapping(doc, where, ("kind", "original", "replacement", "confidence", "note"))
    kind = reader.expect(doc.get("kind"), str, f"{where}.kind", "a string")
    original = reader.expect(doc.get("original"), str, f"{where}.original", "a string")
    replacement = reader.expect(doc.get("replacement"), str, f"{where}.replacement", "a string")
    confidence = doc.get("confidence")
    if not isinstance(confidence, (int, float)):
        reader.fail(f"{where}.confidence", "expected a number")
    note = doc.get("note")
    if note is not None:
        reader.expect(note, str, f"{where}.note", "a string")
    return SubstitutionRecord(kind, original, replacement, float(confidence), note)


def tree_from_doc(doc: Any, source: Optional[str] = None) -> TaskTree:
    reader = _Reader(source)
    reader.mapping(doc, "$", ("goal", "units", "substitutions"))
    if doc.get("goal") is None:
        reader.fail("$.goal", "a task tree needs a goal")
    goal = object_from_doc(doc["goal"], reader, "$.goal")
    raw_units = reader.expect(doc.get("units", []), list, "$.units", "a list")
    units = [unit_from_doc(d, reader, f"$.units[{i}]") for i, d in enumerate(raw_units)]
    raw_records = reader.expect(doc.get("substitutions", []), list, "$.substitutions", "a list")
    records = [record_from_doc(d, reader, f"$.substitutions[{i}]") for i, d in enumerate(raw_records)]
    return TaskTree(tuple(units), goal, tuple(records))


def load_tree(path: str | Path) -> TaskTree:
    return tree_from_doc(_load_json(path), source=str(path))


def save_tree(path: str | Path, tree: TaskTree) -> None:
    write_text_atomic(path, dumps_canonical(tree_to_doc(tree)))


# ---------------------------------------------------------------------------
# legacy line-oriented import

_STATE_ARGUMENT_LABELS = ("contains",)


def parse_legacy_units(text: str, source: Optional[str] = None) -> list[FunctionalUnit]:
    """Parse the tab-separated O/S/M text format.

    Units are separated by ``//`` lines. Object lines before the motion
    line are inputs, lines after it are outputs. State lines attach to the
    most recent object: a ``{a,b}`` suffix fills the ingredient list, a
    ``[place]`` suffix sets the node location. Trailing numeric columns
    from released datasets are accepted and ignored.
    """

    units: list[FunctionalUnit] = []
    cur_inputs: list[ObjectNode] = []
    cur_outputs: list[ObjectNode] = []
    motion: Optional[MotionNode] = None
    pending: Optional[dict] = None

    def flush_object():
        nonlocal pending
        if pending is None:
            return
        node = ObjectNode(
            pending["name"],
            tuple(pending["states"]),
            tuple(pending["ingredients"]),
            pending["location"],
        )
        (cur_outputs if motion is not None else cur_inputs).append(node)
        pending = None

    def flush_unit(line_no: int):
        nonlocal motion
        flush_object()
        if not cur_inputs and not cur_outputs and motion is None:
            return
        if motion is None:
            raise DocumentError("unit ended without a motion line", source=source, where=f"line {line_no}")
        units.append(FunctionalUnit(tuple(cur_inputs), motion, tuple(cur_outputs)))
        cur_inputs.clear()
        cur_outputs.clear()
        motion = None

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip()
        if not line.strip():
            continue
        if line.startswith("//"):
            flush_unit(line_no)
            continue
        if line.startswith("#"):
            continue
        fields = [f for f in line.split("\t") if f.strip()]
        tag = fields[0].strip()
        kind = tag[0].upper()
        if kind == "O":
            flush_object()
            if len(fields) < 2:
                raise DocumentError("object line is missing a name", source=source, where=f"line {line_no}")
            pending = {"name": fields[1], "states": [], "ingredients": [], "location": None}
        elif kind == "S":
            if pending is None:
                raise DocumentError("state line with no preceding object", source=source, where=f"line {line_no}")
            if len(fields) < 2:
                raise DocumentError("state line is missing a label", source=source, where=f"line {line_no}")
            label = fields[1].strip()
            for extra in fields[2:]:
                extra = extra.strip()
                if extra.startswith("{") and extra.endswith("}"):
                    names = [n for n in extra[1:-1].split(",") if n.strip()]
                    pending["ingredients"].extend(names)
                elif extra.startswith("[") and extra.endswith("]"):
                    pending["location"] = extra[1:-1]
            if label:
                pending["states"].append(StateLabel(label))
        elif kind == "M":
            flush_object()
            if motion is not None:
                raise DocumentError("unit has two motion lines", source=source, where=f"line {line_no}")
            if len(fields) < 2:
                raise DocumentError("motion line is missing a verb", source=source, where=f"line {line_no}")
            weight = None
            if len(fields) >= 3:
                try:
                    candidate = float(fields[2])
                except ValueError:
                    candidate = None
                if candidate is not None and 0.0 <= candidate <= 1.0:
                    weight = candidate
            motion = MotionNode(fields[1], weight)
        else:
            raise DocumentError(f"unrecognized record tag {tag!r}", source=source, where=f"line {line_no}")
    flush_unit(line_no=len(text.splitlines()) + 1)
    if not units:
        raise DocumentError("no functional units found", source=source)
    return units


def load_legacy_subgraph(path: str | Path, dish_class: Optional[str] = None) -> Subgraph:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DocumentError(f"cannot read file: {exc}", source=str(path)) from exc
    units = parse_legacy_units(text, source=str(path))
    return Subgraph(path.stem, tuple(units), dish_class)


# ---------------------------------------------------------------------------
# config documents


@dataclass(frozen=True)
class DishClassConfig:
    """Declared dish classes plus the recipe-to-class assignment."""

    classes: tuple[str, ...]
    assignment: dict[str, str]

    def __post_init__(self):
        unknown = sorted({c for c in self.assignment.values()} - set(self.classes))
        if unknown:
            raise DocumentError(f"assignment uses undeclared dish classes: {unknown}")


@dataclass(frozen=True)
class StateClassConfig:
    """State taxonomy: each physical state label maps to one class."""

    classes: tuple[str, ...]
    assignment: dict[str, str]

    def __post_init__(self):
        unknown = sorted({c for c in self.assignment.values()} - set(self.classes))
        if unknown:
            raise DocumentError(f"assignment uses undeclared state classes: {unknown}")

    def class_of(self, state: str) -> Optional[str]:
        return self.assignment.get(normalize_name(state))

    def analogs(self, state: str) -> list[str]:
        """Other states sharing ``state``'s class, sorted for determinism."""
        cls = self.class_of(state)
        if cls is None:
            return []
        norm = normalize_name(state)
        return sorted(s for s, c in self.assignment.items() if c == cls and s != norm)


@dataclass(frozen=True)
class IntegrationPolicy:
    """Verbs of units that can accept an extra poured or mixed-in input."""

    accepting_verbs: frozenset[str]

    def accepts(self, verb: str) -> bool:
        return normalize_name(verb) in self.accepting_verbs


def load_kitchen(path: str | Path) -> KitchenModel:
    doc = _load_json(path)
    reader = _Reader(str(path))
    reader.mapping(doc, "$", ("base_items", "utensils"))
    raw_items = reader.expect(doc.get("base_items", []), list, "$.base_items", "a list")
    items = []
    for i, item in enumerate(raw_items):
        where = f"$.base_items[{i}]"
        reader.mapping(item, where, ("name", "states", "location"))
        name = reader.expect(item.get("name"), str, f"{where}.name", "a string")
        states = reader.expect(item.get("states", []), list, f"{where}.states", "a list")
        for j, s in enumerate(states):
            reader.expect(s, str, f"{where}.states[{j}]", "a string")
        location = item.get("location")
        if location is not None:
            reader.expect(location, str, f"{where}.location", "a string")
        items.append(BaseItem(name, frozenset(states), location))
    raw_utensils = reader.expect(doc.get("utensils", []), list, "$.utensils", "a list")
    for i, u in enumerate(raw_utensils):
        reader.expect(u, str, f"$.utensils[{i}]", "a string")
    return KitchenModel(tuple(items), frozenset(raw_utensils))


def load_dish_classes(path: str | Path) -> DishClassConfig:
    doc = _load_json(path)
    reader = _Reader(str(path))
    reader.mapping(doc, "$", ("classes", "assignment"))
    classes = reader.expect(doc.get("classes"), list, "$.classes", "a list")
    for i, c in enumerate(classes):
        reader.expect(c, str, f"$.classes[{i}]", "a string")
    assignment = reader.expect(doc.get("assignment", {}), dict, "$.assignment", "an object")
    for key, value in assignment.items():
        reader.expect(value, str, f"$.assignment.{key}", "a string")
    return DishClassConfig(tuple(classes), dict(assignment))


def load_state_classes(path: str | Path) -> StateClassConfig:
    doc = _load_json(path)
    reader = _Reader(str(path))
    reader.mapping(doc, "$", ("classes", "assignment"))
    classes = reader.expect(doc.get("classes"), list, "$.classes", "a list")
    for i, c in enumerate(classes):
        reader.expect(c, str, f"$.classes[{i}]", "a string")
    assignment = reader.expect(doc.get("assignment", {}), dict, "$.assignment", "an object")
    normalized = {}
    for key, value in assignment.items():
        reader.expect(value, str, f"$.assignment.{key}", "a string")
        normalized[normalize_name(key)] = value
    return StateClassConfig(tuple(classes), normalized)


def load_integration_policy(path: str | Path) -> IntegrationPolicy:
    doc = _load_json(path)
    reader = _Reader(str(path))
    reader.mapping(doc, "$", ("accepting_verbs",))
    verbs = reader.expect(doc.get("accepting_verbs"), list, "$.accepting_verbs", "a list")
    for i, v in enumerate(verbs):
        reader.expect(v, str, f"$.accepting_verbs[{i}]", "a string")
    return IntegrationPolicy(frozenset(normalize_name(v) for v in verbs))


def load_request(path: str | Path) -> PlanningRequest:
    doc = _load_json(path)
    reader = _Reader(str(path))
    reader.mapping(doc, "$", ("dish_type", "ingredients"))
    dish = reader.expect(doc.get("dish_type"), str, "$.dish_type", "a string")
    raw = reader.expect(doc.get("ingredients"), list, "$.ingredients", "a list")
    pairs = []
    for i, entry in enumerate(raw):
        where = f"$.ingredients[{i}]"
        reader.mapping(entry, where, ("name", "state"))
        name = reader.expect(entry.get("name"), str, f"{where}.name", "a string")
        state = reader.expect(entry.get("state"), str, f"{where}.state", "a string")
        pairs.append((name, state))
    return PlanningRequest(tuple(pairs), dish)


def request_to_doc(request: PlanningRequest) -> dict:
    return {
        "dish_type": request.dish_type,
        "ingredients": [{"name": n, "state": s} for n, s in request.ingredients],
    }


# ---------------------------------------------------------------------------
# annotations


def load_annotation(path: str | Path) -> dict:
    doc = _load_json(path)
    return annotation_from_doc(doc, source=str(path))


def annotation_from_doc(doc: Any, source: Optional[str] = None) -> dict:
    """Validate {recipe_id, scores:{ingredient: 0|1|2}} and return it."""
    reader = _Reader(source)
    reader.mapping(doc, "$", ("recipe_id", "scores"))
    recipe_id = reader.expect(doc.get("recipe_id"), str, "$.recipe_id", "a string")
    scores = reader.expect(doc.get("scores"), dict, "$.scores", "an object")
    clean: dict[str, int] = {}
    for key, value in scores.items():
        if not isinstance(value, int) or isinstance(value, bool) or value not in (0, 1, 2):
            reader.fail(f"$.scores.{key}", f"score must be 0, 1, or 2, got {value!r}")
        clean[normalize_name(key)] = value
    return {"recipe_id": recipe_id, "scores": clean}


def annotation_to_doc(recipe_id: str, scores: dict[str, int]) -> dict:
    return {"recipe_id": recipe_id, "scores": {k: scores[k] for k in sorted(scores)}}
