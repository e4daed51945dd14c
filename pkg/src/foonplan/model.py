"""Core graph model: object nodes, motion nodes, functional units, subgraphs.

A functional unit pairs a set of input object nodes with a motion and the
set of output object nodes the motion produces. A subgraph is one recipe
worth of units; a task tree is an executable ordering of units ending at
a goal object.

Equality is structural and order-insensitive where the data is a set
(states, ingredient lists, unit inputs and outputs). Node locations take
part in node equality but are excluded from retrieval keys, so a search
for a sliced onion matches no matter which board it sits on.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from collections import Counter
from typing import Iterable, Optional

from .errors import GraphValidationError

_WS = re.compile(r"\s+")


def normalize_name(text: str) -> str:
    """Lowercase, trim, and collapse internal whitespace."""
    return _WS.sub(" ", text.strip().lower())


NodeKey = tuple[str, frozenset]


@dataclass(frozen=True)
class StateLabel:
    """One state of an object, optionally relating it to another object.

    The argument covers annotations such as a "contains" state naming what
    is contained. Plain physical states (whole, sliced, boiled) have none.
    """

    label: str
    argument: Optional[str] = None

    def __post_init__(self):
        label = normalize_name(self.label)
        if not label:
            raise GraphValidationError("state label must be non-empty")
        object.__setattr__(self, "label", label)
        if self.argument is not None:
            arg = normalize_name(self.argument)
            object.__setattr__(self, "argument", arg or None)


@dataclass(frozen=True, eq=False)
class ObjectNode:
    """An object in a particular state, possibly a composite.

    ``ingredients`` lists the names a composite carries (a salad knows it
    contains onion and tomato). ``location`` is the bracket-style relation
    to a container or surface and is execution detail: two nodes that
    differ only in location compare unequal but share a retrieval key.
    """

    name: str
    states: tuple[StateLabel, ...] = ()
    ingredients: tuple[str, ...] = ()
    location: Optional[str] = None

    def __post_init__(self):
        name = normalize_name(self.name)
        if not name:
            raise GraphValidationError("object name must be non-empty")
        object.__setattr__(self, "name", name)

        states = tuple(s if isinstance(s, StateLabel) else StateLabel(s) for s in self.states)
        seen: dict[tuple, StateLabel] = {}
        for s in states:
            seen.setdefault((s.label, s.argument), s)
        object.__setattr__(self, "states", tuple(seen.values()))

        ings = []
        for ing in self.ingredients:
            norm = normalize_name(ing)
            if norm and norm not in ings:
                ings.append(norm)
        object.__setattr__(self, "ingredients", tuple(ings))

        if self.location is not None:
            loc = normalize_name(self.location)
            object.__setattr__(self, "location", loc or None)

    @property
    def state_labels(self) -> tuple[str, ...]:
        return tuple(s.label for s in self.states)

    @property
    def key(self) -> NodeKey:
        """Identity used for producer and consumer lookups: location-free."""
        return (self.name, frozenset((s.label, s.argument) for s in self.states))

    def _identity(self):
        return (
            self.name,
            frozenset((s.label, s.argument) for s in self.states),
            frozenset(self.ingredients),
            self.location,
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, ObjectNode):
            return NotImplemented
        return self._identity() == other._identity()

    def __hash__(self) -> int:
        return hash(self._identity())

    def __repr__(self) -> str:
        parts = [self.name]
        if self.states:
            parts.append("{" + ",".join(self.state_labels) + "}")
        if self.ingredients:
            parts.append("[" + ",".join(self.ingredients) + "]")
        if self.location:
            parts.append(f"@{self.location}")
        return "ObjectNode(" + "".join(parts) + ")"


@dataclass(frozen=True)
class MotionNode:
    """A manipulation verb with an optional success weight in [0, 1].

    The weight is carried through serialization but nothing optimizes
    over it; planning treats motions purely by verb.
    """

    verb: str
    weight: Optional[float] = None

    def __post_init__(self):
        verb = normalize_name(self.verb)
        if not verb:
            raise GraphValidationError("motion verb must be non-empty")
        object.__setattr__(self, "verb", verb)
        if self.weight is not None:
            w = float(self.weight)
            if not (0.0 <= w <= 1.0):
                raise GraphValidationError(f"motion weight {w} outside [0, 1]")
            object.__setattr__(self, "weight", w)


@dataclass(frozen=True, eq=False)
class FunctionalUnit:
    """One action: input objects, a motion, output objects.

    Outputs may be fewer than inputs when an object passes through a
    manipulation unchanged and the annotator chose not to repeat it.
    Two units are equal when their verbs match and their input and
    output node multisets match; motion weight does not participate.
    """

    inputs: tuple[ObjectNode, ...]
    motion: MotionNode
    outputs: tuple[ObjectNode, ...]

    def __post_init__(self):
        inputs = tuple(self.inputs)
        outputs = tuple(self.outputs)
        if not inputs:
            raise GraphValidationError(f"unit '{self.motion.verb}' has no inputs")
        if not outputs:
            raise GraphValidationError(f"unit '{self.motion.verb}' has no outputs")
        object.__setattr__(self, "inputs", inputs)
        object.__setattr__(self, "outputs", outputs)

    def _identity(self):
        return (
            self.motion.verb,
            frozenset(Counter(self.inputs).items()),
            frozenset(Counter(self.outputs).items()),
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, FunctionalUnit):
            return NotImplemented
        return self._identity() == other._identity()

    def __hash__(self) -> int:
        return hash(self._identity())

    def input_keys(self) -> tuple[NodeKey, ...]:
        return tuple(n.key for n in self.inputs)

    def output_keys(self) -> tuple[NodeKey, ...]:
        return tuple(n.key for n in self.outputs)

    def __repr__(self) -> str:
        return f"FunctionalUnit({self.motion.verb}: {list(self.inputs)} -> {list(self.outputs)})"


def object_node_equals(a: ObjectNode, b: ObjectNode) -> bool:
    """Structural node equality: name, state set, ingredient set, location."""
    return a == b


def functional_unit_equals(a: FunctionalUnit, b: FunctionalUnit) -> bool:
    """Unit equality: same verb, same input and output node multisets."""
    return a == b


@dataclass(frozen=True)
class Subgraph:
    """One recipe: a non-empty unit sequence plus optional goal and class."""

    id: str
    units: tuple[FunctionalUnit, ...]
    dish_class: Optional[str] = None
    goal: Optional[ObjectNode] = None

    def __post_init__(self):
        ident = self.id.strip()
        if not ident:
            raise GraphValidationError("subgraph id must be non-empty")
        object.__setattr__(self, "id", ident)
        units = tuple(self.units)
        if not units:
            raise GraphValidationError(f"subgraph '{ident}' has no units")
        object.__setattr__(self, "units", units)
        if self.dish_class is not None:
            object.__setattr__(self, "dish_class", self.dish_class.strip() or None)


def derive_goal(subgraph: Subgraph) -> ObjectNode:
    """Return the subgraph's goal node.

    Uses the explicit goal when present. Otherwise the goal is the unique
    object produced by some unit but never consumed by any, compared at
    key level so locations do not split a terminal into two.
    """
    if subgraph.goal is not None:
        return subgraph.goal
    consumed = {n.key for u in subgraph.units for n in u.inputs}
    terminals: dict[NodeKey, ObjectNode] = {}
    for u in subgraph.units:
        for n in u.outputs:
            if n.key not in consumed and n.key not in terminals:
                terminals[n.key] = n
    if len(terminals) != 1:
        names = sorted({f"{n.name}{{{','.join(n.state_labels)}}}" for n in terminals.values()})
        raise GraphValidationError(
            f"subgraph '{subgraph.id}' has no unique terminal output; "
            f"candidates: {names or ['<none>']}"
        )
    return next(iter(terminals.values()))


@dataclass(frozen=True)
class SubstitutionRecord:
    """Provenance for one adaptation made while constructing a tree.

    ``kind`` is "object" or "state". ``original`` is what the network
    knew; ``replacement`` is what the request asked for. ``confidence``
    is 100 times the cosine similarity of the pair under the loaded
    embedding table.
    """

    kind: str
    original: str
    replacement: str
    confidence: float
    note: Optional[str] = None

    def __post_init__(self):
        if self.kind not in ("object", "state"):
            raise GraphValidationError(f"substitution kind must be object or state, got {self.kind!r}")
        if not (0.0 <= self.confidence <= 100.0):
            raise GraphValidationError(f"confidence {self.confidence} outside [0, 100]")


@dataclass(frozen=True)
class TaskTree:
    """An executable unit sequence ending at ``goal``.

    ``units`` may be empty for a goal that is available as-is. Provenance
    records every substitution that was needed to build the tree.
    """

    units: tuple[FunctionalUnit, ...]
    goal: ObjectNode
    provenance: tuple[SubstitutionRecord, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "units", tuple(self.units))
        object.__setattr__(self, "provenance", tuple(self.provenance))


@dataclass(frozen=True)
class PlanningRequest:
    """What the user wants cooked: ingredient (name, state) pairs + dish type."""

    ingredients: tuple[tuple[str, str], ...]
    dish_type: str

    def __post_init__(self):
        pairs = []
        for name, state in self.ingredients:
            pair = (normalize_name(name), normalize_name(state))
            if not pair[0] or not pair[1]:
                raise GraphValidationError("request ingredients need both a name and a state")
            if pair not in pairs:
                pairs.append(pair)
        if not pairs:
            raise GraphValidationError("request has no ingredients")
        object.__setattr__(self, "ingredients", tuple(pairs))
        dish = self.dish_type.strip()
        if not dish:
            raise GraphValidationError("request dish type must be non-empty")
        object.__setattr__(self, "dish_type", dish)

    @property
    def names(self) -> tuple[str, ...]:
        out: list[str] = []
        for name, _ in self.ingredients:
            if name not in out:
                out.append(name)
        return tuple(out)


def ordered_unique(items: Iterable) -> list:
    """Order-preserving dedup; the workhorse for deterministic iteration."""
    return list(dict.fromkeys(items))
