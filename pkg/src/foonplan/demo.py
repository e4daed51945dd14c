"""A small but complete demo dataset: recipes, kitchen, embeddings.

Seven recipe subgraphs (three salads, two omelettes, two drinks) merge
into a network whose five food recipes share prep units and goal keys,
so retrieval has real alternatives to choose between. The embedding
table pins down a handful of engineered neighbor pairs (shallot/onion,
zucchini/cucumber, prunes/strawberry, romaine/lettuce) with exact
components, which makes substitution arithmetic reproducible to the
last bit. ``write_demo`` lays the whole dataset out as files for the
CLI walkthrough.
"""

from __future__ import annotations

from pathlib import Path

from .documents import (
    DishClassConfig,
    IntegrationPolicy,
    StateClassConfig,
    dumps_canonical,
    request_to_doc,
    subgraph_to_doc,
    write_text_atomic,
)
from .kitchen import BaseItem, KitchenModel
from .model import (
    FunctionalUnit,
    MotionNode,
    ObjectNode,
    PlanningRequest,
    StateLabel,
    Subgraph,
)

UTENSILS = frozenset(
    {
        "knife", "cutting board", "bowl", "plate", "pot", "pan", "whisk",
        "grater", "blender", "glass", "jug", "spoon", "fork",
    }
)


def _node(name, states=(), ingredients=(), location=None) -> ObjectNode:
    labels = tuple(
        StateLabel(*s) if isinstance(s, tuple) else StateLabel(s) for s in states
    )
    return ObjectNode(name, labels, tuple(ingredients), location)


def _unit(inputs, verb, outputs, weight=None) -> FunctionalUnit:
    return FunctionalUnit(tuple(inputs), MotionNode(verb, weight), tuple(outputs))


def greek_salad() -> Subgraph:
    knife = _node("knife")
    bowl = _node("bowl", ["empty"])
    mixed = _node(
        "greek salad", ["mixed"],
        ["onion", "cucumber", "tomato", "feta cheese"], "bowl",
    )
    seasoned = _node(
        "greek salad", ["seasoned"],
        ["onion", "cucumber", "tomato", "feta cheese", "oregano"], "bowl",
    )
    dressed = _node(
        "greek salad", ["dressed"],
        ["onion", "cucumber", "tomato", "feta cheese", "oregano", "olive oil"], "bowl",
    )
    units = (
        _unit([_node("onion", ["whole"]), knife], "slice",
              [_node("onion", ["sliced"]), knife], 0.95),
        _unit([_node("cucumber", ["whole"]), knife], "slice",
              [_node("cucumber", ["sliced"]), knife], 0.95),
        _unit([_node("tomato", ["whole"]), knife], "slice",
              [_node("tomato", ["sliced"]), knife], 0.9),
        _unit([_node("feta cheese", ["whole"])], "crumble",
              [_node("feta cheese", ["crumbled"])], 0.85),
        _unit(
            [
                _node("onion", ["sliced"]),
                _node("cucumber", ["sliced"]),
                _node("tomato", ["sliced"]),
                _node("feta cheese", ["crumbled"]),
                bowl,
            ],
            "mix",
            [mixed],
            0.9,
        ),
        _unit([mixed, _node("oregano", ["dried"])], "sprinkle", [seasoned], 0.95),
        _unit([seasoned, _node("olive oil", ["liquid"])], "drizzle", [dressed], 0.95),
    )
    return Subgraph("greek_salad", units)


def garden_salad() -> Subgraph:
    knife = _node("knife")
    bowl = _node("bowl", ["empty"])
    mixed = _node(
        "garden salad", ["mixed"], ["lettuce", "tomato", "cucumber"], "bowl"
    )
    seasoned = _node(
        "garden salad", ["seasoned"], ["lettuce", "tomato", "cucumber", "salt"], "bowl"
    )
    units = (
        _unit([_node("lettuce", ["whole"]), knife], "chop",
              [_node("lettuce", ["chopped"]), knife]),
        _unit([_node("tomato", ["whole"]), knife], "dice",
              [_node("tomato", ["diced"]), knife]),
        _unit([_node("cucumber", ["whole"]), knife], "dice",
              [_node("cucumber", ["diced"]), knife]),
        _unit(
            [
                _node("lettuce", ["chopped"]),
                _node("tomato", ["diced"]),
                _node("cucumber", ["diced"]),
                bowl,
            ],
            "mix",
            [mixed],
        ),
        _unit([mixed, _node("salt", ["ground"])], "sprinkle", [seasoned]),
    )
    return Subgraph("garden_salad", units)


def potato_salad() -> Subgraph:
    knife = _node("knife")
    pot = _node("pot", ["empty"])
    bowl = _node("bowl", ["empty"])
    mixed = _node("potato salad", ["mixed"], ["potato", "egg"], "bowl")
    units = (
        _unit([_node("potato", ["whole"]), knife], "peel",
              [_node("potato", ["peeled"]), knife]),
        _unit([_node("potato", ["peeled"]), knife], "dice",
              [_node("potato", ["peeled", "diced"]), knife]),
        _unit([_node("potato", ["peeled", "diced"]), pot], "boil",
              [_node("potato", ["boiled"])]),
        _unit([_node("egg", ["raw"]), pot], "boil", [_node("egg", ["boiled"])]),
        _unit(
            [_node("potato", ["boiled"]), _node("egg", ["boiled"]), bowl],
            "mix",
            [mixed],
        ),
    )
    return Subgraph("potato_salad", units)


def _crack_and_whisk() -> tuple[FunctionalUnit, FunctionalUnit]:
    bowl = _node("bowl", ["empty"])
    whisk = _node("whisk")
    crack = _unit(
        [_node("egg", ["raw"]), bowl], "crack", [_node("egg", ["cracked"], (), "bowl")]
    )
    beat = _unit(
        [_node("egg", ["cracked"], (), "bowl"), whisk],
        "whisk",
        [_node("egg", ["whisked"], (), "bowl"), whisk],
    )
    return crack, beat


def cheese_omelette() -> Subgraph:
    crack, beat = _crack_and_whisk()
    knife = _node("knife")
    grater = _node("grater")
    pan = _node("pan", ["empty"])
    cooked = _node("omelette", ["cooked"], ["egg", "butter"], "pan")
    filled = _node(
        "omelette", ["cooked", "filled"], ["egg", "butter", "cheese", "chives"], "pan"
    )
    folded = _node(
        "omelette", ["folded"], ["egg", "butter", "cheese", "chives"], "plate"
    )
    units = (
        crack,
        beat,
        _unit([_node("cheese", ["whole"]), grater], "grate",
              [_node("cheese", ["grated"]), grater]),
        _unit([_node("chives", ["whole"]), knife], "chop",
              [_node("chives", ["chopped"]), knife]),
        _unit([_node("butter", ["whole"]), pan], "melt",
              [_node("butter", ["melted"], (), "pan")]),
        _unit(
            [_node("egg", ["whisked"], (), "bowl"), _node("butter", ["melted"], (), "pan")],
            "pour",
            [cooked],
        ),
        _unit(
            [cooked, _node("cheese", ["grated"]), _node("chives", ["chopped"])],
            "sprinkle",
            [filled],
        ),
        _unit([filled], "fold", [folded]),
    )
    return Subgraph("cheese_omelette", units)


def veggie_omelette() -> Subgraph:
    crack, beat = _crack_and_whisk()
    knife = _node("knife")
    pan = _node("pan", ["empty"])
    filling = _node(
        "vegetable filling", ["cooked"], ["onion", "pepper", "olive oil"], "pan"
    )
    cooked = _node(
        "omelette", ["cooked"], ["egg", "onion", "pepper", "olive oil"], "pan"
    )
    folded = _node(
        "omelette", ["folded"], ["egg", "onion", "pepper", "olive oil"], "plate"
    )
    units = (
        crack,
        beat,
        _unit([_node("onion", ["whole"]), knife], "dice",
              [_node("onion", ["diced"]), knife]),
        _unit([_node("pepper", ["whole"]), knife], "dice",
              [_node("pepper", ["diced"]), knife]),
        _unit(
            [
                _node("onion", ["diced"]),
                _node("pepper", ["diced"]),
                _node("olive oil", ["liquid"]),
                pan,
            ],
            "saute",
            [filling],
        ),
        _unit([_node("egg", ["whisked"], (), "bowl"), filling], "pour", [cooked]),
        _unit([cooked], "fold", [folded]),
    )
    return Subgraph("veggie_omelette", units)


def fruit_smoothie() -> Subgraph:
    knife = _node("knife")
    blender = _node("blender", ["empty"])
    glass = _node("glass", ["empty"])
    blended = _node(
        "smoothie", ["blended"], ["banana", "strawberry", "milk"], "blender"
    )
    served = _node("smoothie", ["served"], ["banana", "strawberry", "milk"], "glass")
    units = (
        _unit([_node("banana", ["whole"])], "peel", [_node("banana", ["peeled"])]),
        _unit([_node("banana", ["peeled"]), knife], "slice",
              [_node("banana", ["peeled", "sliced"]), knife]),
        _unit([_node("strawberry", ["whole"]), knife], "chop",
              [_node("strawberry", ["chopped"]), knife]),
        _unit(
            [
                _node("banana", ["peeled", "sliced"]),
                _node("strawberry", ["chopped"]),
                _node("milk", ["liquid"]),
                blender,
            ],
            "blend",
            [blended],
        ),
        _unit([blended, glass], "pour", [served]),
    )
    return Subgraph("fruit_smoothie", units)


def lemonade() -> Subgraph:
    knife = _node("knife")
    jug = _node("jug", ["empty"])
    glass = _node("glass", ["empty"])
    mixed = _node("lemonade", ["mixed"], ["lemon juice", "water", "sugar"], "jug")
    served = _node("lemonade", ["served"], ["lemon juice", "water", "sugar"], "glass")
    units = (
        _unit([_node("lemon", ["whole"]), knife], "slice",
              [_node("lemon", ["sliced"]), knife]),
        _unit([_node("lemon", ["sliced"])], "squeeze",
              [_node("lemon juice", ["liquid"])]),
        _unit(
            [
                _node("lemon juice", ["liquid"]),
                _node("water", ["liquid"]),
                _node("sugar", ["granulated"]),
                jug,
            ],
            "mix",
            [mixed],
        ),
        _unit([mixed, glass], "pour", [served]),
    )
    return Subgraph("lemonade", units)


def core_subgraphs() -> list[Subgraph]:
    """The five food recipes; they merge to exactly 30 distinct units."""
    return [greek_salad(), garden_salad(), potato_salad(), cheese_omelette(), veggie_omelette()]


def drink_subgraphs() -> list[Subgraph]:
    return [fruit_smoothie(), lemonade()]


def all_subgraphs() -> list[Subgraph]:
    return core_subgraphs() + drink_subgraphs()


def demo_kitchen() -> KitchenModel:
    whole = (
        "onion", "cucumber", "tomato", "feta cheese", "lettuce", "potato",
        "cheese", "chives", "butter", "pepper", "banana", "strawberry", "lemon",
    )
    items = [BaseItem(name, frozenset({"whole"})) for name in whole]
    items.append(BaseItem("egg", frozenset({"raw"})))
    items.extend(
        [
            BaseItem("oregano", frozenset({"dried"})),
            BaseItem("olive oil", frozenset({"liquid"})),
            BaseItem("salt", frozenset({"ground"})),
            BaseItem("milk", frozenset({"liquid"})),
            BaseItem("water", frozenset({"liquid"})),
            BaseItem("sugar", frozenset({"granulated"})),
        ]
    )
    return KitchenModel(base_items=tuple(items), utensils=UTENSILS)


def demo_dish_classes() -> DishClassConfig:
    return DishClassConfig(
        classes=("Salad", "Omelette", "Drinks", "Soup", "Bread", "Pizza"),
        assignment={
            "greek_salad": "Salad",
            "garden_salad": "Salad",
            "potato_salad": "Salad",
            "cheese_omelette": "Omelette",
            "veggie_omelette": "Omelette",
            "fruit_smoothie": "Drinks",
            "lemonade": "Drinks",
        },
    )


def demo_state_classes() -> StateClassConfig:
    return StateClassConfig(
        classes=(
            "intact", "peeled", "coarsely separated", "finely separated",
            "ground", "liquid", "creamy", "mixed", "cooked", "seasoned",
            "dehydrated", "served",
        ),
        assignment={
            "whole": "intact",
            "raw": "intact",
            "peeled": "peeled",
            "sliced": "coarsely separated",
            "chopped": "coarsely separated",
            "diced": "finely separated",
            "grated": "finely separated",
            "crumbled": "finely separated",
            "ground": "ground",
            "granulated": "ground",
            "liquid": "liquid",
            "melted": "liquid",
            "juiced": "liquid",
            "cracked": "creamy",
            "whisked": "creamy",
            "mixed": "mixed",
            "blended": "mixed",
            "boiled": "cooked",
            "cooked": "cooked",
            "filled": "cooked",
            "seasoned": "seasoned",
            "dressed": "seasoned",
            "dried": "dehydrated",
            "folded": "served",
            "served": "served",
        },
    )


def demo_integration_policy() -> IntegrationPolicy:
    return IntegrationPolicy(
        accepting_verbs=frozenset(
            {"mix", "sprinkle", "drizzle", "pour", "add", "blend", "saute", "stir"}
        )
    )


def demo_request() -> PlanningRequest:
    return PlanningRequest(
        ingredients=(
            ("onion", "sliced"),
            ("cucumber", "sliced"),
            ("feta cheese", "crumbled"),
            ("oregano", "dried"),
            ("prunes", "chopped"),
        ),
        dish_type="Salad",
    )


# Embedding axes. Engineered neighbors share their anchor's axis with an
# exact component, so test expectations can be recomputed by hand.
_AXES = [
    "onion", "cucumber", "tomato", "cheese", "oregano", "lettuce", "potato",
    "egg", "butter", "pepper", "milk", "banana", "strawberry", "lemon",
    "water", "sugar", "salt", "olive", "oil", "juice", "fork", "sliced",
    "aux-allium", "aux-cucurbit", "aux-berry", "aux-dairy", "aux-leaf",
    "aux-state", "aux-allium-2",
]

_VECTORS: dict[str, dict[str, float]] = {
    "onion": {"onion": 1.0},
    "shallot": {"onion": 0.96, "aux-allium": 0.28},
    "chives": {"onion": 0.95, "aux-allium-2": 0.3122},
    "cucumber": {"cucumber": 1.0},
    "zucchini": {"cucumber": 0.968, "aux-cucurbit": 0.25},
    "carrot": {"cucumber": 0.97, "aux-cucurbit": 0.243},
    "tomato": {"tomato": 1.0},
    "cheese": {"cheese": 1.0},
    "feta": {"cheese": 0.92, "aux-dairy": 0.39},
    "oregano": {"oregano": 1.0},
    "lettuce": {"lettuce": 1.0},
    "romaine": {"lettuce": 0.93, "aux-leaf": 0.3676},
    "potato": {"potato": 1.0},
    "egg": {"egg": 1.0},
    "butter": {"butter": 1.0},
    "pepper": {"pepper": 1.0},
    "milk": {"milk": 1.0},
    "banana": {"banana": 1.0},
    "strawberry": {"strawberry": 1.0},
    "prunes": {"strawberry": 0.94, "aux-berry": 0.3412},
    "lemon": {"lemon": 1.0},
    "water": {"water": 1.0},
    "sugar": {"sugar": 1.0},
    "salt": {"salt": 1.0},
    "olive": {"olive": 1.0},
    "oil": {"oil": 1.0},
    "juice": {"juice": 1.0},
    "fork": {"fork": 1.0},
    "sliced": {"sliced": 1.0},
    "diced": {"sliced": 0.92, "aux-state": 0.39},
    "chopped": {"sliced": 0.95, "aux-state": 0.3122},
    "grated": {"sliced": 0.6, "aux-state": 0.8},
    "crumbled": {"sliced": 0.7071, "aux-state": 0.7071},
}


def embedding_text() -> str:
    """The demo embedding table in word2vec-style text format."""
    index = {axis: i for i, axis in enumerate(_AXES)}
    lines = [f"{len(_VECTORS)} {len(_AXES)}"]
    for token, components in _VECTORS.items():
        values = ["0"] * len(_AXES)
        for axis, value in components.items():
            values[index[axis]] = f"{value:g}"
        lines.append(token + " " + " ".join(values))
    return "\n".join(lines) + "\n"


def board_slicing_fixture() -> tuple[Subgraph, KitchenModel]:
    """Minimal two-step recipe: move the onion to the board, slice it.

    The whole onion is available straight from the kitchen, but the
    slicing step needs it on the cutting board, so the plan must include
    the transfer even though both nodes share a retrieval key.
    """
    board = _node("cutting board")
    knife = _node("knife")
    on_board = _node("onion", ["whole"], (), "cutting board")
    units = (
        _unit([_node("onion", ["whole"]), board], "pick-and-place", [on_board]),
        _unit([on_board, knife], "slice",
              [_node("onion", ["sliced"], (), "cutting board"), knife]),
    )
    subgraph = Subgraph("sliced_onion", units)
    kitchen = KitchenModel(
        base_items=(BaseItem("onion", frozenset({"whole"})),),
        utensils=frozenset({"knife", "cutting board"}),
    )
    return subgraph, kitchen


_LEGACY_LEMONADE = """\
# lemonade, plain-text unit format
O\tlemon
S\twhole
O\tknife
M\tslice
O\tlemon
S\tsliced
O\tknife
//
O\tlemon
S\tsliced
M\tsqueeze
O\tlemon juice
S\tliquid
//
O\tlemon juice
S\tliquid
O\twater
S\tliquid
O\tsugar
S\tgranulated
O\tjug
S\tempty
M\tmix
O\tlemonade
S\tmixed\t{lemon juice,water,sugar}\t[jug]
//
O\tlemonade
S\tmixed\t{lemon juice,water,sugar}\t[jug]
O\tglass
S\tempty
M\tpour
O\tlemonade
S\tserved\t{lemon juice,water,sugar}\t[glass]
//
"""


def write_demo(out_dir: Path | str) -> list[Path]:
    """Write the demo dataset as files; returns everything written."""
    out = Path(out_dir)
    subgraph_dir = out / "subgraphs"
    subgraph_dir.mkdir(parents=True, exist_ok=True)
    written = []

    for subgraph in core_subgraphs() + [fruit_smoothie()]:
        path = subgraph_dir / f"{subgraph.id}.json"
        write_text_atomic(path, dumps_canonical(subgraph_to_doc(subgraph)))
        written.append(path)
    legacy_path = subgraph_dir / "lemonade.txt"
    write_text_atomic(legacy_path, _LEGACY_LEMONADE)
    written.append(legacy_path)

    kitchen = demo_kitchen()
    kitchen_doc = {
        "base_items": [
            {
                "name": item.name,
                "states": sorted(item.states),
                **({"location": item.location} if item.location else {}),
            }
            for item in kitchen.base_items
        ],
        "utensils": sorted(kitchen.utensils),
    }
    files = {
        "kitchen.json": kitchen_doc,
        "dish_classes.json": {
            "classes": list(demo_dish_classes().classes),
            "assignment": dict(demo_dish_classes().assignment),
        },
        "state_classes.json": {
            "classes": list(demo_state_classes().classes),
            "assignment": dict(demo_state_classes().assignment),
        },
        "integration_policy.json": {
            "accepting_verbs": sorted(demo_integration_policy().accepting_verbs)
        },
        "request.json": request_to_doc(demo_request()),
    }
    for name, doc in files.items():
        path = out / name
        write_text_atomic(path, dumps_canonical(doc))
        written.append(path)

    embeddings_path = out / "embeddings.txt"
    write_text_atomic(embeddings_path, embedding_text())
    written.append(embeddings_path)
    return written
