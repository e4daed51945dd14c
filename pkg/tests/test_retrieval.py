"""Request adaptation, best-path search, budgets, and the tree cache."""

import pytest

from foonplan.embedding import SimilarityConfig
from foonplan.errors import NoPathError, SearchBudgetError
from foonplan.kitchen import BaseItem, KitchenModel
from foonplan.model import FunctionalUnit, MotionNode, ObjectNode, Subgraph
from foonplan.retrieval import TreeCache, adapt_units, retrieve_reference_task_tree
from foonplan.store import merge

from genfoon import UTENSILS as GEN_UTENSILS
from genfoon import generate, synthetic_table, synthetic_vectors
from oracles import best_candidate, enumerate_trees, pair_overlap, tree_ingredient_names


def _node(name, states=(), ingredients=(), location=None):
    return ObjectNode(name, tuple(states), tuple(ingredients), location)


def _unit(inputs, verb, outputs):
    return FunctionalUnit(tuple(inputs), MotionNode(verb), tuple(outputs))


class TestBoardSlicingScenario:
    """A kitchen holding a loose onion forces the placement step."""

    def test_exact_two_unit_tree(self, board_fixture, table, config):
        subgraph, small_kitchen = board_fixture
        foon = merge([subgraph], utensils=small_kitchen.utensils)
        goal = _node("onion", ["sliced"])
        tree = retrieve_reference_task_tree(
            foon, table, config, small_kitchen, goal, [("onion", "sliced")]
        )
        assert [u.motion.verb for u in tree.units] == ["pick-and-place", "slice"]
        place, slice_unit = tree.units
        assert place.inputs == (_node("onion", ["whole"]), _node("cutting board"))
        assert place.outputs == (_node("onion", ["whole"], location="cutting board"),)
        assert slice_unit.inputs == (
            _node("onion", ["whole"], location="cutting board"),
            _node("knife"),
        )
        assert _node("onion", ["sliced"], location="cutting board") in slice_unit.outputs

    def test_onion_already_on_board_skips_placement(self, board_fixture, table, config):
        subgraph, small_kitchen = board_fixture
        foon = merge([subgraph], utensils=small_kitchen.utensils)
        stocked = KitchenModel(
            base_items=small_kitchen.base_items
            + (BaseItem("onion", frozenset({"whole"}), "cutting board"),),
            utensils=small_kitchen.utensils,
        )
        tree = retrieve_reference_task_tree(
            foon, table, config, stocked, _node("onion", ["sliced"]), [("onion", "sliced")]
        )
        assert [u.motion.verb for u in tree.units] == ["slice"]


class TestAdaptUnits:
    def test_irrelevant_leaves_stripped_everywhere(self, full_foon, table, config, kitchen):
        adapted = adapt_units(full_foon, table, config, kitchen, ["onion"])
        greek_mix = next(
            u
            for u in full_foon.units
            if u.motion.verb == "mix" and any(n.name == "greek salad" for n in u.outputs)
        )
        stripped = adapted[greek_mix]
        assert stripped is not None
        assert [n.name for n in stripped.inputs] == ["onion", "bowl"]
        assert stripped.outputs[0].ingredients == ("onion",)

    def test_unit_with_no_relevant_leaf_and_blocked_demand_pruned(
        self, full_foon, table, config, kitchen
    ):
        adapted = adapt_units(full_foon, table, config, kitchen, ["onion"])
        garden_mix = next(
            u
            for u in full_foon.units
            if u.motion.verb == "mix" and any(n.name == "garden salad" for n in u.outputs)
        )
        assert adapted[garden_mix] is None

    def test_similar_names_count_as_relevant(self, full_foon, table, config, kitchen):
        adapted = adapt_units(full_foon, table, config, kitchen, ["shallot"])
        slice_onion = next(
            u
            for u in full_foon.units
            if u.motion.verb == "slice" and u.inputs[0].name == "onion"
        )
        kept = adapted[slice_onion]
        assert kept is not None
        assert any(n.name == "onion" for n in kept.outputs)

    def test_base_available_leaves_never_block(self, full_foon, table, config, kitchen):
        # oregano{dried} is a declared base item: the greek sprinkle unit
        # survives even when the request shares nothing with it.
        adapted = adapt_units(full_foon, table, config, kitchen, ["potato"])
        sprinkle = next(
            u
            for u in full_foon.units
            if u.motion.verb == "sprinkle"
            and any(n.name == "greek salad" for n in u.inputs)
        )
        assert adapted[sprinkle] is not None

    def test_utensils_and_composites_survive(self, full_foon, table, config, kitchen):
        adapted = adapt_units(full_foon, table, config, kitchen, ["onion"])
        drizzle = next(
            u
            for u in full_foon.units
            if u.motion.verb == "drizzle"
            and any(n.name == "greek salad" for n in u.inputs)
        )
        stripped = adapted[drizzle]
        assert stripped is not None
        assert [n.name for n in stripped.inputs] == ["greek salad"]
        assert stripped.outputs[0].name == "greek salad"


class TestSearch:
    def test_prefers_candidate_covering_the_request(self):
        onion_mix = _unit(
            [_node("onion", ["sliced"]), _node("bowl", ["empty"])],
            "mix",
            [_node("dish", ["mixed"], ["onion"], "bowl")],
        )
        tomato_mix = _unit(
            [_node("tomato", ["sliced"]), _node("bowl", ["empty"])],
            "mix",
            [_node("dish", ["mixed"], ["tomato"], "bowl")],
        )
        cut_onion = _unit([_node("onion", ["whole"]), _node("knife")], "slice", [_node("onion", ["sliced"])])
        cut_tomato = _unit([_node("tomato", ["whole"]), _node("knife")], "slice", [_node("tomato", ["sliced"])])
        foon = merge(
            [Subgraph("r", (cut_onion, onion_mix, cut_tomato, tomato_mix), goal=_node("dish", ["mixed"]))],
            utensils=frozenset({"bowl", "knife"}),
        )
        kitchen = KitchenModel(utensils=frozenset({"bowl", "knife"}))
        tree = retrieve_reference_task_tree(
            foon, synthetic_table(), SimilarityConfig(), kitchen,
            _node("dish", ["mixed"]), [("onion", "sliced")],
        )
        assert tree.units == (cut_onion, onion_mix)

    def test_equal_scores_fall_to_fewest_units(self):
        direct = _unit(
            [_node("onion", ["whole"]), _node("bowl", ["empty"])],
            "toss",
            [_node("dish", ["mixed"], ["onion"], "bowl")],
        )
        cut = _unit([_node("onion", ["whole"]), _node("knife")], "slice", [_node("onion", ["sliced"])])
        via_cut = _unit(
            [_node("onion", ["sliced"]), _node("bowl", ["empty"])],
            "mix",
            [_node("dish", ["mixed"], ["onion"], "bowl")],
        )
        foon = merge(
            [Subgraph("r", (cut, via_cut, direct), goal=_node("dish", ["mixed"]))],
            utensils=frozenset({"bowl", "knife"}),
        )
        kitchen = KitchenModel(utensils=frozenset({"bowl", "knife"}))
        tree = retrieve_reference_task_tree(
            foon, synthetic_table(), SimilarityConfig(), kitchen,
            _node("dish", ["mixed"]), [("onion", "sliced")],
        )
        assert tree.units == (direct,)

    def test_unproducible_goal_raises(self, full_foon, table, config, kitchen):
        with pytest.raises(NoPathError, match="nothing in the network produces the goal"):
            retrieve_reference_task_tree(
                full_foon, table, config, kitchen, _node("cake", ["baked"]), [("flour", "ground")]
            )

    def test_unmet_demand_raises_with_keys(self):
        mix = _unit(
            [_node("onion", ["sliced"]), _node("bowl", ["empty"])],
            "mix",
            [_node("dish", ["mixed"], ["onion"], "bowl")],
        )
        foon = merge(
            [Subgraph("r", (mix,), goal=_node("dish", ["mixed"]))],
            utensils=frozenset({"bowl"}),
        )
        kitchen = KitchenModel(utensils=frozenset({"bowl"}))
        with pytest.raises(NoPathError) as err:
            retrieve_reference_task_tree(
                foon, synthetic_table(), SimilarityConfig(), kitchen,
                _node("dish", ["mixed"]), [("onion", "sliced")],
            )
        assert ("onion", frozenset({("sliced", None)})) in err.value.unmet

    def test_cyclic_producers_terminate(self):
        cook = _unit([_node("x", ["whole"])], "cook", [_node("x", ["cooked"])])
        glaze = _unit([_node("x", ["cooked"])], "glaze", [_node("x", ["glazed"])])
        reheat = _unit([_node("x", ["glazed"])], "reheat", [_node("x", ["cooked"])])
        foon = merge([Subgraph("r", (cook, glaze, reheat), goal=_node("x", ["glazed"]))])
        kitchen = KitchenModel()
        tree = retrieve_reference_task_tree(
            foon, synthetic_table(), SimilarityConfig(), kitchen,
            _node("x", ["glazed"]), [("x", "glazed")],
        )
        assert tree.units == (cook, glaze)

    def test_deterministic_across_calls(self, full_foon, table, config, kitchen):
        goal = _node("greek salad", ["dressed"])
        pairs = [("onion", "sliced"), ("cucumber", "sliced")]
        first = retrieve_reference_task_tree(full_foon, table, config, kitchen, goal, pairs)
        second = retrieve_reference_task_tree(full_foon, table, config, kitchen, goal, pairs)
        assert first.units == second.units
        assert first.goal == second.goal


class TestBudgets:
    def test_path_budget_exhaustion_raises(self, full_foon, table, config, kitchen):
        with pytest.raises(SearchBudgetError, match="unit combinations") as err:
            retrieve_reference_task_tree(
                full_foon, table, config, kitchen,
                _node("greek salad", ["dressed"]), [("onion", "sliced")],
                max_paths=1,
            )
        assert err.value.paths_seen >= 1

    def test_depth_budget_exhaustion_raises(self):
        chain = []
        states = ["whole", "s1", "s2", "s3", "s4", "s5"]
        for a, b in zip(states, states[1:]):
            chain.append(_unit([_node("x", [a])], f"to-{b}", [_node("x", [b])]))
        foon = merge([Subgraph("r", tuple(chain), goal=_node("x", ["s5"]))])
        with pytest.raises(SearchBudgetError, match="deeper than 3 levels"):
            retrieve_reference_task_tree(
                foon, synthetic_table(), SimilarityConfig(), KitchenModel(),
                _node("x", ["s5"]), [("x", "s5")], max_depth=3,
            )

    def test_generous_budgets_suffice_for_demo(self, full_foon, table, config, kitchen):
        tree = retrieve_reference_task_tree(
            full_foon, table, config, kitchen,
            _node("greek salad", ["dressed"]), [("onion", "sliced")],
        )
        assert tree.units


class TestTreeCache:
    def test_round_trip(self, tmp_path, full_foon, table, config, kitchen):
        cache = TreeCache(tmp_path)
        goal = _node("greek salad", ["dressed"])
        pairs = [("onion", "sliced")]
        first = retrieve_reference_task_tree(
            full_foon, table, config, kitchen, goal, pairs, cache=cache
        )
        assert cache.get(full_foon, kitchen, config, goal, pairs) is not None
        second = retrieve_reference_task_tree(
            full_foon, table, config, kitchen, goal, pairs, cache=cache
        )
        assert second.units == first.units

    def test_kitchen_change_invalidates(self, tmp_path, full_foon, table, config, kitchen):
        cache = TreeCache(tmp_path)
        goal = _node("greek salad", ["dressed"])
        pairs = [("onion", "sliced")]
        retrieve_reference_task_tree(full_foon, table, config, kitchen, goal, pairs, cache=cache)
        other = KitchenModel(
            base_items=kitchen.base_items + (BaseItem("truffle", frozenset({"whole"})),),
            utensils=kitchen.utensils,
        )
        assert cache.get(full_foon, other, config, goal, pairs) is None

    def test_threshold_change_invalidates(self, tmp_path, full_foon, table, config, kitchen):
        cache = TreeCache(tmp_path)
        goal = _node("greek salad", ["dressed"])
        pairs = [("onion", "sliced")]
        retrieve_reference_task_tree(full_foon, table, config, kitchen, goal, pairs, cache=cache)
        assert cache.get(full_foon, kitchen, SimilarityConfig(0.5), goal, pairs) is None

    def test_ingredient_order_does_not_split_entries(self, tmp_path, full_foon, table, config, kitchen):
        cache = TreeCache(tmp_path)
        goal = _node("greek salad", ["dressed"])
        retrieve_reference_task_tree(
            full_foon, table, config, kitchen, goal,
            [("onion", "sliced"), ("cucumber", "sliced")], cache=cache,
        )
        assert (
            cache.get(
                full_foon, kitchen, config, goal,
                [("cucumber", "sliced"), ("onion", "sliced")],
            )
            is not None
        )


class TestAgainstReferenceEnumerator:
    """Spot checks; the full sweep runs in the acceptance suite."""

    @pytest.mark.parametrize("seed", [0, 1, 2, 3, 17, 42])
    def test_best_tree_matches_exhaustive_enumeration(self, seed):
        units, kitchen, goal, request = generate(seed)
        foon = merge(
            [Subgraph(f"g{seed}", units, goal=goal)], utensils=GEN_UTENSILS
        )
        table = synthetic_table()
        vectors = synthetic_vectors()
        config = SimilarityConfig()

        adapted = adapt_units(foon, table, config, kitchen, request)
        stripped = [adapted[u] for u in foon.units if adapted[u] is not None]
        base = [
            (b.name, tuple(sorted(b.states)), b.location) for b in kitchen.base_items
        ]
        candidates = enumerate_trees(stripped, goal.key, base, GEN_UTENSILS)
        expected = best_candidate(candidates, request, GEN_UTENSILS, vectors, config.threshold)

        pairs = [(name, "whole") for name in request]
        try:
            tree = retrieve_reference_task_tree(foon, table, config, kitchen, goal, pairs)
            got = (
                pair_overlap(
                    vectors,
                    config.threshold,
                    sorted(set(request)),
                    tree_ingredient_names(tree.units, GEN_UTENSILS),
                ),
                len(tree.units),
            )
        except NoPathError:
            got = None

        assert got == expected
