"""Command-line interface.

Subcommands cover the whole workflow: ``merge`` recipe subgraphs into
one network, ``plan`` a task tree for an ingredient request, derive
``progress`` lines for review, ``render`` a tree as Graphviz DOT,
``report`` over collected annotations, ``serve`` the review API and UI,
and ``demo`` to write a self-contained example dataset.

Every option can also come from an environment variable named
``FOONPLAN_<OPTION>`` (for example ``FOONPLAN_EMBEDDINGS``); explicit
flags win over the environment.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import documents
from .embedding import SimilarityConfig, load_embeddings
from .errors import FoonError
from .modify import construct_final_task_tree
from .progress import derive_progress_lines, render_progress_text, save_progress
from .render import render_tree_dot
from .report import DEFAULT_THRESHOLDS, build_report, write_report
from .retrieval import DEFAULT_MAX_DEPTH, DEFAULT_MAX_PATHS, TreeCache
from .store import load_network, merge, save_universal
from .serve import make_server, serve_forever

_ENV_PREFIX = "FOONPLAN_"


def _env(name: str, fallback=None):
    return os.environ.get(_ENV_PREFIX + name, fallback)


def _env_float(name: str, fallback: float) -> float:
    raw = _env(name)
    return float(raw) if raw is not None else fallback


def _env_int(name: str, fallback: int) -> int:
    raw = _env(name)
    return int(raw) if raw is not None else fallback


def _add_network_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "network", nargs="+",
        help="network inputs: subgraph documents (.json or legacy .txt) or one pre-merged network",
    )
    parser.add_argument(
        "--kitchen", default=_env("KITCHEN"),
        help="kitchen document (base items and utensils) [env FOONPLAN_KITCHEN]",
    )
    parser.add_argument(
        "--dish-classes", default=_env("DISH_CLASSES"),
        help="dish class config document [env FOONPLAN_DISH_CLASSES]",
    )


def _add_planning_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--embeddings", default=_env("EMBEDDINGS"),
        help="word embedding table, text format [env FOONPLAN_EMBEDDINGS]",
    )
    parser.add_argument(
        "--similarity-threshold", type=float,
        default=_env_float("SIMILARITY_THRESHOLD", SimilarityConfig().threshold),
        help="cosine similarity two names must exceed to count as the same ingredient "
             "(default %(default)s) [env FOONPLAN_SIMILARITY_THRESHOLD]",
    )
    parser.add_argument(
        "--state-classes", default=_env("STATE_CLASSES"),
        help="state class config for state substitution [env FOONPLAN_STATE_CLASSES]",
    )
    parser.add_argument(
        "--integration-policy", default=_env("INTEGRATION_POLICY"),
        help="accepting-verb config for integrating new ingredients "
             "[env FOONPLAN_INTEGRATION_POLICY]",
    )
    parser.add_argument(
        "--max-paths", type=int, default=_env_int("MAX_PATHS", DEFAULT_MAX_PATHS),
        help="abort retrieval after this many candidate combinations (default %(default)s) "
             "[env FOONPLAN_MAX_PATHS]",
    )
    parser.add_argument(
        "--max-depth", type=int, default=_env_int("MAX_DEPTH", DEFAULT_MAX_DEPTH),
        help="abort retrieval beyond this recursion depth (default %(default)s) "
             "[env FOONPLAN_MAX_DEPTH]",
    )
    parser.add_argument(
        "--cache-dir", default=_env("CACHE_DIR"),
        help="directory for cached reference trees [env FOONPLAN_CACHE_DIR]",
    )


def _require(value, flag: str) -> str:
    if value is None:
        raise FoonError(f"missing required option {flag} (or {_ENV_PREFIX}{flag[2:].replace('-', '_').upper()})")
    return value


def _load_common(args):
    kitchen = documents.load_kitchen(_require(args.kitchen, "--kitchen"))
    dish_classes = (
        documents.load_dish_classes(args.dish_classes) if args.dish_classes else None
    )
    foon = load_network(
        [Path(p) for p in args.network],
        utensils=kitchen.utensils,
        dish_classes=dish_classes,
    )
    return foon, kitchen


def cmd_merge(args) -> int:
    foon, _ = _load_common(args)
    save_universal(Path(args.output), foon)
    print(
        f"merged {len(args.network)} input(s) into {len(foon.units)} units, "
        f"{len(foon.recipes)} recipes -> {args.output}"
    )
    return 0


def cmd_plan(args) -> int:
    foon, kitchen = _load_common(args)
    table = load_embeddings(_require(args.embeddings, "--embeddings"))
    config = SimilarityConfig(args.similarity_threshold)
    state_classes = documents.load_state_classes(
        _require(args.state_classes, "--state-classes")
    )
    policy = documents.load_integration_policy(
        _require(args.integration_policy, "--integration-policy")
    )
    request = documents.load_request(args.request)
    cache = TreeCache(args.cache_dir) if args.cache_dir else None

    tree, selection = construct_final_task_tree(
        foon, table, config, kitchen, state_classes, policy, request,
        max_paths=args.max_paths, max_depth=args.max_depth, cache=cache,
    )

    out = Path(args.output) / args.id
    out.mkdir(parents=True, exist_ok=True)
    documents.save_tree(out / "tree.json", tree)
    documents.write_text_atomic(
        out / "request.json", documents.dumps_canonical(documents.request_to_doc(request))
    )
    substitution_doc = {
        "recipe_id": args.id,
        "reference_recipe": selection.recipe_id,
        "substitutions": [documents.record_to_doc(r) for r in tree.provenance],
    }
    documents.write_text_atomic(
        out / "substitutions.json", documents.dumps_canonical(substitution_doc)
    )
    print(
        f"planned '{args.id}' from reference '{selection.recipe_id}' "
        f"({len(tree.units)} steps, {len(tree.provenance)} substitutions) -> {out}"
    )
    return 0


def _recipe_dirs(results: Path) -> list[Path]:
    if (results / "tree.json").is_file():
        return [results]
    dirs = sorted(
        p for p in results.iterdir() if p.is_dir() and (p / "tree.json").is_file()
    )
    if not dirs:
        raise FoonError(f"no planned recipes under {results}")
    return dirs


def cmd_progress(args) -> int:
    results = Path(args.results)
    for recipe_dir in _recipe_dirs(results):
        tree = documents.load_tree(recipe_dir / "tree.json")
        request = documents.load_request(recipe_dir / "request.json")
        lines = derive_progress_lines(tree, request)
        save_progress(recipe_dir / "progress.json", lines)
        documents.write_text_atomic(
            recipe_dir / "progress.txt", render_progress_text(lines)
        )
        print(f"{recipe_dir.name}: {len(lines)} ingredient lines -> {recipe_dir}")
    return 0


def cmd_render(args) -> int:
    kitchen = documents.load_kitchen(_require(args.kitchen, "--kitchen"))
    results = Path(args.results)
    for recipe_dir in _recipe_dirs(results):
        tree = documents.load_tree(recipe_dir / "tree.json")
        dot = render_tree_dot(tree, kitchen)
        documents.write_text_atomic(recipe_dir / "tree.dot", dot)
        print(f"{recipe_dir.name}: wrote {recipe_dir / 'tree.dot'}")
    return 0


def cmd_report(args) -> int:
    thresholds = DEFAULT_THRESHOLDS
    if args.thresholds:
        thresholds = tuple(float(t) for t in args.thresholds.split(","))
    report = build_report(args.results, thresholds)
    written = write_report(report, args.output)
    for recipe in report.recipes:
        print(f"{recipe.recipe_id}\t{recipe.correctness:.2f}")
    print(f"mean\t{report.mean_correctness:.2f}")
    for path in written:
        print(f"wrote {path}")
    return 0


def cmd_serve(args) -> int:
    server = make_server(args.results, args.host, args.port, args.ui)
    serve_forever(server)
    return 0


def cmd_demo(args) -> int:
    from .demo import write_demo

    written = write_demo(args.output)
    for path in written:
        print(f"wrote {path}")
    print()
    out = args.output
    print("try:")
    print(
        f"  foonplan merge {out}/subgraphs/*.json {out}/subgraphs/*.txt "
        f"--kitchen {out}/kitchen.json --dish-classes {out}/dish_classes.json "
        f"-o {out}/network.json"
    )
    print(
        f"  foonplan plan {out}/network.json --request {out}/request.json "
        f"--kitchen {out}/kitchen.json --embeddings {out}/embeddings.txt "
        f"--state-classes {out}/state_classes.json "
        f"--integration-policy {out}/integration_policy.json "
        f"--id demo-salad -o {out}/results"
    )
    print(f"  foonplan progress --results {out}/results")
    print(f"  foonplan serve --results {out}/results")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="foonplan",
        description="Plan cooking task trees over a merged recipe network.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_merge = sub.add_parser("merge", help="merge recipe subgraphs into one network")
    _add_network_options(p_merge)
    p_merge.add_argument("-o", "--output", required=True, help="output network document")
    p_merge.set_defaults(func=cmd_merge)

    p_plan = sub.add_parser("plan", help="derive a task tree for an ingredient request")
    _add_network_options(p_plan)
    _add_planning_options(p_plan)
    p_plan.add_argument("--request", required=True, help="request document (dish type + ingredients)")
    p_plan.add_argument("--id", default="plan", help="name for this result (default %(default)s)")
    p_plan.add_argument("-o", "--output", required=True, help="results directory")
    p_plan.set_defaults(func=cmd_plan)

    p_progress = sub.add_parser("progress", help="derive per-ingredient progress lines")
    p_progress.add_argument("--results", required=True, help="results directory (from plan)")
    p_progress.set_defaults(func=cmd_progress)

    p_render = sub.add_parser("render", help="render planned trees as Graphviz DOT")
    p_render.add_argument("--results", required=True, help="results directory (from plan)")
    p_render.add_argument(
        "--kitchen", default=_env("KITCHEN"),
        help="kitchen document, used to color starting nodes [env FOONPLAN_KITCHEN]",
    )
    p_render.set_defaults(func=cmd_render)

    p_report = sub.add_parser("report", help="summarize reviewer annotations")
    p_report.add_argument("--results", required=True, help="results directory with annotations")
    p_report.add_argument(
        "--thresholds", default=None,
        help="comma-separated correctness thresholds "
             f"(default {','.join(f'{t:g}' for t in DEFAULT_THRESHOLDS)})",
    )
    p_report.add_argument("-o", "--output", required=True, help="report output directory")
    p_report.set_defaults(func=cmd_report)

    p_serve = sub.add_parser("serve", help="serve planned recipes for review")
    p_serve.add_argument("--results", required=True, help="results directory")
    p_serve.add_argument("--host", default=_env("HOST", "127.0.0.1"))
    p_serve.add_argument("--port", type=int, default=_env_int("PORT", 8080))
    p_serve.add_argument("--ui", default=_env("UI"), help="directory with the static review UI")
    p_serve.set_defaults(func=cmd_serve)

    p_demo = sub.add_parser("demo", help="write a self-contained example dataset")
    p_demo.add_argument("-o", "--output", required=True, help="directory to write the dataset to")
    p_demo.set_defaults(func=cmd_demo)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FoonError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
