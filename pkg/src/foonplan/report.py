"""Evaluation reports over annotated recipes.

The report walks a results directory (one subdirectory per recipe, each
holding the progress document and reviewer annotations), computes the
correctness percentage per recipe, and writes a tab-separated table, a
JSON summary, and two figures: the threshold curve and a histogram of
correctness values.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .documents import dumps_canonical, load_annotation, write_text_atomic
from .errors import ProgressError
from .progress import correctness, load_progress, threshold_curve

DEFAULT_THRESHOLDS = (0.0, 50.0, 75.0, 85.0, 90.0, 95.0, 100.0)

PROGRESS_FILE = "progress.json"
TREE_FILE = "tree.json"
ANNOTATIONS_FILE = "annotations.json"


@dataclass(frozen=True)
class RecipeResult:
    recipe_id: str
    scores: dict[str, int]
    correctness: float


@dataclass(frozen=True)
class Report:
    recipes: tuple[RecipeResult, ...]
    thresholds: tuple[float, ...]
    curve: tuple[tuple[float, float], ...]

    @property
    def mean_correctness(self) -> float:
        values = [r.correctness for r in self.recipes]
        return round(sum(values) / len(values), 2)


def recipe_directories(results_dir: Path | str) -> list[Path]:
    root = Path(results_dir)
    if not root.is_dir():
        raise ProgressError(f"results directory not found: {root}")
    return sorted(
        (p for p in root.iterdir() if p.is_dir() and (p / PROGRESS_FILE).is_file()),
        key=lambda p: p.name,
    )


def score_recipe(recipe_dir: Path) -> RecipeResult:
    """Correctness for one annotated recipe directory."""
    lines = load_progress(recipe_dir / PROGRESS_FILE)
    expected = [line.ingredient for line in lines]
    annotation_path = recipe_dir / ANNOTATIONS_FILE
    if not annotation_path.is_file():
        raise ProgressError(f"{recipe_dir.name}: no annotations to report on")
    scores = load_annotation(annotation_path)["scores"]
    unknown = sorted(set(scores) - set(expected))
    if unknown:
        raise ProgressError(
            f"{recipe_dir.name}: annotation scores unknown ingredients: "
            + ", ".join(unknown)
        )
    missing = [name for name in expected if name not in scores]
    if missing:
        raise ProgressError(
            f"{recipe_dir.name}: annotation is incomplete; unscored ingredients: "
            + ", ".join(missing)
        )
    ordered = [scores[name] for name in expected]
    return RecipeResult(
        recipe_id=recipe_dir.name,
        scores={name: scores[name] for name in expected},
        correctness=correctness(ordered, len(expected)),
    )


def build_report(
    results_dir: Path | str,
    thresholds: Sequence[float] = DEFAULT_THRESHOLDS,
) -> Report:
    directories = recipe_directories(results_dir)
    if not directories:
        raise ProgressError(f"no recipe results under {results_dir}")
    recipes = tuple(score_recipe(d) for d in directories)
    ordered_thresholds = tuple(sorted(float(t) for t in thresholds))
    curve = tuple(
        threshold_curve([r.correctness for r in recipes], ordered_thresholds)
    )
    return Report(recipes=recipes, thresholds=ordered_thresholds, curve=curve)


def report_to_tsv(report: Report) -> str:
    lines = ["recipe\tingredients\tscore\tmax\tcorrectness"]
    for recipe in report.recipes:
        total = sum(recipe.scores.values())
        lines.append(
            f"{recipe.recipe_id}\t{len(recipe.scores)}\t{total}"
            f"\t{2 * len(recipe.scores)}\t{recipe.correctness:.2f}"
        )
    lines.append(f"mean\t\t\t\t{report.mean_correctness:.2f}")
    lines.append("")
    lines.append("threshold\trecipes_at_or_above")
    for threshold, rate in report.curve:
        lines.append(f"{threshold:g}\t{rate:.2f}")
    return "\n".join(lines) + "\n"


def report_to_doc(report: Report) -> dict:
    return {
        "recipes": [
            {
                "id": r.recipe_id,
                "scores": {k: r.scores[k] for k in sorted(r.scores)},
                "correctness": r.correctness,
            }
            for r in report.recipes
        ],
        "mean_correctness": report.mean_correctness,
        "curve": [
            {"threshold": threshold, "rate": rate} for threshold, rate in report.curve
        ],
    }


def write_report(report: Report, out_dir: Path | str) -> list[Path]:
    """Write the table, the JSON summary, and both figures; return paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    tsv_path = out / "report.tsv"
    write_text_atomic(tsv_path, report_to_tsv(report))
    written.append(tsv_path)

    json_path = out / "report.json"
    write_text_atomic(json_path, dumps_canonical(report_to_doc(report)))
    written.append(json_path)

    written.extend(_write_figures(report, out))
    return written


def _write_figures(report: Report, out: Path) -> list[Path]:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    written = []

    fig, ax = plt.subplots(figsize=(6, 4))
    xs = [threshold for threshold, _ in report.curve]
    ys = [rate for _, rate in report.curve]
    ax.plot(xs, ys, marker="o", color="#2e64fe")
    ax.set_xlabel("correctness threshold (%)")
    ax.set_ylabel("recipes at or above (%)")
    ax.set_title("Recipes meeting each correctness threshold")
    ax.set_ylim(-5, 105)
    ax.grid(True, alpha=0.3)
    curve_path = out / "threshold_curve.png"
    fig.savefig(curve_path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    written.append(curve_path)

    fig, ax = plt.subplots(figsize=(6, 4))
    values = [r.correctness for r in report.recipes]
    ax.hist(values, bins=10, range=(0, 100), color="#a9f5a9", edgecolor="black")
    ax.set_xlabel("correctness (%)")
    ax.set_ylabel("recipes")
    ax.set_title("Correctness distribution")
    hist_path = out / "correctness_hist.png"
    fig.savefig(hist_path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    written.append(hist_path)
    return written
