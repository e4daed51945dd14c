"""Per-ingredient progress lines and annotation arithmetic.

A progress line follows one requested ingredient through the tree: every
unit that consumes it (by name, or as part of a composite that contains
it) contributes one step recording the motion applied, the states the
carrier ends up in, and where it ends up. Reviewers score each step 0,
1, or 2; a recipe's correctness is the scored fraction of the maximum,
as a percentage.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Mapping, Optional, Sequence

from .documents import dumps_canonical, write_text_atomic, _load_json
from .errors import ProgressError
from .model import ObjectNode, PlanningRequest, TaskTree


@dataclass(frozen=True)
class ProgressStep:
    motion: str
    states: tuple[str, ...]
    location: Optional[str] = None


@dataclass(frozen=True)
class ProgressLine:
    ingredient: str
    initial_state: str
    steps: tuple[ProgressStep, ...]
    substituted: bool = False
    confidence: Optional[float] = None


def derive_progress_lines(tree: TaskTree, request: PlanningRequest) -> tuple[ProgressLine, ...]:
    """One line per distinct requested ingredient, in request order."""
    substitutions = {
        record.replacement: record.confidence
        for record in tree.provenance
        if record.kind == "object"
    }
    first_state: dict[str, str] = {}
    for name, state in request.ingredients:
        first_state.setdefault(name, state)
    lines = []
    for name in request.names:
        steps = _trace(tree, name)
        if not steps:
            raise ProgressError(
                f"requested ingredient '{name}' is never used by the task tree"
            )
        confidence = substitutions.get(name)
        lines.append(
            ProgressLine(
                ingredient=name,
                initial_state=first_state[name],
                steps=tuple(steps),
                substituted=confidence is not None,
                confidence=confidence,
            )
        )
    return tuple(lines)


def _trace(tree: TaskTree, name: str) -> list[ProgressStep]:
    carrier = name
    steps: list[ProgressStep] = []
    for unit in tree.units:
        hit = next((n for n in unit.inputs if n.name == carrier), None)
        if hit is None:
            hit = next((n for n in unit.inputs if name in n.ingredients), None)
        if hit is None:
            continue
        out = _carrier_output(unit, carrier, name)
        if out is None:
            steps.append(ProgressStep(unit.motion.verb, (), None))
            continue
        steps.append(ProgressStep(unit.motion.verb, out.state_labels, _where(out, name)))
        carrier = out.name
    return steps


def _carrier_output(unit, carrier: str, name: str) -> Optional[ObjectNode]:
    for node in unit.outputs:
        if node.name == name:
            return node
    for node in unit.outputs:
        if node.name == carrier:
            return node
    for node in unit.outputs:
        if name in node.ingredients:
            return node
    return None


def _where(node: ObjectNode, name: str) -> Optional[str]:
    if node.name == name:
        return node.location
    return node.location or node.name


def correctness(scores: Sequence[int], total_steps: int) -> float:
    """Percentage of the maximum score, rounded to two decimals.

    Each step is worth at most 2 points, so a recipe with n scored steps
    tops out at 2n.
    """
    if total_steps <= 0:
        raise ProgressError("correctness needs at least one scored step")
    if len(scores) != total_steps:
        raise ProgressError(
            f"expected {total_steps} scores, got {len(scores)}"
        )
    for value in scores:
        if isinstance(value, bool) or value not in (0, 1, 2):
            raise ProgressError(f"scores must be 0, 1 or 2, got {value!r}")
    exact = Fraction(sum(scores) * 100, 2 * total_steps)
    return float(round(exact, 2))


def threshold_curve(
    values: Sequence[float], thresholds: Sequence[float]
) -> list[tuple[float, float]]:
    """Share of recipes at or above each threshold, as percentages."""
    if not values:
        raise ProgressError("threshold curve needs at least one correctness value")
    points = []
    for threshold in thresholds:
        hits = sum(1 for v in values if v >= threshold)
        rate = Fraction(hits * 100, len(values))
        points.append((float(threshold), float(round(rate, 2))))
    return points


def render_progress_text(lines: Sequence[ProgressLine]) -> str:
    """Human-readable progress summary, one block per ingredient."""
    blocks = []
    for line in lines:
        tag = ""
        if line.substituted:
            confidence = f", confidence {line.confidence:.1f}%" if line.confidence is not None else ""
            tag = f"  (substituted{confidence})"
        blocks.append(f"{line.ingredient} [{line.initial_state}]{tag}")
        for idx, step in enumerate(line.steps, start=1):
            states = ", ".join(step.states) if step.states else "-"
            where = f" @ {step.location}" if step.location else ""
            blocks.append(f"  {idx}. {step.motion} -> {states}{where}")
        blocks.append("")
    return "\n".join(blocks).rstrip("\n") + "\n"


def progress_to_doc(lines: Sequence[ProgressLine]) -> dict:
    doc_lines = []
    for line in lines:
        entry: dict = {
            "ingredient": line.ingredient,
            "initial_state": line.initial_state,
            "steps": [
                {
                    "motion": step.motion,
                    "states": list(step.states),
                    **({"location": step.location} if step.location is not None else {}),
                }
                for step in line.steps
            ],
        }
        if line.substituted:
            entry["substituted"] = True
            if line.confidence is not None:
                entry["confidence"] = line.confidence
        doc_lines.append(entry)
    return {"lines": doc_lines}


def progress_from_doc(doc: Mapping, *, source: Optional[str] = None) -> tuple[ProgressLine, ...]:
    if not isinstance(doc, Mapping) or "lines" not in doc:
        raise ProgressError(f"{source or 'progress document'}: expected a 'lines' field")
    lines = []
    for entry in doc["lines"]:
        steps = tuple(
            ProgressStep(
                motion=step["motion"],
                states=tuple(step.get("states", ())),
                location=step.get("location"),
            )
            for step in entry.get("steps", ())
        )
        lines.append(
            ProgressLine(
                ingredient=entry["ingredient"],
                initial_state=entry.get("initial_state", ""),
                steps=steps,
                substituted=bool(entry.get("substituted", False)),
                confidence=entry.get("confidence"),
            )
        )
    return tuple(lines)


def save_progress(path: Path | str, lines: Sequence[ProgressLine]) -> None:
    write_text_atomic(Path(path), dumps_canonical(progress_to_doc(lines)))


def load_progress(path: Path | str) -> tuple[ProgressLine, ...]:
    path = Path(path)
    return progress_from_doc(_load_json(path), source=str(path))
