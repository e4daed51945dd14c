"""Exception hierarchy shared across the toolkit.

Every error carries the name of the subsystem that raised it so the CLI
can report failures with context instead of a bare traceback.
"""

from __future__ import annotations


class FoonError(Exception):
    """Base class for all toolkit errors."""

    subsystem = "foonplan"

    def __str__(self) -> str:
        msg = super().__str__()
        return f"{self.subsystem}: {msg}" if msg else self.subsystem


class GraphValidationError(FoonError):
    """A node, unit, or subgraph violates a structural invariant."""

    subsystem = "model"


class DocumentError(FoonError):
    """A document failed to parse or validate.

    ``source`` is the file (or other origin) of the document and
    ``where`` is a dotted path to the offending field when known.
    """

    subsystem = "documents"

    def __init__(self, message: str, *, source: str | None = None, where: str | None = None):
        self.source = source
        self.where = where
        parts = []
        if source:
            parts.append(str(source))
        if where:
            parts.append(where)
        prefix = ": ".join(parts)
        super().__init__(f"{prefix}: {message}" if prefix else message)


class MergeError(FoonError):
    subsystem = "store"


class EmbeddingError(FoonError):
    subsystem = "embedding"


class PlanningError(FoonError):
    """Base class for failures while deriving a task tree."""

    subsystem = "planning"


class NoRecipesError(PlanningError):
    """No recipe of the requested dish type exists in the network."""

    subsystem = "goals"


class NoPathError(PlanningError):
    """No executable unit sequence reaches the goal.

    ``unmet`` lists the object keys the search could not satisfy, which
    is the most useful starting point when debugging a dead request.
    """

    subsystem = "retrieval"

    def __init__(self, message: str, unmet: tuple = ()):
        self.unmet = tuple(unmet)
        if self.unmet:
            pretty = ", ".join(sorted(_fmt_key(k) for k in self.unmet))
            message = f"{message} (unsatisfied: {pretty})"
        super().__init__(message)


class SearchBudgetError(PlanningError):
    """The search exceeded max_paths or max_depth.

    Exceeding a budget is an error, never a silent truncation: a capped
    enumeration could return a tree that is not actually the best one.
    """

    subsystem = "retrieval"

    def __init__(self, message: str, *, paths_seen: int = 0, best_score: int | None = None):
        self.paths_seen = paths_seen
        self.best_score = best_score
        detail = f"{message} (combinations enumerated: {paths_seen}"
        if best_score is not None:
            detail += f", best overlap before stopping: {best_score}"
        detail += ")"
        super().__init__(detail)


class SubstitutionError(PlanningError):
    subsystem = "modify"


class IntegrationError(PlanningError):
    subsystem = "modify"


class ProgressError(FoonError):
    subsystem = "progress"


class ServeError(FoonError):
    subsystem = "serve"


def _fmt_key(key) -> str:
    try:
        name, states = key
        labels = ",".join(sorted(s.label if hasattr(s, "label") else str(s) for s in states))
        return f"{name}{{{labels}}}" if labels else name
    except Exception:
        return str(key)
