"""Word-embedding table, similarity counting, and nearest-ingredient lookup.

The table is a plain text file: a header line with the vector count and
dimension, then one token per line followed by its components. Vectors
are unit-normalized on load. Multi-word names embed as the renormalized
mean of their known word vectors. Names with no known words fall back to
exact-string comparison so the pipeline stays total: identical strings
score 1.0, anything else 0.0.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from .errors import EmbeddingError
from .model import normalize_name


@dataclass(frozen=True)
class SimilarityConfig:
    """Planning knobs for similarity decisions.

    Two ingredients count as interchangeable when their cosine similarity
    is strictly above ``threshold``. 0.90 is deliberately conservative:
    almost-synonyms pass, loosely related foods do not.
    """

    threshold: float = 0.90

    def __post_init__(self):
        if not (-1.0 <= self.threshold <= 1.0):
            raise EmbeddingError(f"threshold {self.threshold} outside [-1, 1]")


@dataclass(frozen=True)
class EmbeddingTable:
    dimension: int
    vectors: Mapping[str, np.ndarray]

    def __contains__(self, token: str) -> bool:
        return normalize_name(token) in self.vectors


def load_embeddings(path: str | Path) -> EmbeddingTable:
    """Parse and unit-normalize a text-format vector table."""
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise EmbeddingError(f"cannot read {path}: {exc}") from exc
    if not lines:
        raise EmbeddingError(f"{path}: empty embedding file")
    header = lines[0].split()
    if len(header) != 2:
        raise EmbeddingError(f"{path}: header must be '<count> <dimension>', got {lines[0]!r}")
    try:
        count, dimension = int(header[0]), int(header[1])
    except ValueError as exc:
        raise EmbeddingError(f"{path}: non-numeric header {lines[0]!r}") from exc
    if dimension <= 0:
        raise EmbeddingError(f"{path}: dimension must be positive")
    vectors: dict[str, np.ndarray] = {}
    for line_no, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        fields = line.split()
        if len(fields) != dimension + 1:
            raise EmbeddingError(
                f"{path}: line {line_no} has {len(fields) - 1} components, expected {dimension}"
            )
        token = normalize_name(fields[0])
        try:
            vec = np.array([float(f) for f in fields[1:]], dtype=np.float64)
        except ValueError as exc:
            raise EmbeddingError(f"{path}: line {line_no}: non-numeric component") from exc
        norm = float(np.linalg.norm(vec))
        if norm == 0.0:
            raise EmbeddingError(f"{path}: line {line_no}: zero vector for {token!r}")
        vectors[token] = vec / norm
    if len(vectors) != count:
        raise EmbeddingError(f"{path}: header promises {count} vectors, file has {len(vectors)}")
    return EmbeddingTable(dimension, vectors)


def embed(table: EmbeddingTable, name: str) -> Optional[np.ndarray]:
    """Vector for a possibly multi-word name, or None when unembeddable.

    Multi-word names average the vectors of their known words and
    renormalize; words the table does not know are skipped.
    """
    tokens = normalize_name(name).split()
    known = [table.vectors[t] for t in tokens if t in table.vectors]
    if not known:
        return None
    mean = np.mean(known, axis=0)
    norm = float(np.linalg.norm(mean))
    if norm == 0.0:
        return None
    return mean / norm


def similarity(table: EmbeddingTable, a: str, b: str) -> float:
    """Cosine similarity, with exact-string fallback for unknown names."""
    va = embed(table, a)
    vb = embed(table, b)
    if va is None or vb is None:
        return 1.0 if normalize_name(a) == normalize_name(b) else 0.0
    return float(np.dot(va, vb))


def compute_similarity(
    table: EmbeddingTable,
    config: SimilarityConfig,
    requested: Iterable[str],
    available: Iterable[str],
) -> int:
    """Count (requested, available) pairs whose similarity beats the threshold.

    The full cross product is examined, so one requested name can match
    several available ones and each match counts. This is the overlap
    score that both goal selection and path selection maximize.
    """
    req = [normalize_name(n) for n in requested]
    avail = [normalize_name(n) for n in available]
    count = 0
    for i in req:
        for s in avail:
            if similarity(table, i, s) > config.threshold:
                count += 1
    return count


def nearest_ingredient(
    table: EmbeddingTable,
    name: str,
    candidates: Sequence[str],
) -> tuple[str, float]:
    """The most similar candidate plus a confidence percentage.

    Confidence is 100 times the cosine similarity. Ties break to the
    lexicographically smallest candidate so substitution is reproducible.
    An ingredient already among the candidates maps to itself at 100.
    """
    pool = [normalize_name(c) for c in candidates]
    if not pool:
        raise EmbeddingError(f"no candidates to substitute for '{name}'")
    norm = normalize_name(name)
    if embed(table, norm) is None and all(embed(table, c) is None for c in pool):
        if norm in pool:
            return norm, 100.0
        raise EmbeddingError(
            f"'{name}' and every candidate are absent from the embedding table; "
            f"no substitution basis exists"
        )
    best_name: Optional[str] = None
    best_sim = -2.0
    for candidate in pool:
        sim = similarity(table, norm, candidate)
        if sim > best_sim or (sim == best_sim and best_name is not None and candidate < best_name):
            best_name, best_sim = candidate, sim
    assert best_name is not None
    return best_name, 100.0 * best_sim
