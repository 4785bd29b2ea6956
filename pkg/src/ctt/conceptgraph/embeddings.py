"""Dense word vectors loaded from a plain-text file."""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path


@dataclass(frozen=True)
class EmbeddingTable:
    dimension: int
    vectors: dict[str, tuple[float, ...]]

    def __contains__(self, key: str) -> bool:
        return key in self.vectors

    def get(self, key: str) -> tuple[float, ...] | None:
        return self.vectors.get(key)

    def phrase_vector(self, stems: tuple[str, ...]) -> tuple[float, ...] | None:
        """Average the member-stem vectors; None when all stems are OOV.

        Out-of-vocabulary stems are skipped rather than zero-filled so a
        partially known phrase keeps a meaningful direction.
        """
        present = [self.vectors[s] for s in stems if s in self.vectors]
        if not present:
            return None
        return tuple(
            sum(vec[i] for vec in present) / len(present)
            for i in range(self.dimension)
        )


def cosine_dense(v: tuple[float, ...], w: tuple[float, ...]) -> float:
    dot = sum(a * b for a, b in zip(v, w))
    nv = math.sqrt(sum(a * a for a in v))
    nw = math.sqrt(sum(b * b for b in w))
    if nv == 0.0 or nw == 0.0:
        return 0.0
    return max(-1.0, min(1.0, dot / (nv * nw)))


def load_embeddings(path: Path) -> EmbeddingTable:
    """Load `dim` on line 1 then `word f1 .. fd` per line."""
    lines = path.read_text(encoding="utf-8").splitlines()
    if not lines:
        raise ValueError(f"{path}: empty embedding file")
    dimension = int(lines[0].strip())
    vectors: dict[str, tuple[float, ...]] = {}
    for ln, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != dimension + 1:
            raise ValueError(f"{path}:{ln}: expected {dimension} floats")
        vec = tuple(float(x) for x in parts[1:])
        if all(x == 0.0 for x in vec):
            raise ValueError(f"{path}:{ln}: zero vector for {parts[0]!r}")
        vectors[parts[0]] = vec
    return EmbeddingTable(dimension=dimension, vectors=vectors)
