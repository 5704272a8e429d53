"""Seeded random shapes and two-planes for property checks."""

from __future__ import annotations

import numpy as np

from .nbody import com_embedding
from .shape import ReducedPoint, TangentPair, horizontal_frame


def min_separation(p: ReducedPoint) -> float:
    """Smallest pairwise body distance of the unit-norm representative."""
    q = com_embedding(p.n).embed(p.coords / p.norm)
    i, j = np.triu_indices(p.n, 1)
    return float(np.min(np.abs(q[i] - q[j])))


def random_point(rng: np.random.Generator, n: int, min_sep: float = 0.15) -> ReducedPoint:
    """Gaussian point of C^(n-1), normalized, rejected until bodies are ``min_sep`` apart."""
    while True:
        z = rng.normal(size=n - 1) + 1j * rng.normal(size=n - 1)
        p = ReducedPoint(z / np.linalg.norm(z))
        if min_separation(p) >= min_sep:
            return p


def random_pair(rng: np.random.Generator, p: ReducedPoint) -> TangentPair:
    """Random horizontal two-plane at p."""
    F = np.column_stack(horizontal_frame(p))
    a = rng.normal(size=F.shape[1])
    b = rng.normal(size=F.shape[1])
    return TangentPair.spanning(p, F @ a, F @ b)


def random_configuration(rng: np.random.Generator, n: int, min_sep: float = 0.3) -> np.ndarray:
    while True:
        q = rng.normal(size=n) + 1j * rng.normal(size=n)
        i, j = np.triu_indices(n, 1)
        if np.min(np.abs(q[i] - q[j])) >= min_sep:
            return q
