"""Independent test oracles and corpus builders.

Everything here is deliberately naive: exhaustive enumeration over subsets
or over {0, 1/2, 1}^n assignments, independent of the solver's code paths.
"""

from __future__ import annotations

import itertools
from typing import Iterable

from vcbranch.graph import Graph
from vcbranch.cli import NAMED_GRAPHS, gnp


def is_cover(g: Graph, cover: Iterable[int]) -> bool:
    cover = set(cover)
    return all(u in cover or v in cover for u, v in g.edges())


def exhaustive_vc(g: Graph) -> int:
    """Minimum cover size by subset enumeration in increasing size."""
    verts = g.vertices()
    edges = g.edges()
    if not edges:
        return 0
    for size in range(len(verts) + 1):
        for subset in itertools.combinations(verts, size):
            s = set(subset)
            if all(u in s or v in s for u, v in edges):
                return size
    raise AssertionError("unreachable")


def exhaustive_lp_weight2(g: Graph) -> int:
    """2 * optimum of the LP over all {0, 1/2, 1} assignments."""
    verts = g.vertices()
    edges = [(verts.index(u), verts.index(v)) for u, v in g.edges()]
    best = None
    for theta in itertools.product((0, 1, 2), repeat=len(verts)):
        if all(theta[u] + theta[v] >= 2 for u, v in edges):
            w = sum(theta)
            if best is None or w < best:
                best = w
    return 0 if best is None else best


def exhaustive_minsurp(g: Graph) -> int:
    """Minimum of |N(I)| - |I| over all non-empty independent sets."""
    verts = g.vertices()
    best = None
    for size in range(1, len(verts) + 1):
        for subset in itertools.combinations(verts, size):
            s = set(subset)
            if any(g.neighbors(u) & s for u in s):
                continue
            surp = len(g.neighborhood(s)) - len(s)
            if best is None or surp < best:
                best = surp
    if best is None:
        raise ValueError("empty graph")
    return best


P_CHOICES = (0.1, 0.2, 0.3, 0.4, 0.5)


def random_corpus(count: int, n_max: int = 14, n_min: int = 6) -> list[tuple[int, Graph]]:
    """Deterministic seeded G(n, p) corpus used across the test suite."""
    out = []
    span = n_max - n_min + 1
    for seed in range(count):
        n = n_min + seed % span
        p = P_CHOICES[seed % len(P_CHOICES)]
        out.append((seed, gnp(n, p, seed)))
    return out


NAMED_EXPECTED = {
    "c5": 3, "c6": 3, "c7": 4, "c8": 4, "c9": 5,
    "petersen": 6, "q4": 8, "c9_12": 6, "k4": 3, "k13": 1,
}

NAMED_CORPUS = sorted(set(NAMED_EXPECTED) | {
    "grid2x4", "grid3x3", "grid3x4", "c11_123", "c13_123", "k5", "k3",
})


def named_corpus() -> list[tuple[str, Graph]]:
    return [(name, NAMED_GRAPHS[name]()) for name in NAMED_CORPUS]
