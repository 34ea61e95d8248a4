"""Simple undirected graph with stable integer vertex ids.

Vertices keep their ids across deletions; ids of newly created vertices
(degree-2 folds, funnel folds) are fresh and never reused, so a reduction
trace can refer to vertices unambiguously.
"""

from __future__ import annotations

from typing import Iterable, NamedTuple, Optional


class PreconditionError(ValueError):
    """A mathematical precondition of an operation does not hold."""


class PatternMatch(NamedTuple):
    kind: str
    u: int
    out: int
    witness: tuple[int, ...]


class Graph:
    """Mutable container, but all public operations return fresh graphs.

    Callers that branch hold one copy per subproblem; nothing is shared.
    """

    __slots__ = ("_adj", "_next_id")

    def __init__(self, vertices: Iterable[int] = (), edges: Iterable[tuple[int, int]] = ()):
        self._adj: dict[int, set[int]] = {}
        self._next_id = 0
        for v in vertices:
            self.add_vertex(v)
        for u, v in edges:
            self.add_edge(u, v)

    # -- construction ------------------------------------------------------

    def add_vertex(self, v: Optional[int] = None) -> int:
        if v is None:
            v = self._next_id
        v = int(v)
        if v < 0:
            raise ValueError(f"vertex ids must be non-negative, got {v}")
        self._adj.setdefault(v, set())
        self._next_id = max(self._next_id, v + 1)
        return v

    def add_edge(self, u: int, v: int) -> None:
        if u == v:
            raise ValueError(f"self-loop at {u}")
        self.add_vertex(u)
        self.add_vertex(v)
        self._adj[u].add(v)
        self._adj[v].add(u)

    def copy(self) -> "Graph":
        g = Graph()
        g._adj = {v: set(nbrs) for v, nbrs in self._adj.items()}
        g._next_id = self._next_id
        return g

    # -- queries -----------------------------------------------------------

    @property
    def n(self) -> int:
        return len(self._adj)

    @property
    def m(self) -> int:
        return sum(len(nbrs) for nbrs in self._adj.values()) // 2

    def vertices(self) -> list[int]:
        return sorted(self._adj)

    def __contains__(self, v: int) -> bool:
        return v in self._adj

    def __len__(self) -> int:
        return len(self._adj)

    def has_edge(self, u: int, v: int) -> bool:
        return u in self._adj and v in self._adj[u]

    def neighbors(self, v: int) -> set[int]:
        if v not in self._adj:
            raise ValueError(f"unknown vertex {v}")
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self.neighbors(v))

    def max_degree(self) -> int:
        return max((len(nb) for nb in self._adj.values()), default=0)

    def min_degree(self) -> int:
        return min((len(nb) for nb in self._adj.values()), default=0)

    def edges(self) -> list[tuple[int, int]]:
        return sorted((u, v) for u in self._adj for v in self._adj[u] if u < v)

    def _check_vertices(self, s: Iterable[int]) -> set[int]:
        s = set(s)
        missing = s - self._adj.keys()
        if missing:
            raise ValueError(f"unknown vertices {sorted(missing)}")
        return s

    def neighborhood(self, s: Iterable[int], closed: bool = False) -> frozenset[int]:
        """Open or closed neighborhood of a vertex set."""
        s = self._check_vertices(s)
        out: set[int] = set()
        for v in s:
            out |= self._adj[v]
        if closed:
            out |= s
        else:
            out -= s
        return frozenset(out)

    def is_independent(self, s: Iterable[int]) -> bool:
        s = self._check_vertices(s)
        return all(not (self._adj[v] & s) for v in s)

    def surplus(self, indset: Iterable[int]) -> int:
        """|N(I)| - |I| for a non-empty independent set I."""
        s = self._check_vertices(indset)
        if not s:
            raise PreconditionError("surplus of an empty set is undefined")
        if not self.is_independent(s):
            raise PreconditionError(f"set {sorted(s)} is not independent")
        return len(self.neighborhood(s)) - len(s)

    # -- mutations (value semantics: return new graphs) ---------------------

    def delete_vertices(self, s: Iterable[int]) -> "Graph":
        s = self._check_vertices(s)
        g = Graph()
        g._adj = {v: self._adj[v] - s for v in self._adj if v not in s}
        g._next_id = self._next_id
        return g

    def add_vertex_with_edges(self, nbrs: Iterable[int]) -> tuple["Graph", int]:
        nbrs = self._check_vertices(nbrs)
        g = self.copy()
        y = g.add_vertex()
        for v in nbrs:
            g.add_edge(y, v)
        return g, y

    def add_biclique(self, a: Iterable[int], b: Iterable[int]) -> "Graph":
        a = self._check_vertices(a)
        b = self._check_vertices(b)
        if a & b:
            raise ValueError(f"biclique sides overlap: {sorted(a & b)}")
        g = self.copy()
        for u in a:
            for v in b:
                g.add_edge(u, v)
        return g

    # -- structure ----------------------------------------------------------

    def components(self) -> list[list[int]]:
        seen: set[int] = set()
        comps = []
        for start in self.vertices():
            if start in seen:
                continue
            comp = {start}
            queue = [start]
            while queue:
                v = queue.pop()
                for w in self._adj[v]:
                    if w not in comp:
                        comp.add(w)
                        queue.append(w)
            seen |= comp
            comps.append(sorted(comp))
        return comps

    def is_clique(self, s: Iterable[int]) -> bool:
        s = self._check_vertices(s)
        return all(v in self._adj[u] for u in s for v in s if u < v)

    def is_funnel(self, u: int, x: int) -> bool:
        """True when N(u) - {x} is a clique, making (u, x) foldable.

        Plain degree-2 vertices with non-adjacent neighbors are excluded:
        that shape is the degree-2 fold's job, not the funnel rule's.
        """
        nbrs = self.neighbors(u)
        if x not in nbrs or len(nbrs) < 2:
            return False
        if len(nbrs) == 2 and not self.is_clique(nbrs):
            return False
        return self.is_clique(nbrs - {x})

    def find_pattern(self, kind: str) -> Optional[PatternMatch]:
        """Locate a funnel, kite or 3-triangle; lowest (u, out-neighbor) wins.

        funnel: vertex u with neighbor x such that N(u) - {x} is a clique.
        kite: degree-3 u with neighbors x, y, z where x~y and y~z
              (out-neighbor is the end of that path, a valid funnel out).
        three_triangle: degree-3 u whose neighborhood contains an edge;
              out-neighbor is the vertex outside the triangle.
        """
        if kind == "funnel":
            return self._find_funnel()
        if kind == "kite":
            return self._find_kite()
        if kind == "three_triangle":
            return self._find_three_triangle()
        raise ValueError(f"unknown pattern kind {kind!r}")

    def _find_funnel(self) -> Optional[PatternMatch]:
        for u in self.vertices():
            nbrs = self._adj[u]
            if len(nbrs) < 2 or (len(nbrs) == 2 and not self.is_clique(nbrs)):
                continue
            for x in sorted(nbrs):
                rest = nbrs - {x}
                if self.is_clique(rest):
                    return PatternMatch("funnel", u, x, tuple(sorted(rest)))
        return None

    def _find_kite(self) -> Optional[PatternMatch]:
        for u in self.vertices():
            nbrs = self._adj[u]
            if len(nbrs) != 3:
                continue
            ordered = sorted(nbrs)
            # need a path x - y - z inside N(u); y is adjacent to both others
            if not any(len(self._adj[y] & nbrs) == 2 for y in ordered):
                continue
            for x in ordered:
                rest = nbrs - {x}
                if self.is_clique(rest):
                    a, b = sorted(rest)
                    y, z = (a, b) if a in self._adj[x] else (b, a)
                    return PatternMatch("kite", u, x, (y, z))
        return None

    def _find_three_triangle(self) -> Optional[PatternMatch]:
        for u in self.vertices():
            nbrs = self._adj[u]
            if len(nbrs) != 3:
                continue
            for x in sorted(nbrs):
                rest = nbrs - {x}
                if self.is_clique(rest):
                    return PatternMatch("three_triangle", u, x, tuple(sorted(rest)))
        return None

    # -- misc ----------------------------------------------------------------

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._adj == other._adj

    def __hash__(self):  # graphs are mutable containers
        raise TypeError("Graph is not hashable")


def cycle(n: int) -> Graph:
    g = Graph(vertices=range(n))
    for i in range(n):
        g.add_edge(i, (i + 1) % n)
    return g


def path(n: int) -> Graph:
    g = Graph(vertices=range(n))
    for i in range(n - 1):
        g.add_edge(i, i + 1)
    return g


def complete(n: int) -> Graph:
    g = Graph(vertices=range(n))
    for i in range(n):
        for j in range(i + 1, n):
            g.add_edge(i, j)
    return g


def star(leaves: int) -> Graph:
    """K_{1,leaves} with center 0."""
    g = Graph(vertices=range(leaves + 1))
    for i in range(1, leaves + 1):
        g.add_edge(0, i)
    return g
