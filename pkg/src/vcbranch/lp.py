"""Everything derived from the vertex cover LP relaxation.

The LP is solved combinatorially: a maximum matching of the bipartite
double cover (left copy Lu, right copy Rv, one edge per direction of each
original edge) has size 2*lambda(G), and the Koenig cover extracted from it
yields an optimal half-integral solution.  The zero-set of that solution is
an independent set realizing min{0, minsurp(G)}, which drives the minsurp
recursion minsurp(G) = min_x (minsurp^-(G - N[x]) + deg(x) - 1).

All half-integral quantities are carried as doubled integers; nothing in
this module touches floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional

from .graph import Graph, PreconditionError

INFINITE_SURPLUS = math.inf

_EMPTY: frozenset[int] = frozenset()


@dataclass(frozen=True)
class HalfIntegralSolution:
    """Optimal half-integral LP solution; theta stored as doubled values."""

    theta2: dict[int, int]  # vertex -> 0, 1 or 2
    weight2: int            # sum of theta2 = 2*lambda

    @property
    def weight(self) -> float:
        return self.weight2 / 2

    def zero_set(self) -> frozenset[int]:
        return frozenset(v for v, t in self.theta2.items() if t == 0)

    def one_set(self) -> frozenset[int]:
        return frozenset(v for v, t in self.theta2.items() if t == 2)


@dataclass(frozen=True)
class SurplusCert:
    """An independent set together with its surplus |N(I)| - |I|."""

    indset: frozenset[int]
    surplus: int

    def verify(self, g: Graph) -> bool:
        return g.surplus(self.indset) == self.surplus


# ---------------------------------------------------------------------------
# LP core: Hopcroft-Karp on the bipartite double cover + Koenig extraction.
# All routines take an `excluded` mask so callers can work on G - X without
# materializing subgraphs.
# ---------------------------------------------------------------------------

def _lp_core(g: Graph, excluded: frozenset[int]) -> tuple[int, frozenset[int], int]:
    """Return (weight2, zero_set, n_active) for LPVC(G - excluded)."""
    adj_map = g._adj
    verts = sorted(v for v in adj_map if v not in excluded)
    n = len(verts)
    if n == 0:
        return 0, _EMPTY, 0
    index = {v: i for i, v in enumerate(verts)}
    adj: list[list[int]] = []
    for v in verts:
        adj.append(sorted(index[w] for w in adj_map[v] if w not in excluded))

    match_l = [-1] * n
    match_r = [-1] * n
    inf = n + 1
    dist = [0] * n

    # Hopcroft-Karp phases
    while True:
        queue = []
        for u in range(n):
            if match_l[u] < 0:
                dist[u] = 0
                queue.append(u)
            else:
                dist[u] = inf
        found = inf
        qi = 0
        while qi < len(queue):
            u = queue[qi]
            qi += 1
            du = dist[u]
            if du >= found:
                continue
            for w in adj[u]:
                nxt = match_r[w]
                if nxt < 0:
                    if found == inf:
                        found = du + 1
                elif dist[nxt] == inf:
                    dist[nxt] = du + 1
                    queue.append(nxt)
        if found == inf:
            break

        def dfs(u: int) -> bool:
            for w in adj[u]:
                nxt = match_r[w]
                if nxt < 0:
                    if dist[u] + 1 == found:
                        match_r[w] = u
                        match_l[u] = w
                        return True
                elif dist[nxt] == dist[u] + 1 and dfs(nxt):
                    match_r[w] = u
                    match_l[u] = w
                    return True
            dist[u] = inf
            return False

        for u in range(n):
            if match_l[u] < 0:
                dfs(u)

    weight2 = sum(1 for u in range(n) if match_l[u] >= 0)

    # Koenig: alternating reachability from unmatched left vertices.
    seen_l = [False] * n
    seen_r = [False] * n
    queue = [u for u in range(n) if match_l[u] < 0]
    for u in queue:
        seen_l[u] = True
    qi = 0
    while qi < len(queue):
        u = queue[qi]
        qi += 1
        for w in adj[u]:
            if not seen_r[w]:
                seen_r[w] = True
                nxt = match_r[w]
                if nxt >= 0 and not seen_l[nxt]:
                    seen_l[nxt] = True
                    queue.append(nxt)

    # cover = (L not reachable) + (R reachable); theta2(v) = Lv + Rv in cover
    zero = frozenset(verts[i] for i in range(n) if seen_l[i] and not seen_r[i])
    return weight2, zero, n


def _theta2_from_cover(g: Graph, excluded: frozenset[int]) -> HalfIntegralSolution:
    adj_map = g._adj
    verts = sorted(v for v in adj_map if v not in excluded)
    n = len(verts)
    weight2, zero, _ = _lp_core(g, excluded)
    theta2: dict[int, int] = {}
    for v in verts:
        theta2[v] = 1
    for v in zero:
        theta2[v] = 0
    ones = set()
    for v in zero:
        for w in adj_map[v]:
            if w not in excluded:
                ones.add(w)
    for v in ones:
        theta2[v] = 2
    # remaining half vertices already at 1; weight must come out to 2*lambda
    assert sum(theta2.values()) == weight2 or n == 0
    return HalfIntegralSolution(theta2=theta2, weight2=weight2)


def lp_basic_solution(g: Graph, excluded: Iterable[int] = ()) -> HalfIntegralSolution:
    """Optimal half-integral solution to LPVC(g - excluded).

    The zero-set Z is independent, N(Z) is the one-set, and
    surp(Z) = 2*weight - n = min{0, minsurp}.
    """
    return _theta2_from_cover(g, frozenset(excluded))


def lp_weight2(g: Graph, excluded: frozenset[int] = _EMPTY) -> int:
    """2*lambda(g - excluded)."""
    return _lp_core(g, excluded)[0]


def _msm_zeroset(g: Graph, excluded: frozenset[int]) -> tuple[int, frozenset[int]]:
    """min{0, minsurp} of g - excluded, with a zero-set certificate.

    The certificate is non-empty exactly when the value is negative.
    """
    weight2, zero, n = _lp_core(g, excluded)
    return weight2 - n, zero


def _masked_closed_nbhd(g: Graph, x: int, excluded: frozenset[int]) -> frozenset[int]:
    return frozenset(w for w in g._adj[x] if w not in excluded) | {x}


def minsurp_full(
    g: Graph, excluded: frozenset[int] = _EMPTY, *, need_table: bool = False
) -> tuple[int, frozenset[int], Optional[dict[int, tuple[int, frozenset[int]]]]]:
    """(minsurp, certificate indset, per-vertex table or None).

    Fast path: one LP call decides minsurp < 0 and certifies it via the
    zero-set.  Otherwise the per-vertex recursion runs; the table maps x to
    (minsurp^-(G - N[x]) + deg(x) - 1, canonical min-set through x).  With
    need_table=False the sweep stops at the first vertex witnessing
    minsurp = 0 (the floor once the fast path fails).
    """
    adj_map = g._adj
    verts = sorted(v for v in adj_map if v not in excluded)
    if not verts:
        raise ValueError("minsurp of an empty graph is undefined")
    msm, zero = _msm_zeroset(g, excluded)
    if msm < 0 and not need_table:
        return msm, zero, None
    best_v = None
    best_cert = None
    table: dict[int, tuple[int, frozenset[int]]] = {}
    for x in verts:
        nbrs = [w for w in adj_map[x] if w not in excluded]
        sub_excluded = excluded | set(nbrs) | {x}
        msm_x, zero_x = _msm_zeroset(g, sub_excluded)
        v_x = len(nbrs) - 1 + msm_x
        cert_x = zero_x | {x}
        table[x] = (v_x, cert_x)
        if best_v is None or v_x < best_v:
            best_v, best_cert = v_x, cert_x
            if not need_table and msm == 0 and v_x == 0:
                break  # 0 is the floor here; x is the lowest witness
    return best_v, best_cert, (table if need_table else None)


def minsurp(g: Graph, excluded: Iterable[int] = ()) -> SurplusCert:
    """Minimum surplus over non-empty independent sets, with certificate."""
    value, cert, _ = minsurp_full(g, frozenset(excluded))
    return SurplusCert(indset=frozenset(cert), surplus=value)


def find_min_set(g: Graph, x: Iterable[int]) -> Optional[SurplusCert]:
    """A min-set of g containing the independent set x, or None.

    Containment is decided by the equality test
    minsurp(G) == minsurp^-(G - N[X]) + surp(X).
    """
    xs = frozenset(x)
    if not xs:
        if g.n == 0:
            raise ValueError("find_min_set on an empty graph")
        return minsurp(g)
    if not g.is_independent(xs):
        raise PreconditionError(f"{sorted(xs)} is not independent")
    ms, _, _ = minsurp_full(g)
    surp_x = g.surplus(xs)
    closed = set(g.neighborhood(xs, closed=True))
    msm_x, zero_x = _msm_zeroset(g, frozenset(closed))
    if msm_x + surp_x != ms:
        return None
    return SurplusCert(indset=zero_x | xs, surplus=ms)


def shadow(g: Graph, x: Iterable[int]):
    """minsurp(g - x); +infinity when g - x is empty."""
    xs = g._check_vertices(x)
    if len(xs) >= g.n:
        return INFINITE_SURPLUS
    value, _, _ = minsurp_full(g, frozenset(xs))
    return value


def shadow_minus(g: Graph, x: Iterable[int]):
    """min{0, shadow(x)} via a single LP; +infinity sentinel when empty."""
    xs = frozenset(x)
    if len(xs) >= g.n:
        return INFINITE_SURPLUS
    return _msm_zeroset(g, xs)[0]


def find_nonsingleton_minset(
    g: Graph, table: dict[int, tuple[int, frozenset[int]]], target: int
) -> Optional[frozenset[int]]:
    """A min-set of size >= 2 with surplus == target, if one exists.

    First pass reads the canonical certificates off the minsurp table; the
    gap case (zero-set empty because minsurp(G - N[x]) == 0 exactly) runs
    one nested minsurp per remaining candidate.
    """
    second_pass = []
    for x in sorted(table):
        v_x, cert_x = table[x]
        if v_x != target:
            continue
        if len(cert_x) >= 2:
            return cert_x
        second_pass.append(x)
    for x in second_pass:
        closed = g.neighborhood([x], closed=True)
        if len(closed) >= g.n:
            continue
        value, cert, _ = minsurp_full(g, frozenset(closed))
        if value == 0:
            return frozenset(cert) | {x}
    return None


def is_blocker(g: Graph, u: int, x: int) -> Optional[SurplusCert]:
    """Certificate that x lies in a min-set of G - N[u] and u is blocked."""
    closed = frozenset(g.neighborhood([u], closed=True))
    if x in closed or len(closed) >= g.n:
        return None
    value, _, _ = minsurp_full(g, closed)
    if value > 0:
        return None
    sub_excluded = closed | _masked_closed_nbhd(g, x, closed)
    msm_x, zero_x = _msm_zeroset(g, sub_excluded)
    deg_x = sum(1 for w in g._adj[x] if w not in closed)
    if msm_x + deg_x - 1 != value:
        return None
    return SurplusCert(indset=zero_x | {x}, surplus=value)


def find_blocker(g: Graph, u: int) -> Optional[tuple[int, SurplusCert]]:
    """Lowest-id blocker of u within the smallest canonical min-set.

    Returns None when u is not blocked (shadow(N[u]) > 0) or G - N[u] is
    empty.  Candidates are ranked by (certificate size, vertex id).
    """
    closed = frozenset(g.neighborhood([u], closed=True))
    if len(closed) >= g.n:
        return None
    value, cert, table = minsurp_full(g, closed, need_table=True)
    if value > 0:
        return None
    best = None
    for x, (v_x, cert_x) in sorted(table.items()):
        if v_x != value:
            continue
        key = (len(cert_x), x)
        if best is None or key < best[0]:
            best = (key, x, cert_x)
    if best is None:  # pragma: no cover - table always witnesses the min
        return None
    _, x, cert_x = best
    return x, SurplusCert(indset=cert_x, surplus=value)


# ---------------------------------------------------------------------------


class Instance:
    """A decision instance <G, k> with cached LP value.

    lambda and mu = k - lambda are half-integers, stored doubled.
    """

    __slots__ = ("graph", "k", "lambda2")

    def __init__(self, graph: Graph, k: int, lambda2: Optional[int] = None):
        self.graph = graph
        self.k = k
        self.lambda2 = lp_weight2(graph) if lambda2 is None else lambda2

    @property
    def mu2(self) -> int:
        return 2 * self.k - self.lambda2

    @property
    def lam(self) -> float:
        return self.lambda2 / 2

    @property
    def mu(self) -> float:
        return self.mu2 / 2

    def lp_infeasible(self) -> bool:
        """mu < 0 certifies that no cover of size <= k exists."""
        return self.mu2 < 0

    def with_graph(self, graph: Graph, k: int) -> "Instance":
        return Instance(graph, k)

    def __repr__(self) -> str:
        return f"Instance(n={self.graph.n}, k={self.k}, lambda={self.lam}, mu={self.mu})"
