"""Branch-seq algebra, primitive branching rules, and the branch selector.

A branch-seq is a list of (dmu, dk) drop pairs; its value at measure
constants (a, b) is sum_i exp(-a*dmu_i - b*dk_i) and must stay <= 1 for the
measure argument to go through.  The selector mirrors the availability
case analysis: surplus-two indsets first, then splitting / blocker rules
keyed on the shadow of the chosen max-degree vertex.  Where a case needs a
"further simplification worth >= c" guarantee, the selector checks the
deterministic reduction policy directly (reduction_gain) instead of
re-verifying the combinatorial argument; children are emitted simplified,
and claimed drops never exceed the realized ones.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .graph import Graph, PreconditionError
from .lp import (
    Instance,
    SurplusCert,
    _msm_zeroset,
    find_blocker,
    find_nonsingleton_minset,
    is_blocker,
    minsurp_full,
    shadow_minus,
)
from .reduce import ReductionTrace, reduction_gain, simplify

BranchSeq = tuple[tuple[float, int], ...]


@dataclass(frozen=True)
class MeasureParams:
    a: float
    b: float

    def __post_init__(self):
        if self.a < 0 or self.b < 0:
            raise ValueError("measure constants must be non-negative")


#: measure constants of the degree-stratified simple solvers; level 7 tracks
#: k only, with e^{-b} + e^{-7b} < 1 at b = ln(1.2575).
SIMPLE_LEVEL_PARAMS: dict[int, MeasureParams] = {
    4: MeasureParams(0.71808, 0.019442),
    5: MeasureParams(0.44849, 0.085297),
    6: MeasureParams(0.20199, 0.160637),
    7: MeasureParams(0.0, math.log(1.2575)),
}


def val(params: MeasureParams, seq: Iterable[tuple[float, int]]) -> float:
    return sum(math.exp(-params.a * dmu - params.b * dk) for dmu, dk in seq)


def dominates(params: MeasureParams, b1: Iterable, b2: Iterable) -> bool:
    """b1 dominates b2 at these constants: val(b1) <= val(b2)."""
    return val(params, b1) <= val(params, b2) + 1e-12


@dataclass
class BranchChild:
    include: frozenset[int]      # forced into the cover
    exclude: frozenset[int]      # forced out (deleted, neighbors included)
    inst: Instance               # simplified subproblem
    trace: ReductionTrace        # simplification applied after deletion
    dmu2: int                    # realized mu drop vs parent, doubled
    dk: int                      # realized k drop vs parent

    @property
    def dmu(self) -> float:
        return self.dmu2 / 2


@dataclass
class BranchDecision:
    rule: str
    children: list[BranchChild]
    claimed: BranchSeq
    case: Optional[str] = None

    def realized(self) -> BranchSeq:
        return tuple((c.dmu, c.dk) for c in self.children)


def make_child(parent: Instance, include: Iterable[int], delete: Iterable[int]) -> BranchChild:
    """Delete a vertex set, charge the included part to the cover, simplify."""
    include = frozenset(include)
    delete = frozenset(delete)
    g = parent.graph
    exclude = delete - include
    for v in exclude:
        if not g.neighbors(v) <= include:
            raise PreconditionError(
                f"excluded vertex {v} has neighbors outside the included set"
            )
    child = Instance(g.delete_vertices(delete), parent.k - len(include), lambda2=0)
    child, trace = simplify(child)
    return BranchChild(
        include=include,
        exclude=exclude,
        inst=child,
        trace=trace,
        dmu2=parent.mu2 - child.mu2,
        dk=parent.k - child.k,
    )


def _cap_claim(claim: BranchSeq, children: Sequence[BranchChild]) -> BranchSeq:
    """Never claim more than was realized; keeps realized dominating claimed."""
    return tuple(
        (min(dmu, c.dmu2 / 2), min(dk, c.dk))
        for (dmu, dk), c in zip(claim, children)
    )


def _decision(parent: Instance, rule: str, parts: list[tuple[set, set]],
              claimed: Optional[BranchSeq], case: Optional[str]) -> BranchDecision:
    children = [make_child(parent, inc, dele) for inc, dele in parts]
    if claimed is None:
        claimed = tuple((0.0, max(1, len(inc))) for inc, _ in parts)
    if len(claimed) != len(children):
        raise ValueError("claimed branch-seq length does not match children")
    return BranchDecision(rule, children, _cap_claim(claimed, children), case)


# ---------------------------------------------------------------------------
# primitive rules
# ---------------------------------------------------------------------------

def split_vertex(inst: Instance, u: int, claimed: Optional[BranchSeq] = None,
                 case: Optional[str] = None) -> BranchDecision:
    """Children <G - u, k - 1> and <G - N[u], k - deg(u)>."""
    g = inst.graph
    nbrs = set(g.neighbors(u))
    if not nbrs:
        raise PreconditionError(f"cannot split on isolated vertex {u}")
    parts = [({u}, {u}), (nbrs, nbrs | {u})]
    return _decision(inst, "split-vertex", parts, claimed, case)


def split_indset(inst: Instance, cert: SurplusCert, claimed: Optional[BranchSeq] = None,
                 case: Optional[str] = None, _trusted: bool = False) -> BranchDecision:
    """Children <G - I, k - |I|> and <G - N[I], k - |N(I)|> for a critical I."""
    g = inst.graph
    indset = cert.indset
    if not cert.verify(g):
        raise PreconditionError("certificate surplus does not match the graph")
    if len(indset) > 1 and not _trusted:
        value, _, _ = minsurp_full(g)
        if value != cert.surplus:
            raise PreconditionError("indset is neither a singleton nor a min-set")
    nbrs = set(g.neighborhood(indset))
    if not nbrs:
        raise PreconditionError("indset with empty neighborhood: P1 applies instead")
    parts = [(set(indset), set(indset)), (nbrs, nbrs | indset)]
    return _decision(inst, "split-indset", parts, claimed, case)


def rule_b(inst: Instance, x: int, us: Iterable[int], claimed: Optional[BranchSeq] = None,
           case: Optional[str] = None, _trusted: bool = False) -> BranchDecision:
    """Blocker rule: <G - (us + x), k - |us| - 1> and <G - N[x], k - deg(x)>."""
    g = inst.graph
    us = sorted(set(us))
    if x in us:
        raise PreconditionError("blocker coincides with a blocked vertex")
    for u in us:
        if g.has_edge(u, x):
            raise PreconditionError(f"blocker {x} is adjacent to {u}")
        if not _trusted and is_blocker(g, u, x) is None:
            raise PreconditionError(f"{x} is not a blocker of {u}")
    both = set(us) | {x}
    nbrs = set(g.neighbors(x))
    parts = [(both, both), (nbrs, nbrs | {x})]
    return _decision(inst, "rule-B", parts, claimed, case)


def rule_a1(inst: Instance, v: int, claimed: Optional[BranchSeq] = None,
            case: Optional[str] = None) -> BranchDecision:
    """Branch on a 2-vertex v: omit v, or omit both its neighbors."""
    g = inst.graph
    if g.degree(v) != 2:
        raise PreconditionError(f"{v} is not a 2-vertex")
    x, y = sorted(g.neighbors(v))
    if g.has_edge(x, y):
        raise PreconditionError(f"neighbors {x},{y} of {v} are adjacent")
    outer = set(g.neighborhood([x, y]))
    parts = [({x, y}, {v, x, y}), (outer, outer | {x, y})]
    return _decision(inst, "A1", parts, claimed, case)


def rule_a2(inst: Instance, u: int, x: int, v: int, claimed: Optional[BranchSeq] = None,
            case: Optional[str] = None) -> BranchDecision:
    """Branch on funnel (u, x) and v in N(u) - N[x]: v in C, or v,x both out."""
    g = inst.graph
    if not g.is_funnel(u, x):
        raise PreconditionError(f"({u}, {x}) is not a funnel")
    if v not in g.neighbors(u) - {x} or g.has_edge(v, x):
        raise PreconditionError(f"{v} must lie in N({u}) - N[{x}]")
    outer = set(g.neighborhood([v, x]))
    parts = [({v}, {v}), (outer, outer | {v, x})]
    return _decision(inst, "A2", parts, claimed, case)


def rule_a3(inst: Instance, u: int, v: int, claimed: Optional[BranchSeq] = None,
            case: Optional[str] = None) -> BranchDecision:
    """Branch on shared neighbors: u,v both in C, or N(u) & N(v) in C."""
    g = inst.graph
    if u == v:
        raise PreconditionError("A3 needs two distinct vertices")
    shared = g.neighbors(u) & g.neighbors(v)
    if not shared:
        raise PreconditionError(f"{u} and {v} share no neighbors")
    parts = [({u, v}, {u, v}), (set(shared), set(shared))]
    return _decision(inst, "A3", parts, claimed, case)


# ---------------------------------------------------------------------------
# the branch selector
# ---------------------------------------------------------------------------

@dataclass
class SelectorStats:
    cases: dict = field(default_factory=dict)
    fallbacks: int = 0

    def note(self, case: Optional[str]) -> None:
        if case:
            self.cases[case] = self.cases.get(case, 0) + 1
            if case.startswith("fallback"):
                self.fallbacks += 1


def _closed(g: Graph, u: int) -> frozenset[int]:
    return frozenset(g.neighbors(u)) | {u}


def _blocked_minset(g: Graph, u: int) -> tuple[Optional[int], frozenset[int]]:
    """(minsurp, min-set) of G - N[u]; (None, empty) when that graph is empty.

    Falls back to the full sweep only when the one-LP bound is 0.
    """
    closed = _closed(g, u)
    if len(closed) >= g.n:
        return None, frozenset()
    msm, zero = _msm_zeroset(g, closed)
    if msm < 0:
        return msm, zero
    value, cert, _ = minsurp_full(g, closed)
    return value, frozenset(cert)


def _blockers_of(g: Graph, u: int) -> tuple[Optional[int], list[tuple[int, frozenset[int]]]]:
    """All canonical (blocker, min-set) pairs of G - N[u], if u is blocked."""
    closed = _closed(g, u)
    if len(closed) >= g.n:
        return None, []
    value, _, table = minsurp_full(g, closed, need_table=True)
    if value > 0:
        return value, []
    out = [(x, cert) for x, (v, cert) in sorted(table.items()) if v == value]
    return value, out


class _Selector:
    def __init__(self, inst: Instance):
        self.inst = inst
        self.g = inst.graph

    # -- surplus-two indsets (smallest cases get dedicated rules) ----------

    def surplus_two(self, indset: frozenset[int]) -> Optional[BranchDecision]:
        g = self.g
        if g.surplus(indset) != 2:
            return None
        if len(indset) >= 3:
            return self._s2_large(indset)
        if len(indset) == 2:
            return self._s2_pair(indset)
        return None

    def _s2_large(self, indset: frozenset[int]) -> Optional[BranchDecision]:
        g = self.g
        cert = SurplusCert(indset, 2)
        if len(indset) >= 4:
            size = len(indset)
            return split_indset(self.inst, cert, ((1, size), (1, size + 2)),
                                "surplus2/size4-split", _trusted=True)
        zs = [z for z in sorted(g.neighborhood(indset))
              if len(g.neighbors(z) & indset) == 2]
        if not zs:
            return split_indset(self.inst, cert, ((1, 3), (1, 5)),
                                "surplus2/size3-split-plain", _trusted=True)
        z = zs[0]
        x1, x2 = sorted(g.neighbors(z) & indset)
        (y,) = indset - {x1, x2}
        if g.degree(z) <= 4:
            return split_indset(self.inst, cert, ((1, 4), (1, 5)),
                                "surplus2/size3-split", _trusted=True)
        if shadow_minus(g, _closed(g, z)) >= 5 - g.degree(z):
            return split_vertex(self.inst, z, ((0.5, 4), (2, 5)), "surplus2/size3-splitz")
        _, blockers = _blockers_of(g, z)
        ts = [t for t, _ in blockers if t != y]
        if ts:
            return rule_b(self.inst, ts[0], [z], ((1, 4), (1, 4)),
                          "surplus2/size3-ruleB", _trusted=True)
        if all(is_blocker(g, w, y) is not None for w in (x1, x2, z)):
            return rule_b(self.inst, y, [x1, x2, z], ((1, 4), (1, 5)),
                          "surplus2/size3-ruleB-y", _trusted=True)
        return split_indset(self.inst, cert, ((1, 3), (1, 5)),
                            "surplus2/size3-split-plain", _trusted=True)

    def _s2_pair(self, indset: frozenset[int]) -> Optional[BranchDecision]:
        g = self.g
        a_side = sorted(g.neighborhood(indset))
        pairs = [(z1, z2) for i, z1 in enumerate(a_side) for z2 in a_side[i + 1:]
                 if not g.has_edge(z1, z2)]
        if not pairs:
            return None  # N(I) a clique would make a funnel; not simplified
        z1, z2 = pairs[0]
        if g.degree(z1) <= 4 and g.degree(z2) <= 4:
            if reduction_gain(g, indset) >= 2:
                return split_indset(self.inst, SurplusCert(indset, 2), ((1, 4), (1, 4)),
                                    "surplus2/pair-split", _trusted=True)
        high = sorted({z for p in pairs for z in p if g.degree(z) >= 5})
        if not high:
            return None
        z = high[0]
        if shadow_minus(g, _closed(g, z)) >= 0:
            return split_vertex(self.inst, z, ((0.5, 3), (2, 5)), "surplus2/pair-splitz")
        _, blockers = _blockers_of(g, z)
        ts = [t for t, _ in blockers if t not in indset]
        if ts:
            return rule_b(self.inst, ts[0], [z], ((1, 4), (1, 4)),
                          "surplus2/pair-ruleB", _trusted=True)
        return None

    # -- blocker machinery ---------------------------------------------------

    def deg4_blocker(self, u: int, x: int) -> Optional[BranchDecision]:
        """Blocker x of u with deg(x) >= 4."""
        g = self.g
        closed_x = _closed(g, x)
        if len(closed_x) < g.n:
            smx, jzero = _msm_zeroset(g, closed_x)
            if smx <= 3 - g.degree(x) and jzero:
                d = self.surplus_two(jzero | {x})
                if d is not None:
                    return d
        return rule_b(self.inst, x, [u], ((1, 2), (1.5, 5)),
                      "branch4-3prep/ruleB", _trusted=True)

    def deg5_with_3nbr(self, w0: int, z0: int) -> BranchDecision:
        """A vertex of degree >= 5 with a 3-neighbor is present."""
        g = self.g
        universe = [w for w in g.vertices() if g.degree(w) >= 5
                    and any(g.degree(t) == 3 for t in g.neighbors(w))]
        if w0 not in universe:
            universe.append(w0)
            universe.sort()
        blocked: dict[int, frozenset[int]] = {}
        for w in universe:
            sm = shadow_minus(g, _closed(g, w))
            if sm >= 5 - g.degree(w):
                return split_vertex(self.inst, w, ((0.5, 2), (2, 5)), "branch55/split")
            _, iset = _blocked_minset(g, w)
            blocked[w] = iset
        for w in universe:
            for x in sorted(blocked[w]):
                if g.degree(x) >= 4:
                    d = self.deg4_blocker(w, x)
                    if d is not None:
                        return d
        for w in universe:
            for x in sorted(blocked[w]):
                if reduction_gain(g, {w, x}) >= 2:
                    return rule_b(self.inst, x, [w], ((1, 4), (1, 4)),
                                  "branch55/ruleB-R2", _trusted=True)
        for w in universe:
            if len(blocked[w]) >= 2:
                x = min(blocked[w])
                return rule_b(self.inst, x, [w], ((1, 3), (1, 5)),
                              "branch55/ruleB-nonsingleton", _trusted=True)
        # every blocked w in universe is blocked by singleton 3-vertices;
        # look for one linked to two of them
        links: dict[int, list[int]] = {}
        for w in universe:
            for x in blocked[w]:
                links.setdefault(x, []).append(w)
        for x in sorted(links):
            if len(links[x]) >= 2:
                u1, u2 = sorted(links[x])[:2]
                return rule_b(self.inst, x, [u1, u2], ((1, 4), (1, 5)),
                              "branch55/ruleB-pigeonhole", _trusted=True)
        x = min(blocked[w0])
        return rule_b(self.inst, x, [w0], ((1, 3), (1, 4)),
                      "fallback/branch55-ruleB", _trusted=True)

    def blocked_low(self, u: int) -> Optional[BranchDecision]:
        """deg(u) in {4, 5} and shad(N[u]) <= 4 - deg(u)."""
        g = self.g
        value, iset = _blocked_minset(g, u)
        if value is None or value > 0:
            return None  # not blocked after all (reachable via sub-dispatch)
        options = [(x, sorted(g.neighbors(x) & g.neighbors(u))) for x in sorted(iset)]
        options = [(x, shared) for x, shared in options if shared]
        if not options:
            return None  # impossible on simplified graphs
        x, shared = options[0]
        if g.degree(x) >= 4:
            return self.deg4_blocker(u, x)
        high = [t for t in shared if g.degree(t) >= 5]
        if high:
            return self.deg5_with_3nbr(high[0], x)
        if len(iset) >= 2:
            return rule_b(self.inst, x, [u], ((1, 3), (1, 5)),
                          "branch4-3/ruleB-nonsingleton", _trusted=True)
        return rule_b(self.inst, x, [u], ((1, 4), (1, 4)),
                      "branch4-3/ruleB-singleton", _trusted=True)

    def blocked_high(self, u: int) -> Optional[BranchDecision]:
        """deg(u) >= 6 and shad(N[u]) <= 5 - deg(u)."""
        g = self.g
        closed = _closed(g, u)
        value, iset = _blocked_minset(g, u)
        if value is None or value > 0:
            return None
        for x in sorted(iset):
            if g.degree(x) >= 4:
                return self.deg4_blocker(u, x)
        options = [x for x in sorted(iset) if g.neighbors(x) & g.neighbors(u)]
        if not options:
            return None
        x = options[0]
        z_side = sorted(g.neighbors(x) & g.neighbors(u))
        y_side = sorted(g.neighbors(x) - closed)
        for z in z_side:
            if g.degree(z) >= 5:
                return self.deg5_with_3nbr(z, x)
        for z in z_side:
            if g.degree(z) == 3:
                return self.deg5_with_3nbr(u, z)
        for x2 in sorted(iset):
            if x2 != x and len(g.neighbors(x) & g.neighbors(x2)) >= 2:
                d = self.surplus_two(frozenset({x, x2}))
                if d is not None:
                    return d
        for i, za in enumerate(z_side):
            for zb in z_side[i + 1:]:
                if len(g.neighbors(za) & g.neighbors(zb)) >= 3:
                    d = self.blocked_low(za)
                    if d is not None:
                        return d
        if len(iset) == 1:
            claim = ((1, 2 + len(z_side)), (1, 3))
        else:
            claim = ((1, 2 + len(z_side)), (1, 3 + len(y_side)))
        return rule_b(self.inst, x, [u], claim, "branch6-1/ruleB", _trusted=True)


def select_branch(inst: Instance, stats: Optional[SelectorStats] = None) -> BranchDecision:
    """Pick an available branching rule on a simplified graph of maxdeg >= 4.

    Dispatch: non-singleton surplus-two min-sets first, then the max-degree
    vertex u of degree r: split when shad(N[u]) clears the degree threshold,
    otherwise the blocked-vertex rules.  Ties break to lowest vertex id.
    """
    g = inst.graph
    if g.n == 0:
        raise PreconditionError("empty instance")
    r = g.max_degree()
    if r <= 3:
        raise PreconditionError("maximum degree <= 3: use a base solver")
    if g.min_degree() < 3 or g.find_pattern("funnel") is not None:
        raise PreconditionError("graph is not simplified")
    ms, _, table = minsurp_full(g, need_table=True)
    if ms < 2:
        raise PreconditionError("graph is not simplified (minsurp < 2)")

    sel = _Selector(inst)
    decision: Optional[BranchDecision] = None

    if ms == 2:
        indset = find_nonsingleton_minset(g, table, 2)
        if indset is not None:
            decision = sel.surplus_two(indset)

    if decision is None:
        u = min(v for v in g.vertices() if g.degree(v) == r)
        sm = shadow_minus(g, _closed(g, u))
        if r == 4 or r == 5:
            if sm >= 0:
                seq: BranchSeq = ((0.5, 1), (1.5, 4)) if r == 4 else ((0.5, 1), (2, 5))
                decision = split_vertex(inst, u, seq, f"thm5.1/r{r}-split")
            else:
                decision = sel.blocked_low(u)
        else:
            if sm >= 6 - r:
                decision = split_vertex(inst, u, ((0.5, 1), (2.5, r)), "thm5.1/r6-split")
            else:
                decision = sel.blocked_high(u)
        if decision is None:
            fb = find_blocker(g, u)
            if fb is not None:
                decision = rule_b(inst, fb[0], [u], ((1, 2), (1, 3)),
                                  "fallback/ruleB", _trusted=True)
            else:
                decision = split_vertex(inst, u, ((0.5, 1), (0.5, r)), "fallback/split")

    if stats is not None:
        stats.note(decision.case)
    return decision
