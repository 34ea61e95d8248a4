"""Preprocessing rules P1/P2/P3, fixpoint simplification, cover lifting.

A simplified graph has minimum degree 3, minsurp >= 2 and no funnels.  The
deterministic rule policy is:

    while the graph is non-empty:
        if minsurp <= 0: apply P1 to the canonical global min-set
        elif minsurp == 1: apply P2 to a smallest canonical min-set,
                           preferring degree-2 singletons by lowest id
        elif there is a funnel: apply P3, kites first, lowest (u, out) id
        else: stop

k may go negative during simplification; callers treat mu < 0 or k < 0 as
infeasible.  Every step is logged so covers of the reduced instance can be
lifted back.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

from .graph import Graph, PreconditionError
from .lp import Instance, SurplusCert, minsurp_full, _msm_zeroset


@dataclass(frozen=True)
class ReductionStep:
    kind: str                      # "P1" | "P2" | "P3" | "ComponentSolve"
    removed: tuple[int, ...]
    dk: int
    created: Optional[int] = None          # P2: the fresh vertex y
    indset: tuple[int, ...] = ()           # P1/P2: I
    nbrs: tuple[int, ...] = ()             # P1/P2: N(I)
    funnel: tuple[int, int] | None = None  # P3: (u, x)
    shared: tuple[int, ...] = ()           # P3: A = N(u) & N(x)
    side_u: tuple[int, ...] = ()           # P3: B_u = N(u) - N[x]
    side_x: tuple[int, ...] = ()           # P3: B_x = N(x) - N[u]
    comp_cover: tuple[int, ...] = ()       # ComponentSolve: optimal cover

    def serialize(self) -> str:
        removed = ",".join(map(str, self.removed)) or "-"
        created = "-" if self.created is None else str(self.created)
        return f"{self.kind} removed={removed} created={created} dk={self.dk}"


@dataclass
class ReductionTrace:
    steps: list[ReductionStep] = field(default_factory=list)
    final_graph: Optional[Graph] = None

    @property
    def total_dk(self) -> int:
        return sum(s.dk for s in self.steps)

    def serialize(self) -> str:
        return "\n".join(s.serialize() for s in self.steps)


# ---------------------------------------------------------------------------
# single rules
# ---------------------------------------------------------------------------

def _p1_step(g: Graph, cert: SurplusCert) -> tuple[Graph, ReductionStep]:
    indset = cert.indset
    nbrs = g.neighborhood(indset)
    removed = tuple(sorted(indset | nbrs))
    g2 = g.delete_vertices(indset | nbrs)
    step = ReductionStep(
        kind="P1", removed=removed, dk=len(nbrs),
        indset=tuple(sorted(indset)), nbrs=tuple(sorted(nbrs)),
    )
    return g2, step


def _p2_step(g: Graph, cert: SurplusCert) -> tuple[Graph, ReductionStep]:
    indset = cert.indset
    nbrs = g.neighborhood(indset)
    outer = g.neighborhood(nbrs) - indset
    removed = tuple(sorted(indset | nbrs))
    g2 = g.delete_vertices(indset | nbrs)
    g2, y = g2.add_vertex_with_edges(outer)
    step = ReductionStep(
        kind="P2", removed=removed, dk=len(indset), created=y,
        indset=tuple(sorted(indset)), nbrs=tuple(sorted(nbrs)),
    )
    return g2, step


def _p3_step(g: Graph, u: int, x: int) -> tuple[Graph, ReductionStep]:
    nu, nx = g.neighbors(u), g.neighbors(x)
    shared = nu & nx
    side_u = nu - nx - {x}
    side_x = nx - nu - {u}
    removed = tuple(sorted(shared | {u, x}))
    g2 = g.delete_vertices(shared | {u, x})
    g2 = g2.add_biclique(side_u, side_x)
    step = ReductionStep(
        kind="P3", removed=removed, dk=1 + len(shared), funnel=(u, x),
        shared=tuple(sorted(shared)), side_u=tuple(sorted(side_u)),
        side_x=tuple(sorted(side_x)),
    )
    return g2, step


def _require_min_set(g: Graph, cert: SurplusCert) -> None:
    if len(cert.indset) > 1:
        value, _, _ = minsurp_full(g)
        if value != cert.surplus:
            raise PreconditionError(
                f"indset with surplus {cert.surplus} is not a min-set (minsurp={value})"
            )


def apply_p1(inst: Instance, cert: SurplusCert) -> tuple[Instance, ReductionStep]:
    """Delete N[I] for a critical set I with surplus <= 0; k' = k - |N(I)|."""
    if not cert.verify(inst.graph):
        raise PreconditionError("certificate surplus does not match the graph")
    if cert.surplus > 0:
        raise PreconditionError(f"P1 needs surplus <= 0, got {cert.surplus}")
    _require_min_set(inst.graph, cert)
    g2, step = _p1_step(inst.graph, cert)
    return Instance(g2, inst.k - step.dk), step


def apply_p2(inst: Instance, cert: SurplusCert) -> tuple[Instance, ReductionStep]:
    """Fold a critical set I with surplus 1; k' = k - |I|.

    N(I) must be independent: with an edge inside N(I) no cover can avoid
    N(I), and the fold direction "y outside the cover" miscounts (on a
    triangle it would lose a unit of k).  Such a shape is funnel territory.
    """
    if not cert.verify(inst.graph):
        raise PreconditionError("certificate surplus does not match the graph")
    if cert.surplus != 1:
        raise PreconditionError(f"P2 needs surplus exactly 1, got {cert.surplus}")
    if not inst.graph.is_independent(inst.graph.neighborhood(cert.indset)):
        raise PreconditionError("P2 needs N(I) independent (fold a funnel instead)")
    _require_min_set(inst.graph, cert)
    g2, step = _p2_step(inst.graph, cert)
    return Instance(g2, inst.k - step.dk), step


def apply_p3(inst: Instance, funnel: tuple[int, int]) -> tuple[Instance, ReductionStep]:
    """Fold a funnel (u, x); k' = k - 1 - codeg(u, x)."""
    u, x = funnel
    g = inst.graph
    if not g.is_funnel(u, x):
        raise PreconditionError(f"({u}, {x}) is not a funnel")
    g2, step = _p3_step(g, u, x)
    return Instance(g2, inst.k - step.dk), step


# ---------------------------------------------------------------------------
# fixpoint simplification
# ---------------------------------------------------------------------------

StepHook = Callable[[Graph, int, ReductionStep, Graph, int], None]


def simplify(inst: Instance, on_step: Optional[StepHook] = None) -> tuple[Instance, ReductionTrace]:
    """Run the rule policy to its fixpoint.

    The result graph (if non-empty) has min degree >= 3, minsurp >= 2 and
    no funnels.  The optional on_step hook receives
    (graph_before, k_before, step, graph_after, k_after) per applied rule.
    """
    g = inst.graph
    k = inst.k
    trace = ReductionTrace()

    def emit(g2: Graph, step: ReductionStep) -> None:
        nonlocal g, k
        if on_step is not None:
            on_step(g, k, step, g2, k - step.dk)
        trace.steps.append(step)
        g, k = g2, k - step.dk

    while g.n:
        msm, zero = _msm_zeroset(g, frozenset())
        if msm < 0:
            g2, step = _p1_step(g, SurplusCert(zero, msm))
            emit(g2, step)
            continue
        ms, cert, table = minsurp_full(g, need_table=True)
        if ms <= 0:
            g2, step = _p1_step(g, SurplusCert(frozenset(cert), ms))
            emit(g2, step)
            continue
        if ms == 1:
            deg2 = [x for x in g.vertices() if g.degree(x) == 2]
            indep2 = [x for x in deg2
                      if not g.has_edge(*sorted(g.neighbors(x)))]
            if indep2:
                g2, step = _p2_step(g, SurplusCert(frozenset({indep2[0]}), 1))
            elif deg2:
                v = deg2[0]  # neighbors adjacent: a triangle, so a funnel
                g2, step = _p3_step(g, v, min(g.neighbors(v)))
            else:
                candidates = [(len(c), x, c)
                              for x, (v, c) in sorted(table.items()) if v == 1]
                indep = [t for t in candidates
                         if g.is_independent(g.neighborhood(t[2]))]
                if indep:
                    g2, step = _p2_step(g, SurplusCert(frozenset(min(indep)[2]), 1))
                else:
                    match = g.find_pattern("kite") or g.find_pattern("funnel")
                    if match is not None:
                        g2, step = _p3_step(g, match.u, match.out)
                    else:
                        # every certificate has an edge inside N(I): every
                        # cover contains N(I), so force it; deletion shape
                        # and lift coincide with a P1 step
                        chosen = frozenset(min(candidates)[2])
                        g2, step = _p1_step(g, SurplusCert(chosen, 1))
            emit(g2, step)
            continue
        match = g.find_pattern("kite") or g.find_pattern("funnel")
        if match is None:
            break
        g2, step = _p3_step(g, match.u, match.out)
        emit(g2, step)

    trace.final_graph = g
    out = Instance(g, k)
    return out, trace


def reduction_gain(g: Graph, removed: Iterable[int]) -> int:
    """R(X) = S(G - X): the k-decrease the policy extracts from G - X."""
    sub = g.delete_vertices(removed)
    _, trace = simplify(Instance(sub, 0, lambda2=0))
    return trace.total_dk


# ---------------------------------------------------------------------------
# cover lifting
# ---------------------------------------------------------------------------

def lift_cover(trace: ReductionTrace, cover_reduced: Iterable[int]) -> frozenset[int]:
    """Replay a trace backwards, turning a cover of the reduced graph into
    one of the original graph.  Sizes satisfy |lifted| = |input| + total_dk.
    """
    cover = set(cover_reduced)
    if trace.final_graph is not None:
        g = trace.final_graph
        bad = [e for e in g.edges() if e[0] not in cover and e[1] not in cover]
        if bad:
            raise ValueError(f"not a cover of the reduced graph; uncovered: {bad[:3]}")
        unknown = cover - set(g.vertices())
        if unknown:
            raise ValueError(f"cover contains vertices not in the reduced graph: {sorted(unknown)}")
    for step in reversed(trace.steps):
        if step.kind == "P1":
            cover.update(step.nbrs)
        elif step.kind == "P2":
            if step.created in cover:
                cover.discard(step.created)
                cover.update(step.nbrs)
            else:
                cover.update(step.indset)
        elif step.kind == "P3":
            u, x = step.funnel
            cover.update(step.shared)
            if set(step.side_u) <= cover:
                cover.add(x)
            else:
                cover.add(u)
        elif step.kind == "ComponentSolve":
            cover.update(step.comp_cover)
        else:  # pragma: no cover
            raise ValueError(f"unknown step kind {step.kind!r}")
    return frozenset(cover)
