"""Degree-stratified decision solvers, base-solver stand-ins, dovetailing.

Level L simplifies, folds small side components, and branches on a vertex
of degree >= L via the selector (levels 4-6) or a plain split on a
max-degree vertex (level 7, which also absorbs the degree >= 8 top rule).
When the max degree falls below the level it delegates: level 4 dovetails
the LP-guided and the bounded-degree base solver, levels 5-7 dovetail the
next-lower level against the bounded-degree solver.

Solvers are written as generators yielding once per branch node, so
dovetailing is deterministic node-quantum alternation and a global node
budget applies uniformly.
"""

from __future__ import annotations

import math
import threading
import time
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Generator, Optional

from .graph import Graph
from .lp import Instance, SurplusCert
from .reduce import (
    ReductionStep,
    ReductionTrace,
    _p1_step,
    _p2_step,
    _p3_step,
    lift_cover,
    simplify,
)
from .branching import (
    MeasureParams,
    SIMPLE_LEVEL_PARAMS,
    SelectorStats,
    select_branch,
    split_vertex,
)
from .verify import AGVC_RATE, MAXIS_RATES, AuditRecord, brute_force_vc, make_audit_record


@dataclass
class SolverConfig:
    level: int = 7
    params: dict[int, MeasureParams] = field(
        default_factory=lambda: dict(SIMPLE_LEVEL_PARAMS))
    component_threshold: int = 24
    node_budget: Optional[int] = None
    audit: bool = False
    dovetail_quantum: int = 256
    threads: int = 1


@dataclass
class SolveStats:
    nodes: int = 0
    rule_counts: Counter = field(default_factory=Counter)
    max_depth: int = 0
    audit_records: list[AuditRecord] = field(default_factory=list)
    audit_violations: int = 0
    selector: SelectorStats = field(default_factory=SelectorStats)
    wall_time: float = 0.0
    nondeterministic: bool = False

    def merge(self, other: "SolveStats") -> None:
        self.nodes += other.nodes
        self.rule_counts.update(other.rule_counts)
        self.max_depth = max(self.max_depth, other.max_depth)
        self.audit_records.extend(other.audit_records)
        self.audit_violations += other.audit_violations
        for case, cnt in other.selector.cases.items():
            self.selector.cases[case] = self.selector.cases.get(case, 0) + cnt
        self.selector.fallbacks += other.selector.fallbacks


@dataclass
class SolveResult:
    feasible: bool
    cover: Optional[frozenset[int]]
    stats: SolveStats


class BudgetExhausted(RuntimeError):
    """Node budget ran out; carries the partial statistics."""

    def __init__(self, stats: SolveStats):
        super().__init__(f"node budget exhausted after {stats.nodes} nodes")
        self.stats = stats


class _Cancelled(Exception):
    pass


SolveGen = Generator[None, None, tuple[bool, Optional[frozenset[int]]]]


def _account(stats: SolveStats, cfg: SolverConfig, depth: int) -> None:
    stats.nodes += 1
    if depth > stats.max_depth:
        stats.max_depth = depth
    if cfg.node_budget is not None and stats.nodes > cfg.node_budget:
        raise BudgetExhausted(stats)


def _drive(gen: SolveGen, cancel: Optional[threading.Event] = None):
    while True:
        try:
            next(gen)
        except StopIteration as stop:
            return stop.value
        if cancel is not None and cancel.is_set():
            gen.close()
            raise _Cancelled


# ---------------------------------------------------------------------------
# node preprocessing: simplify + fold small side components
# ---------------------------------------------------------------------------

def _preprocess(inst: Instance, cfg: SolverConfig,
                presimplified: bool) -> tuple[Instance, ReductionTrace]:
    if presimplified:
        trace = ReductionTrace(final_graph=inst.graph)
    else:
        inst, trace = simplify(inst)
    g, k = inst.graph, inst.k
    comps = g.components()
    if len(comps) > 1:
        folded = False
        for comp in comps:
            if len(comp) <= cfg.component_threshold:
                keep = set(comp)
                sub = g.delete_vertices([v for v in g.vertices() if v not in keep])
                opt, cover = brute_force_vc(sub)
                g = g.delete_vertices(comp)
                k -= opt
                trace.steps.append(ReductionStep(
                    kind="ComponentSolve", removed=tuple(comp), dk=opt,
                    comp_cover=tuple(sorted(cover))))
                folded = True
        if folded:
            trace.final_graph = g
            inst = Instance(g, k)
    return inst, trace


# ---------------------------------------------------------------------------
# base solvers (correctness-only stand-ins behind the base-solver interface)
# ---------------------------------------------------------------------------

def _fold_subquadratic(g: Graph, k: int) -> tuple[Graph, int, ReductionTrace]:
    """Fold vertices of degree <= 2 via singleton P1/P2 until none remain."""
    trace = ReductionTrace()
    while True:
        low = sorted(v for v in g.vertices() if g.degree(v) <= 2)
        if not low:
            break
        v = low[0]
        deg = g.degree(v)
        if deg <= 1:
            g, step = _p1_step(g, SurplusCert(frozenset({v}), deg - 1))
        elif g.has_edge(*sorted(g.neighbors(v))):
            g, step = _p3_step(g, v, min(g.neighbors(v)))  # triangle: a funnel
        else:
            g, step = _p2_step(g, SurplusCert(frozenset({v}), 1))
        trace.steps.append(step)
        k -= step.dk
    trace.final_graph = g
    return g, k, trace


def _base_maxis_gen(inst: Instance, cfg: SolverConfig, stats: SolveStats,
                    depth: int) -> SolveGen:
    g, k, trace = _fold_subquadratic(inst.graph, inst.k)
    if k < 0:
        return False, None
    if g.n == 0:
        return True, lift_cover(trace, ())
    _account(stats, cfg, depth)
    stats.rule_counts["base-maxis-split"] += 1
    yield
    maxdeg = g.max_degree()
    u = min(v for v in g.vertices() if g.degree(v) == maxdeg)
    branches = [
        ({u}, {u}, 1),
        (set(g.neighbors(u)), set(g.neighbors(u)) | {u}, maxdeg),
    ]
    for include, delete, dk in branches:
        child = Instance(g.delete_vertices(delete), k - dk, lambda2=0)
        ok, sub = yield from _base_maxis_gen(child, cfg, stats, depth + 1)
        if ok:
            return True, lift_cover(trace, frozenset(include) | sub)
    return False, None


def _base_agvc_gen(inst: Instance, cfg: SolverConfig, stats: SolveStats,
                   depth: int) -> SolveGen:
    inst, trace = _preprocess(inst, cfg, presimplified=False)
    if inst.k < 0 or inst.mu2 < 0:
        return False, None
    g = inst.graph
    if g.n == 0:
        return True, lift_cover(trace, ())
    _account(stats, cfg, depth)
    stats.rule_counts["base-agvc-split"] += 1
    yield
    # simplified: the all-half solution is optimal, every vertex is support
    maxdeg = g.max_degree()
    u = min(v for v in g.vertices() if g.degree(v) == maxdeg)
    branches = [
        ({u}, {u}, 1),
        (set(g.neighbors(u)), set(g.neighbors(u)) | {u}, maxdeg),
    ]
    for include, delete, dk in branches:
        child = Instance(g.delete_vertices(delete), inst.k - dk)
        ok, sub = yield from _base_agvc_gen(child, cfg, stats, depth + 1)
        if ok:
            return True, lift_cover(trace, frozenset(include) | sub)
    return False, None


def _dovetail_gen(first: SolveGen, second: SolveGen, quantum: int) -> SolveGen:
    """Deterministic fair interleaving; first definitive answer wins."""
    gens = [first, second]
    turn = 0
    while True:
        gen = gens[turn]
        for _ in range(quantum):
            try:
                next(gen)
            except StopIteration as stop:
                gens[1 - turn].close()
                return stop.value
            yield
        turn = 1 - turn


# ---------------------------------------------------------------------------
# the level solvers
# ---------------------------------------------------------------------------

def _predicted_exponents(inst: Instance, level: int, cfg: SolverConfig) -> tuple[float, float]:
    """(cost of the parameterized solver, cost of the MaxIS stand-in),
    as exponents predicted from the published rates; heuristic only."""
    n = inst.graph.n
    if level == 4:
        own = max(inst.mu, 0.0) * math.log(AGVC_RATE)
    else:
        p = cfg.params[level - 1]
        own = p.a * max(inst.mu, 0.0) + p.b * max(inst.k, 0)
    maxis = n * math.log(MAXIS_RATES[level - 1])
    return own, maxis


def _solve_level_gen(inst: Instance, level: int, cfg: SolverConfig, stats: SolveStats,
                     depth: int, presimplified: bool = False) -> SolveGen:
    inst, trace = _preprocess(inst, cfg, presimplified)
    if inst.k < 0 or inst.mu2 < 0:
        return False, None
    g = inst.graph
    if g.n == 0:
        return True, lift_cover(trace, ())

    if g.max_degree() < level:
        own_cost, maxis_cost = _predicted_exponents(inst, level, cfg)
        if level == 4:
            own = _base_agvc_gen(inst, cfg, stats, depth + 1)
        else:
            own = _solve_level_gen(inst, level - 1, cfg, stats, depth + 1,
                                   presimplified=True)
        other = _base_maxis_gen(inst, cfg, stats, depth + 1)
        if own_cost <= maxis_cost:
            result = yield from _dovetail_gen(own, other, cfg.dovetail_quantum)
        else:
            result = yield from _dovetail_gen(other, own, cfg.dovetail_quantum)
        feasible, cover = result
        if not feasible:
            return False, None
        return True, lift_cover(trace, cover)

    _account(stats, cfg, depth)
    yield
    if level <= 6:
        decision = select_branch(inst, stats.selector)
    else:
        maxdeg = g.max_degree()
        u = min(v for v in g.vertices() if g.degree(v) == maxdeg)
        decision = split_vertex(inst, u, claimed=((0.0, 1), (0.0, min(maxdeg, 7))),
                                case="branch7/top-split")
    stats.rule_counts[decision.rule] += 1
    if cfg.audit:
        record = make_audit_record(
            cfg.params[level], stats.nodes, decision.case or decision.rule,
            decision.claimed, decision.realized())
        stats.audit_records.append(record)
        if record.violation:
            stats.audit_violations += 1

    for child in decision.children:
        ok, sub = yield from _solve_level_gen(child.inst, level, cfg, stats,
                                              depth + 1, presimplified=True)
        if ok:
            return True, lift_cover(trace, child.include | lift_cover(child.trace, sub))
    return False, None


# ---------------------------------------------------------------------------
# public entry points
# ---------------------------------------------------------------------------

def _finish(inst: Instance, feasible: bool, cover, stats: SolveStats,
            started: float) -> SolveResult:
    stats.wall_time = time.perf_counter() - started
    if feasible:
        cover = frozenset(cover)
        g = inst.graph
        uncovered = [e for e in g.edges() if e[0] not in cover and e[1] not in cover]
        if uncovered or len(cover) > inst.k:
            raise AssertionError(
                f"solver produced an invalid cover (size {len(cover)}, k={inst.k}, "
                f"uncovered={uncovered[:3]})")
        return SolveResult(True, cover, stats)
    return SolveResult(False, None, stats)


def solve_decision(inst: Instance, level: Optional[int] = None,
                   cfg: Optional[SolverConfig] = None) -> SolveResult:
    """Decide whether inst.graph has a vertex cover of size <= inst.k."""
    cfg = cfg or SolverConfig()
    level = cfg.level if level is None else level
    if level not in (4, 5, 6, 7):
        raise ValueError(f"level must be 4..7, got {level}")
    stats = SolveStats()
    started = time.perf_counter()
    if cfg.threads > 1:
        feasible, cover = _solve_root_parallel(inst, level, cfg, stats)
    else:
        try:
            feasible, cover = _drive(_solve_level_gen(inst, level, cfg, stats, 0))
        except BudgetExhausted as exc:
            exc.stats.wall_time = time.perf_counter() - started
            raise
    return _finish(inst, feasible, cover, stats, started)


def _solve_root_parallel(inst: Instance, level: int, cfg: SolverConfig,
                         stats: SolveStats) -> tuple[bool, Optional[frozenset[int]]]:
    """Explore the root decision's children in threads; first feasible wins."""
    inst2, trace = _preprocess(inst, cfg, presimplified=False)
    if inst2.k < 0 or inst2.mu2 < 0:
        return False, None
    g = inst2.graph
    if g.n == 0:
        return True, lift_cover(trace, ())
    if g.max_degree() < level:
        feasible, cover = _drive(_solve_level_gen(inst2, level, cfg, stats, 0,
                                                  presimplified=True))
        return feasible, (lift_cover(trace, cover) if feasible else None)
    _account(stats, cfg, 0)
    if level <= 6:
        decision = select_branch(inst2, stats.selector)
    else:
        maxdeg = g.max_degree()
        u = min(v for v in g.vertices() if g.degree(v) == maxdeg)
        decision = split_vertex(inst2, u, claimed=((0.0, 1), (0.0, min(maxdeg, 7))))
    stats.rule_counts[decision.rule] += 1
    stats.nondeterministic = True

    cancel = threading.Event()
    outcomes: list = [None] * len(decision.children)
    substats = [SolveStats() for _ in decision.children]

    def work(i: int, child) -> None:
        try:
            outcomes[i] = _drive(
                _solve_level_gen(child.inst, level, cfg, substats[i], 1,
                                 presimplified=True), cancel)
            if outcomes[i][0]:
                cancel.set()
        except (_Cancelled, BudgetExhausted):
            outcomes[i] = None

    threads = [threading.Thread(target=work, args=(i, c))
               for i, c in enumerate(decision.children)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    for sub in substats:
        stats.merge(sub)
    for child, outcome in zip(decision.children, outcomes):
        if outcome is not None and outcome[0]:
            cover = child.include | lift_cover(child.trace, outcome[1])
            return True, lift_cover(trace, cover)
    if any(outcome is None for outcome in outcomes):
        raise BudgetExhausted(stats)
    return False, None


def base_maxis(inst: Instance, cfg: Optional[SolverConfig] = None) -> SolveResult:
    """Exact decision via max-degree branching with degree <= 2 folding."""
    cfg = cfg or SolverConfig()
    stats = SolveStats()
    started = time.perf_counter()
    feasible, cover = _drive(_base_maxis_gen(inst, cfg, stats, 0))
    return _finish(inst, feasible, cover, stats, started)


def base_agvc(inst: Instance, cfg: Optional[SolverConfig] = None) -> SolveResult:
    """Exact decision via LP-guided branching; mu < 0 rejects immediately."""
    cfg = cfg or SolverConfig()
    stats = SolveStats()
    started = time.perf_counter()
    feasible, cover = _drive(_base_agvc_gen(inst, cfg, stats, 0))
    return _finish(inst, feasible, cover, stats, started)


base_maxis.generator = _base_maxis_gen  # type: ignore[attr-defined]
base_agvc.generator = _base_agvc_gen    # type: ignore[attr-defined]


def dovetail(s1: Callable, s2: Callable, inst: Instance,
             cfg: Optional[SolverConfig] = None) -> SolveResult:
    """Run two exact solvers with fair interleaving; first answer wins.

    Single-threaded mode alternates fixed node quanta deterministically;
    with cfg.threads > 1 both run concurrently and the loser is cancelled.
    """
    cfg = cfg or SolverConfig()
    started = time.perf_counter()
    gen1 = getattr(s1, "generator", None)
    gen2 = getattr(s2, "generator", None)
    if gen1 is None or gen2 is None:
        raise TypeError("dovetail expects solvers exposing a .generator factory")
    if cfg.threads > 1:
        st1, st2 = SolveStats(), SolveStats()
        cancel = threading.Event()
        results: list = [None, None]

        def work(i, factory, st):
            try:
                results[i] = _drive(factory(inst, cfg, st, 0), cancel)
                cancel.set()
            except (_Cancelled, BudgetExhausted):
                pass

        threads = [threading.Thread(target=work, args=(0, gen1, st1)),
                   threading.Thread(target=work, args=(1, gen2, st2))]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        stats = SolveStats(nondeterministic=True)
        stats.merge(st1)
        stats.merge(st2)
        picked = results[0] if results[0] is not None else results[1]
        if picked is None:
            raise BudgetExhausted(stats)
        return _finish(inst, picked[0], picked[1], stats, started)
    stats = SolveStats()
    feasible, cover = _drive(_dovetail_gen(gen1(inst, cfg, stats, 0),
                                           gen2(inst, cfg, stats, 0),
                                           cfg.dovetail_quantum))
    return _finish(inst, feasible, cover, stats, started)


def solve_optimum(g: Graph, cfg: Optional[SolverConfig] = None
                  ) -> tuple[int, frozenset[int], SolveStats]:
    """Smallest k admitting a cover, by ascending search from ceil(lambda)."""
    cfg = cfg or SolverConfig()
    stats = SolveStats()
    started = time.perf_counter()
    base = Instance(g, 0)
    k = (base.lambda2 + 1) // 2
    while True:
        inst = Instance(g, k, lambda2=base.lambda2)
        if cfg.threads > 1:
            feasible, cover = _solve_root_parallel(inst, cfg.level, cfg, stats)
        else:
            try:
                feasible, cover = _drive(_solve_level_gen(inst, cfg.level, cfg, stats, 0))
            except BudgetExhausted as exc:
                exc.stats.wall_time = time.perf_counter() - started
                raise
        if feasible:
            result = _finish(inst, True, cover, stats, started)
            return len(result.cover), result.cover, result.stats
        k += 1
        if k > g.n:
            raise AssertionError("optimum search exceeded n; solver is buggy")
