import pytest

from vcbranch.graph import Graph, complete, cycle
from vcbranch.lp import Instance
from vcbranch.solver import (
    BudgetExhausted,
    SolverConfig,
    base_agvc,
    base_maxis,
    dovetail,
    solve_decision,
    solve_optimum,
)
from vcbranch.cli import NAMED_GRAPHS, circulant, gnp

from oracle_utils import exhaustive_vc, is_cover


PETERSEN = NAMED_GRAPHS["petersen"]()


@pytest.mark.parametrize("level", [4, 5, 6, 7])
def test_solve_decision_petersen(level):
    r = solve_decision(Instance(PETERSEN, 6), level=level)
    assert r.feasible and is_cover(PETERSEN, r.cover) and len(r.cover) <= 6
    assert not solve_decision(Instance(PETERSEN, 5), level=level).feasible
    assert r.stats.nodes >= 1


@pytest.mark.parametrize("level", [4, 5, 6, 7])
def test_solve_decision_circulant(level):
    g = circulant(9, (1, 2))
    assert solve_decision(Instance(g, 6), level=level).feasible
    assert not solve_decision(Instance(g, 5), level=level).feasible


def test_solve_optimum_examples():
    assert solve_optimum(cycle(5))[0] == 3
    opt, cover, _ = solve_optimum(Graph())
    assert opt == 0 and cover == frozenset()
    assert solve_optimum(complete(4))[0] == 3


def test_base_maxis():
    assert base_maxis(Instance(cycle(6), 3)).feasible
    assert not base_maxis(Instance(cycle(7), 3)).feasible  # VC(C7) = 4
    assert base_maxis(Instance(complete(4), 3)).feasible
    assert not base_maxis(Instance(complete(4), 2)).feasible
    r = base_maxis(Instance(PETERSEN, 6))
    assert r.feasible and is_cover(PETERSEN, r.cover)


def test_base_agvc():
    r = base_agvc(Instance(cycle(5), 2))  # k < ceil(lambda) = 3
    assert not r.feasible and r.stats.nodes == 0
    assert base_agvc(Instance(PETERSEN, 6)).feasible
    assert not base_agvc(Instance(PETERSEN, 5)).feasible


def test_dovetail():
    # instant winner: agvc answers C5/k2 with zero nodes, maxis never runs
    r = dovetail(base_agvc, base_maxis, Instance(cycle(5), 2))
    assert not r.feasible and r.stats.nodes == 0
    # same answer as either solver alone
    r = dovetail(base_agvc, base_maxis, Instance(PETERSEN, 6))
    assert r.feasible and is_cover(PETERSEN, r.cover)
    alone = base_maxis(Instance(PETERSEN, 6))
    assert r.feasible == alone.feasible
    # deterministic: identical stats across repeat runs
    r2 = dovetail(base_agvc, base_maxis, Instance(PETERSEN, 6))
    assert r2.stats.nodes == r.stats.nodes and r2.cover == r.cover


def test_dovetail_threaded():
    cfg = SolverConfig(threads=2)
    r = dovetail(base_agvc, base_maxis, Instance(PETERSEN, 6), cfg)
    assert r.feasible and is_cover(PETERSEN, r.cover)
    assert r.stats.nondeterministic


def test_threaded_root_exploration():
    g = circulant(13, (1, 2, 3))
    opt = exhaustive_vc(g)
    cfg = SolverConfig(level=6, threads=2)
    r = solve_decision(Instance(g, opt), cfg=cfg)
    assert r.feasible and is_cover(g, r.cover)
    assert not solve_decision(Instance(g, opt - 1), cfg=cfg).feasible


def test_budget_exhausted_carries_stats():
    g = circulant(13, (1, 2, 3))
    cfg = SolverConfig(level=6, node_budget=1)
    with pytest.raises(BudgetExhausted) as err:
        solve_decision(Instance(g, exhaustive_vc(g) - 1), cfg=cfg)
    assert err.value.stats.nodes >= 1


def test_level_independence_and_oracle_small():
    for seed in range(40):
        g = gnp(6 + seed % 8, (0.2, 0.35, 0.5)[seed % 3], seed)
        opt = exhaustive_vc(g)
        answers = set()
        for level in (4, 5, 6, 7):
            r = solve_decision(Instance(g, opt), level=level)
            r0 = solve_decision(Instance(g, opt - 1), level=level) if opt else None
            answers.add((r.feasible, r0.feasible if r0 else None))
            assert r.feasible and is_cover(g, r.cover) and len(r.cover) <= opt
            if r0:
                assert not r0.feasible
        assert len(answers) == 1


def test_monotone_in_k():
    g = gnp(11, 0.4, 3)
    opt = exhaustive_vc(g)
    for k in range(opt, min(g.n, opt + 3) + 1):
        assert solve_decision(Instance(g, k)).feasible


def test_component_folding():
    # two far-apart components, both small: folded via the oracle
    g = Graph(edges=[(0, 1), (1, 2), (2, 0)])
    g2 = NAMED_GRAPHS["petersen"]()
    for u, v in g2.edges():
        g.add_edge(u + 10, v + 10)
    opt = 2 + 6
    r = solve_decision(Instance(g, opt))
    assert r.feasible and is_cover(g, r.cover) and len(r.cover) <= opt
    assert not solve_decision(Instance(g, opt - 1)).feasible


def test_stats_shape():
    r = solve_decision(Instance(PETERSEN, 6), cfg=SolverConfig(audit=True))
    st = r.stats
    assert st.nodes >= 1 and st.max_depth >= 0
    assert st.wall_time >= 0
    assert st.audit_violations == 0
    assert sum(st.rule_counts.values()) >= 1
