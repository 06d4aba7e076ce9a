from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from boundary_kernel.errors import UniverseInconsistency
from boundary_kernel.term import Level
from boundary_kernel.universes import (Constraint, InconsistencyReport, Rel, UniverseGraph,
                                       add_constraint, check_consistency, fresh_level)


def holds(rel: Rel, a: int, b: int) -> bool:
    return a < b if rel is Rel.LT else a == b if rel is Rel.EQ else a <= b


def satisfiable(n: int, cs: list[tuple[int, Rel, int]]) -> bool:
    """Brute force: try every assignment of the n levels into 0..n-1.
    A satisfiable set always has a solution in that range."""
    by_var: dict[int, list] = {i: [] for i in range(n)}
    for a, r, b in cs:
        by_var[max(a, b)].append((a, r, b))
    vals = [0] * n

    def go(i: int) -> bool:
        if i == n:
            return True
        for v in range(n):
            vals[i] = v
            if all(holds(r, vals[a], vals[b]) for a, r, b in by_var[i]) and go(i + 1):
                return True
        return False

    return go(0)


def graph_with(n: int) -> tuple[UniverseGraph, list[Level]]:
    g = UniverseGraph(cumulative_set=False)
    return g, [g.fresh() for _ in range(n)]


def random_problem(rng: random.Random):
    n = rng.randint(1, 6)
    m = rng.randint(0, 12)
    rels = [Rel.LE, Rel.LE, Rel.LT, Rel.EQ]
    return n, [(rng.randrange(n), rng.choice(rels), rng.randrange(n)) for _ in range(m)]


def test_solver_agrees_with_oracle_on_random_sets():
    rng = random.Random(20261015)
    disagreements = []
    for trial in range(1500):
        n, cs = random_problem(rng)
        g, lv = graph_with(n)
        accepted = []
        for a, r, b in cs:
            expect = satisfiable(n, accepted + [(a, r, b)])
            try:
                g.enforce(Constraint(lv[a], r, lv[b]))
                got = True
            except UniverseInconsistency as exc:
                got = False
                cycle = exc.report.cycle
                assert cycle[-1].src == lv[a] or r is Rel.EQ
                assert any(e.strict for e in cycle)
            if got != expect:
                disagreements.append((trial, n, accepted, (a, r, b)))
            if got:
                accepted.append((a, r, b))
        assert bool(check_consistency(g)) == satisfiable(n, accepted)
    assert disagreements == []


def test_entailment_agrees_with_oracle():
    rng = random.Random(7)
    for _ in range(300):
        n, cs = random_problem(rng)
        g, lv = graph_with(n)
        kept = []
        for a, r, b in cs:
            if satisfiable(n, kept + [(a, r, b)]):
                g.enforce(Constraint(lv[a], r, lv[b]))
                kept.append((a, r, b))
        a, b = rng.randrange(n), rng.randrange(n)
        # a <= b is entailed iff adding b < a is unsatisfiable
        assert g.entails(lv[a], lv[b], False) == (not satisfiable(n, kept + [(b, Rel.LT, a)]))
        assert g.entails(lv[a], lv[b], True) == (not satisfiable(n, kept + [(b, Rel.LE, a)]))


def test_fresh_levels():
    g = UniverseGraph(cumulative_set=False)
    g2, a = fresh_level(g)
    assert len(g2.nodes) == 1 and g2.edges == [] and len(g.nodes) == 0
    b = g2.fresh()
    assert a != b


def test_lt_then_le_reports_the_pair():
    g, (i, j) = graph_with(2)
    g.enforce(Constraint(j, Rel.LT, i))
    result = add_constraint(g, Constraint(i, Rel.LE, j))
    assert isinstance(result, InconsistencyReport)
    assert [(e.src, e.dst, e.strict) for e in result.cycle] == [(j, i, True), (i, j, False)]
    entailed, attempted = result.summary()
    assert (entailed.src, entailed.dst, entailed.strict) == (j, i, True)
    assert (attempted.src, attempted.dst, attempted.strict) == (i, j, False)
    assert result.render().startswith(f"cannot enforce {i} ≤ {j} because {j} < {i}")


def test_self_loops():
    g, (a,) = graph_with(1)
    assert isinstance(add_constraint(g, Constraint(a, Rel.LE, a)), UniverseGraph)
    assert isinstance(add_constraint(g, Constraint(a, Rel.LT, a)), InconsistencyReport)


def test_weight_two_cycle_and_all_equal_cycle():
    g, (a, b, c) = graph_with(3)
    g.enforce(Constraint(a, Rel.LT, b))
    g.enforce(Constraint(b, Rel.LT, c))
    report = add_constraint(g, Constraint(c, Rel.LE, a))
    assert isinstance(report, InconsistencyReport) and report.weight == 2
    h, (a, b, c) = graph_with(3)
    for x, y in [(a, b), (b, c), (c, a)]:
        h.enforce(Constraint(x, Rel.LE, y))
    assert check_consistency(h)
    assert check_consistency(UniverseGraph())


def test_failed_enforce_leaves_graph_unchanged():
    g, (a, b) = graph_with(2)
    g.enforce(Constraint(a, Rel.LT, b))
    before = list(g.edges)
    with pytest.raises(UniverseInconsistency):
        g.enforce(Constraint(b, Rel.EQ, a))
    assert g.edges == before


def test_rollback_restores_marked_state():
    g, (a, b) = graph_with(2)
    mark = g.mark()
    g.enforce(Constraint(a, Rel.LT, b))
    c = g.fresh()
    g.rollback(mark)
    assert c not in g and g.edges == []
    g.enforce(Constraint(b, Rel.LT, a))


def test_unstratified_graph_never_complains():
    g = UniverseGraph(stratified=False, cumulative_set=False)
    a = g.fresh()
    g.enforce(Constraint(a, Rel.LT, a))
    assert check_consistency(g)


def test_digest_ignores_order():
    g, (a, b, c) = graph_with(3)
    g.enforce(Constraint(a, Rel.LT, b))
    g.enforce(Constraint(b, Rel.LE, c))
    r1 = add_constraint(g, Constraint(c, Rel.LE, a))
    h, (a, b, c) = graph_with(3)
    h.enforce(Constraint(b, Rel.LE, c))
    h.enforce(Constraint(c, Rel.LE, a))
    r2 = add_constraint(h, Constraint(a, Rel.LT, b))
    assert r1.digest() == r2.digest()


@settings(max_examples=200)
@given(st.lists(st.tuples(st.integers(0, 3), st.sampled_from(list(Rel)), st.integers(0, 3)),
                max_size=8))
def test_value_api_agrees_with_oracle(cs):
    g, lv = graph_with(4)
    kept = []
    for a, r, b in cs:
        res = add_constraint(g, Constraint(lv[a], r, lv[b]))
        assert isinstance(res, UniverseGraph) == satisfiable(4, kept + [(a, r, b)])
        if isinstance(res, UniverseGraph):
            g, kept = res, kept + [(a, r, b)]
