import random

import pytest
from hypothesis import given, settings, strategies as st

from covsat.cnf import preprocess
from covsat.decomposition import (
    decomposition_of_cnf,
    missing_elements,
    single_elements,
)
from covsat.graph import build_graph, simple_cycles
from covsat.oracle import random_cnf
from covsat.procedures import (
    ArcSeed,
    SeedAbsent,
    VertexSeed,
    WorkGraph,
    check_domain_preservation,
    clean_graph,
    eliminate_incompatibilities,
    find_incompatible_sets,
    lost_elements,
    removal_cascade,
    trace_records,
)


def kinds(trace):
    return [e.kind for e in trace.events]


def test_cascade_fd_dead_seed_exhausts_main(dd):
    g = build_graph(dd, 1, {3})
    work = WorkGraph(g)
    trace = removal_cascade(work, VertexSeed(2), {3})
    assert trace.exhausted == 3
    assert trace.removed_vertices() == [2, 1]
    assert kinds(trace) == [
        "SeedVertex", "VertexRemoved", "EdgeRemoved", "VertexRemoved", "MainLost",
    ]
    assert trace.events[3].reason == "obligatory"


def test_cascade_f1_seed_v2_keeps_v3(d1):
    g = build_graph(d1, 1, {3})
    work = WorkGraph(g)
    trace = removal_cascade(work, VertexSeed(2), {3})
    assert trace.ok
    assert trace.removed_vertices() == [2, 1]
    assert work.alive == {3}


def test_cascade_f1_seed_v3_only_removes_v3(d1):
    g = build_graph(d1, 1, {3})
    work = WorkGraph(g)
    trace = removal_cascade(work, VertexSeed(3), {3})
    assert trace.ok
    assert trace.removed_vertices() == [3]
    assert work.alive == {1, 2}


def test_absent_seeds_rejected(d1):
    work = WorkGraph(build_graph(d1, 1, {3}))
    with pytest.raises(SeedAbsent):
        removal_cascade(work, VertexSeed(9))
    with pytest.raises(SeedAbsent):
        removal_cascade(work, ArcSeed(2, 1))


def test_out_edges_removed_before_vertex(dc):
    work = WorkGraph(build_graph(dc, 1, {3}))
    trace = removal_cascade(work, VertexSeed(2), {3})
    seen_removed = set()
    for e in trace.events:
        if e.kind == "EdgeRemoved":
            assert e.src not in seen_removed
        if e.kind == "VertexRemoved":
            seen_removed.add(e.vertex)


def test_clean_f1_unchanged(d1):
    g = build_graph(d1, 1, {3})
    out = clean_graph(g)
    assert out.stable and out.graph == g and out.traces == [] and out.cycles == []


def test_clean_fc_unstable(dc):
    out = clean_graph(build_graph(dc, 1, {3}))
    assert not out.stable
    assert out.stage == "clean"
    assert out.cycles == [[1, 2]]
    assert out.exhausted == 3
    assert [t.seed for t in out.traces] == [ArcSeed(1, 2), ArcSeed(2, 1)]
    assert all(t.exhausted == 3 and not t.committed for t in out.traces)


def test_clean_fd_unstable_in_dead_prepass(dd):
    out = clean_graph(build_graph(dd, 1, {3}))
    assert not out.stable and out.stage == "dead" and out.exhausted == 3


def test_incompatible_sets_f1(d1):
    g = build_graph(d1, 1, {3})
    sets = find_incompatible_sets(d1, 1, g)
    assert [(set(s.vertices), s.element) for s in sets] == [({2, 3}, 2)]
    assert not sets[0].structural_anomaly
    assert find_incompatible_sets(d1, 1, g.restricted({3})) == []


def test_eliminate_f1(d1):
    g = clean_graph(build_graph(d1, 1, {3})).graph
    out = eliminate_incompatibilities(d1, 1, g)
    assert out.stable and out.surviving == {3}
    assert len(out.traces) == 1
    assert out.traces[0].seed == VertexSeed(2) and out.traces[0].committed
    assert out.traces[0].removed_vertices() == [2, 1]


def test_eliminate_without_incompatibility_keeps_everything(d1):
    g = build_graph(d1, 1, {3}).restricted({3})
    out = eliminate_incompatibilities(d1, 1, g)
    assert out.stable and out.surviving == {3} and out.traces == []


def test_eliminate_fd_raw_graph_is_structural_anomaly(dd):
    out = eliminate_incompatibilities(dd, 1, build_graph(dd, 1, {3}))
    assert not out.stable and out.reason == "structural-anomaly" and out.exhausted == 2


def test_domain_preservation_examples(d1):
    assert check_domain_preservation(d1, 1, {1, 2, 3}, {3})
    assert check_domain_preservation(d1, 1, {1, 2, 3}, {1, 2, 3})
    assert check_domain_preservation(d1, 1, {1, 2, 3}, {1, 2})
    assert lost_elements(d1, 1, {3}, set()) == {3}


def test_trace_records_shape(d1):
    g = clean_graph(build_graph(d1, 1, {3})).graph
    recs = trace_records(eliminate_incompatibilities(d1, 1, g).traces, 1)
    assert recs[0] == {
        "alpha": 1, "attempt": 0, "procedure": "compat", "committed": True,
        "event": "SeedVertex", "vertex": 2,
    }
    assert recs[-1]["event"] == "DomainSnapshot"
    assert recs[-1]["domain"] == [1, 2, 3]


def _instance(seed, n, m, alpha):
    d = decomposition_of_cnf(preprocess(random_cnf(seed, n, m, 1, min(4, n))).formula)
    missing = missing_elements(d, alpha)
    return d, (build_graph(d, alpha, missing) if missing else None)


@settings(max_examples=150)
@given(st.integers(0, 10**6), st.integers(1, 7), st.integers(1, 14), st.integers(0, 1))
def test_clean_graphs_are_acyclic_and_keep_mains(seed, n, m, alpha):
    d, g = _instance(seed, n, m, alpha)
    if g is None:
        return
    out = clean_graph(g)
    for t in out.traces:
        assert t.committed == t.ok
    if not out.stable:
        return
    assert simple_cycles(out.graph.successors()) == []
    for elem, where in g.main_assoc.items():
        assert where & out.graph.vertices
    comp = eliminate_incompatibilities(d, alpha, out.graph)
    if comp.stable:
        assert find_incompatible_sets(d, alpha, comp.graph) == []
        for where in g.main_assoc.values():
            assert where & comp.surviving


@settings(max_examples=150)
@given(st.integers(0, 10**6), st.integers(1, 7), st.integers(1, 14), st.integers(0, 1))
def test_clean_graph_vertices_keep_an_edge_per_single_element(seed, n, m, alpha):
    d, g = _instance(seed, n, m, alpha)
    if g is None:
        return
    out = clean_graph(g)
    if not out.stable:
        return
    cg = out.graph
    for v in cg.vertices - cg.finals:
        labels = {e.element for e in cg.out_edges(v)}
        assert single_elements(d, v, alpha) <= labels


@settings(max_examples=100)
@given(st.integers(0, 10**6), st.integers(1, 6), st.integers(1, 12), st.integers(0, 1))
def test_procedures_are_deterministic(seed, n, m, alpha):
    d, g = _instance(seed, n, m, alpha)
    if g is None:
        return
    a, b = clean_graph(g), clean_graph(g)
    assert (a.stable, a.graph, a.cycles) == (b.stable, b.graph, b.cycles)
    assert trace_records(a.traces, alpha) == trace_records(b.traces, alpha)


def test_random_cycle_choice_on_fc_is_unstable(dc):
    for seed in range(5):
        out = clean_graph(build_graph(dc, 1, {3}), rng=random.Random(seed))
        assert not out.stable
