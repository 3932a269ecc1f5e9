from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from starcolor.cwdp import (EXTENDED, VERBATIM, DpStats, StateLayout, decode_state, dp_introduce, dp_join, dp_relabel,
                            dp_union, run_tables, semantic_state, solve_cw, union_states)
from starcolor.errors import BudgetExceeded, ParameterError
from starcolor.generate import clique_expr, path_expr, random_nice_expression, spider_expr, star_expr
from starcolor.graph import Coloring, is_star_coloring
from starcolor.oracle import oracle_feasible
from starcolor.wexpr import LabeledGraph, evaluate, parse_wexpr


def _lg(labels: dict[int, int], edges) -> LabeledGraph:
    return LabeledGraph(frozenset(labels), frozenset((min(e), max(e)) for e in edges), labels)


class TestStates:
    def test_single_vertex(self):
        layout = StateLayout(2, 3)
        s = semantic_state(_lg({1: 2}, []), {1: 3}, 2, 3)
        assert decode_state(layout, s).N == {(2, 3): 1}
        assert s in dp_introduce(layout, 2)

    def test_edge_sets_neighbor_flags(self):
        s = decode_state(StateLayout(2, 2), semantic_state(_lg({1: 1, 2: 2}, [(1, 2)]), {1: 1, 2: 2}, 2, 2))
        assert s.B == {(1, 2, 1, 2), (2, 1, 2, 1)} and s.A == frozenset()

    def test_star_center_flag(self):
        lg = _lg({1: 1, 2: 2, 3: 2}, [(1, 2), (1, 3)])
        s = decode_state(StateLayout(2, 2), semantic_state(lg, {1: 1, 2: 2, 3: 2}, 2, 2))
        assert s.A == {(1, 2, 2, 1, 2)} and s.N == {(1, 1): 1, (2, 2): 2}

    def test_introduce_gives_one_state_per_color(self):
        assert sorted(dp_introduce(StateLayout(3, 4), 1).values()) == [1, 2, 3, 4]

    def test_union_counts_overlap(self):
        layout = StateLayout(1, 1)
        only = next(iter(dp_introduce(layout, 1)))
        merged = decode_state(layout, union_states(only, only))
        assert merged.N == {(1, 1): 2}

    def test_join_rejects_shared_color(self):
        layout = StateLayout(2, 1)
        t = dp_union(dp_introduce(layout, 1), dp_introduce(layout, 2))
        assert dp_join(layout, 1, 2, t) == {}

    def test_relabel_merges_classes(self):
        layout = StateLayout(2, 2)
        t = dp_union(dp_introduce(layout, 1), dp_introduce(layout, 2))
        merged = dp_relabel(layout, 2, 1, t)
        assert {tuple(sorted(decode_state(layout, s).N.items())) for s in merged} == {
            (((1, 1), 2),), (((1, 1), 1), ((1, 2), 1)), (((1, 2), 2),)}

    def test_join_validation(self):
        with pytest.raises(ParameterError):
            dp_join(StateLayout(2, 2), 1, 1, {})
        with pytest.raises(ParameterError):
            dp_join(StateLayout(2, 2), 1, 2, {}, "sideways")


def _capped_neighbor_counts(lg: LabeledGraph, colors: dict[int, int]) -> dict:
    counts: dict[tuple[int, int, int, int], int] = {}
    for v in lg.vertices:
        seen = set()
        for x, y in lg.edges:
            u = y if x == v else x if y == v else None
            if u is not None:
                seen.add((lg.labels[v], lg.labels[u], colors[v], colors[u]))
        for key in seen:
            counts[key] = min(2, counts.get(key, 0) + 1)
    return counts


def test_capped_neighbor_counts_do_not_survive_relabeling():
    # vertices 1, 2 labeled 1 and colored 1; 3 labeled 2, 4 labeled 3, both colored 2
    colors = {1: 1, 2: 1, 3: 2, 4: 2}
    labels = {1: 1, 2: 1, 3: 2, 4: 3}
    one_vertex_sees_both = _lg(labels, [(1, 3), (1, 4)])
    each_sees_one = _lg(labels, [(1, 3), (2, 4)])
    before = [_capped_neighbor_counts(g, colors) for g in (one_vertex_sees_both, each_sees_one)]
    assert before[0][(1, 2, 1, 2)] == before[1][(1, 2, 1, 2)] == 1
    assert before[0][(1, 3, 1, 2)] == before[1][(1, 3, 1, 2)] == 1

    def relabel(lg):
        return LabeledGraph(lg.vertices, lg.edges, {v: 2 if lab == 3 else lab for v, lab in lg.labels.items()})

    after = [_capped_neighbor_counts(relabel(g), colors) for g in (one_vertex_sees_both, each_sees_one)]
    assert after[0][(1, 2, 1, 2)] == 1 and after[1][(1, 2, 1, 2)] == 2
    # presence flags stay consistent: relabeling the state agrees with the state of the relabeled graph
    layout = StateLayout(3, 2)
    for g in (one_vertex_sees_both, each_sees_one):
        s = semantic_state(g, colors, 3, 2)
        assert set(dp_relabel(layout, 3, 2, {s: None})) == {semantic_state(relabel(g), colors, 3, 2)}


@pytest.mark.parametrize("e, k, feasible", [
    (clique_expr(3), 3, True), (clique_expr(3), 2, False), (path_expr(4), 2, False), (path_expr(4), 3, True),
    (star_expr(4), 2, True), (star_expr(4), 1, False), (clique_expr(2), 0, False),
])
def test_solve_examples(e, k, feasible):
    res = solve_cw(e, k, witness=True)
    assert res.feasible == feasible
    if feasible:
        g, mapping = evaluate(e).to_graph()
        assert is_star_coloring(g, Coloring(k, {mapping[v]: c for v, c in res.coloring.colors.items()})).ok


@pytest.mark.parametrize("legs", [2, 3, 4])
def test_verbatim_join_cases_miss_a_path_on_spiders(legs):
    e = spider_expr(legs)
    assert not oracle_feasible(evaluate(e).to_graph()[0], 2).feasible
    assert not solve_cw(e, 2, join_case_range=EXTENDED).feasible
    assert solve_cw(e, 2, join_case_range=VERBATIM).feasible


def test_not_nice_is_rejected():
    with pytest.raises(ParameterError):
        solve_cw(parse_wexpr("eta(1,2,eta(1,2,u(v(1,1),v(2,2))))"), 2)


def test_budget():
    with pytest.raises(BudgetExceeded):
        solve_cw(clique_expr(5), 5, max_states=3)


def test_dump_tables(tmp_path):
    solve_cw(path_expr(3), 3, dump_tables=tmp_path)
    files = sorted(p.name for p in tmp_path.iterdir())
    assert files[0] == "node0000_introduce.jsonl" and files[-1].endswith("_relabel.jsonl")
    assert all(p.read_text().strip() for p in tmp_path.iterdir())


def test_stats_and_declared_width():
    stats = DpStats()
    run_tables(path_expr(4), 3, stats=stats)
    assert stats.nodes == 16 and stats.max_table >= 1
    assert solve_cw(path_expr(4), 3, w=4).width == 4


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 3), st.integers(1, 5), st.integers(0, 2**32), st.integers(1, 3))
def test_root_table_matches_enumeration(w, n, seed, k):
    e = random_nice_expression(w, n, seed)
    lg = evaluate(e)
    g, mapping = lg.to_graph()
    want = set()
    order = sorted(lg.vertices)
    for seq in itertools.product(range(1, k + 1), repeat=len(order)):
        colors = dict(zip(order, seq))
        if is_star_coloring(g, Coloring(k, {mapping[v]: colors[v] for v in order})).ok:
            want.add(semantic_state(lg, colors, w, k))
    root, _ = run_tables(e, k, w=w)
    assert set(root) == want
