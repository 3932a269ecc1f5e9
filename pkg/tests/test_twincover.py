from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from starcolor.errors import ContractViolation, ParameterError
from starcolor.generate import cluster_plus_cover
from starcolor.graph import Coloring, Graph, complete_graph, induced_subgraph, is_star_coloring, path_graph, star_graph
from starcolor.oracle import oracle_feasible
from starcolor.twincover import (SurgeryRecord, TcStats, WorkGraph, apply_claim1, apply_claim2, apply_rr1,
                                 build_clique_types, claim2_pairs, clique_types, compute_twin_cover,
                                 enumerate_x_colorings, is_twin_cover, lift_coloring, solve_tc, surgery)


class TestTwinCover:
    def test_clique_needs_no_cover(self):
        assert compute_twin_cover(complete_graph(5), 3).X == ()

    def test_star_center(self):
        assert compute_twin_cover(star_graph(3), 3).X == (1,)

    def test_p4(self):
        cover = compute_twin_cover(path_graph(4), 3)
        assert cover.t == 2 and is_twin_cover(path_graph(4), cover.X)
        assert compute_twin_cover(path_graph(4), 1) is None

    @settings(max_examples=100)
    @given(st.integers(0, 3), st.integers(0, 4), st.integers(1, 3), st.integers(0, 2**32))
    def test_generated_cover_bound(self, t, cliques, size, seed):
        g = cluster_plus_cover(t, cliques, size, seed)
        assert is_twin_cover(g, range(1, t + 1))
        cover = compute_twin_cover(g, t)
        assert cover is not None and is_twin_cover(g, cover.X)


def _three_cliques_on_one_vertex() -> Graph:
    # cover vertex 1 sees three cliques of sizes 3, 2, 2
    cliques = [(2, 3, 4), (5, 6), (7, 8)]
    edges = [(a, b) for K in cliques for a in K for b in K if a < b]
    edges += [(1, v) for K in cliques for v in K]
    return Graph.from_edges(8, edges)


class TestCliqueTypes:
    def test_grouping(self):
        g = Graph.from_edges(5, [(1, 2), (1, 3), (2, 3), (1, 4)])
        types = build_clique_types(g, (1,))
        assert types.cliques == {0: [(5,)], 1: [(2, 3), (4,)]}
        assert types.members(1) == (2, 3, 4) and types.cover_vertices(1) == (1,)

    def test_non_clique_component(self):
        with pytest.raises(ContractViolation):
            build_clique_types(path_graph(3), ())

    def test_non_uniform_neighborhood(self):
        g = Graph.from_edges(3, [(1, 2), (2, 3)])
        with pytest.raises(ContractViolation):
            build_clique_types(g, (1,))


class TestSurgery:
    def test_merging_when_cover_repeats_a_color(self):
        g = Graph.from_edges(4, [(1, 3), (1, 4), (2, 3), (2, 4)])
        w = WorkGraph.of(g)
        types = clique_types(w, (1, 2))
        merged, record = apply_claim1(w, {1: 1, 2: 1}, types)
        assert record.added_edges == [(3, 4)] and merged.graph.has_edge(3, 4)
        same, record = apply_claim1(w, {1: 1, 2: 2}, types)
        assert record.added_edges == [] and same is w

    def test_deletion_keeps_largest(self):
        g = _three_cliques_on_one_vertex()
        w = WorkGraph.of(g)
        kept, record = apply_rr1(w, clique_types(w, (1,)))
        assert kept.alive == frozenset({1, 2, 3, 4})
        assert [K for K, _, _ in record.deleted_cliques] == [(5, 6), (7, 8)]

    def test_deletion_ties_keep_smallest_vertex(self):
        g = Graph.from_edges(5, [(1, 2), (1, 3), (1, 4), (1, 5), (2, 3), (4, 5)])
        w = WorkGraph.of(g)
        kept, _ = apply_rr1(w, clique_types(w, (1,)))
        assert kept.alive == frozenset({1, 2, 3})

    def test_deletion_refuses_mergeable_types(self):
        g = Graph.from_edges(4, [(1, 3), (1, 4), (2, 3), (2, 4)])
        w = WorkGraph.of(g)
        with pytest.raises(ContractViolation):
            apply_rr1(w, clique_types(w, (1, 2)), {1: 1, 2: 1})

    def test_clashing_type_pairs_are_merged(self):
        g = Graph.from_edges(4, [(1, 3), (1, 4), (2, 4)])
        w = WorkGraph.of(g)
        types = clique_types(w, (1, 2))
        assert claim2_pairs({1: 1, 2: 1}, types) == [(1, 3)]
        assert claim2_pairs({1: 1, 2: 2}, types) == []
        merged, record = apply_claim2(w, {1: 1, 2: 1}, types)
        assert record.added_edges == [(3, 4)]

    def test_record_serialization(self):
        rec = SurgeryRecord([(3, 4)]) + SurgeryRecord([], [((5, 6), (2, 3, 4), 1)])
        assert rec.to_dict() == {"added_edges": [[3, 4]],
                                 "deleted_cliques": [{"clique": [5, 6], "representative": [2, 3, 4], "type": 1}]}

    @pytest.mark.parametrize("t, k, count", [(3, 3, 5), (3, 1, 1), (0, 2, 1), (4, 2, 8), (2, 0, 0)])
    def test_x_colorings_are_set_partitions(self, t, k, count):
        fs = list(enumerate_x_colorings(range(1, t + 1), k))
        assert len(fs) == count
        for f in fs:
            assert set(f.values()) == set(range(1, len(set(f.values())) + 1))

    def test_lift_uses_representative_colors(self):
        rec = SurgeryRecord([], [((5, 6), (2, 3, 4), 1)])
        h = Coloring(3, {1: 3, 2: 3, 3: 1, 4: 2})
        assert lift_coloring(rec, h).as_dict() == {1: 3, 2: 3, 3: 1, 4: 2, 5: 1, 6: 2}

    @settings(max_examples=60, deadline=None)
    @given(st.integers(1, 3), st.integers(1, 4), st.integers(1, 3), st.integers(0, 2**32), st.integers(1, 4))
    def test_surgery_keeps_feasibility(self, t, cliques, size, seed, k):
        g = cluster_plus_cover(t, cliques, size, seed)
        if g.n > 8:
            return
        X = compute_twin_cover(g, 3).X
        for f in enumerate_x_colorings(X, k):
            w, types, _ = surgery(g, X, f)
            assert all(len(cl) <= 1 for cl in types.cliques.values())
            sub, mapping = induced_subgraph(g, w.alive)
            conflict, _ = induced_subgraph(w.graph, w.alive)
            before = oracle_feasible(g, k, fixed=f).feasible
            after = oracle_feasible(sub, k, fixed={mapping[x]: c for x, c in f.items()}, conflict=conflict)
            assert before == after.feasible


def test_choice_of_surviving_clique_does_not_matter():
    # keeping any one of several equally large cliques gives the same answer
    rng = random.Random(4)
    for _ in range(60):
        g = cluster_plus_cover(rng.randint(1, 2), rng.randint(2, 4), 2, rng.getrandbits(32), p_attach=0.9)
        if g.n > 9:
            continue
        X = compute_twin_cover(g, 3).X
        types = clique_types(WorkGraph.of(g), X)
        for mask, cl in types.cliques.items():
            largest = [K for K in cl if len(K) == max(map(len, cl))]
            if len(largest) < 2:
                continue
            for k in range(1, 5):
                answers = set()
                for keep in largest:
                    dropped = {v for K in cl if K is not keep for v in K}
                    sub, _ = induced_subgraph(g, [v for v in g.vertices if v not in dropped])
                    answers.add(oracle_feasible(sub, k).feasible)
                assert len(answers) == 1


@pytest.mark.parametrize("g, k, feasible", [
    (star_graph(3), 2, True), (path_graph(4), 2, False), (path_graph(4), 3, True),
    (complete_graph(4), 4, True), (complete_graph(4), 3, False), (_three_cliques_on_one_vertex(), 4, True), (_three_cliques_on_one_vertex(), 3, False),
])
def test_solve_tc_examples(g, k, feasible):
    stats = TcStats()
    c = solve_tc(g, k, 3, stats=stats, cross_check=True)
    assert (c is not None) == feasible
    if c is not None:
        assert is_star_coloring(g, c).ok and max(c.colors.values()) <= k


def test_solve_tc_parameter_errors():
    with pytest.raises(ParameterError):
        solve_tc(path_graph(6), 3, 1)
    with pytest.raises(ParameterError):
        solve_tc(path_graph(4), 3, X=(1,))


def test_solve_tc_with_given_cover():
    g = path_graph(5)
    assert solve_tc(g, 3, X=(2, 4)) is not None


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 3), st.integers(0, 4), st.integers(1, 3), st.integers(0, 2**32), st.integers(1, 4))
def test_agrees_with_oracle(t, cliques, size, seed, k):
    g = cluster_plus_cover(t, cliques, size, seed)
    if g.n > 11:
        return
    c = solve_tc(g, k, 3)
    assert (c is not None) == oracle_feasible(g, k).feasible
