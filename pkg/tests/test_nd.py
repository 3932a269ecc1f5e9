from __future__ import annotations

import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from starcolor.errors import ContractViolation
from starcolor.graph import Coloring, Graph, complete_graph, cycle_graph, is_star_coloring, path_graph, same_type
from starcolor.ilp import IlpAssignment, check_assignment, solve_feasibility
from starcolor.nd import (CLIQUE, INDEPENDENT, build_ilp, compute_type_partition, induced_assignment,
                          nd_proper_feasible, reconstruct_coloring, solve_nd)
from starcolor.oracle import oracle_feasible, proper_coloring_feasible

from strategies import graphs


class TestTypes:
    def test_clique_is_one_type(self):
        p = compute_type_partition(complete_graph(5))
        assert p.t == 1 and p.kinds == (CLIQUE,)

    def test_c4_has_two_independent_types(self):
        p = compute_type_partition(cycle_graph(4))
        assert p.types == ((1, 3), (2, 4)) and p.kinds == (INDEPENDENT, INDEPENDENT)
        assert p.adjacent(0, 1)

    def test_p4_has_four_types(self):
        assert compute_type_partition(path_graph(4)).t == 4

    @settings(max_examples=100)
    @given(graphs(7))
    def test_partition_is_coarsest(self, g):
        p = compute_type_partition(g)
        assert sorted(v for m in p.types for v in m) == list(g.vertices)
        for members in p.types:
            assert all(same_type(g, members[0], v) for v in members)
        for i in range(p.t):
            for j in range(i + 1, p.t):
                assert not same_type(g, p.types[i][0], p.types[j][0])


@pytest.mark.parametrize("g, k, feasible", [
    (complete_graph(3), 3, True), (complete_graph(3), 2, False),
    (cycle_graph(4), 2, False), (cycle_graph(4), 3, True),
    (path_graph(4), 2, False), (path_graph(4), 3, True),
    (Graph.empty(0), 0, True),
])
def test_solve_nd_examples(g, k, feasible):
    c = solve_nd(g, k)
    assert (c is not None) == feasible
    if c is not None:
        assert is_star_coloring(g, c).ok


@pytest.mark.parametrize("g, k, feasible", [
    (complete_graph(4), 3, False), (cycle_graph(4), 2, True), (cycle_graph(5), 2, False), (cycle_graph(5), 3, True),
])
def test_proper_variant(g, k, feasible):
    assert nd_proper_feasible(g, k) == feasible == proper_coloring_feasible(g, k)


def test_reconstruct_rejects_infeasible_assignment():
    p = compute_type_partition(cycle_graph(4))
    with pytest.raises(ContractViolation):
        reconstruct_coloring(cycle_graph(4), p, IlpAssignment((0, 0, 0, 0)), 3)


def test_induced_assignment_counts_colors():
    g = cycle_graph(4)
    p = compute_type_partition(g)
    a = induced_assignment(p, Coloring.from_sequence([1, 2, 1, 3]))
    # masks: 1 = first type only, 2 = second type only
    assert a.values == (0, 1, 2, 0)
    assert check_assignment(build_ilp(p, 3), a)


def test_dump_ilp(tmp_path):
    target = tmp_path / "c4.json"
    solve_nd(cycle_graph(4), 3, dump_ilp=target)
    data = json.loads(target.read_text())
    assert data["var_count"] == 4


@settings(max_examples=80, deadline=None)
@given(graphs(7), st.integers(1, 4))
def test_round_trip_with_oracle(g, k):
    p = compute_type_partition(g)
    inst = build_ilp(p, k)
    a = solve_feasibility(inst)
    res = oracle_feasible(g, k)
    assert (a is not None) == res.feasible
    if a is not None:
        assert is_star_coloring(g, reconstruct_coloring(g, p, a, k)).ok
        assert check_assignment(inst, induced_assignment(p, res.coloring))
