from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from starcolor.errors import BudgetExceeded, ContractViolation
from starcolor.graph import (Graph, complete_graph, cycle_graph, is_star_coloring, max_clique_size, path_graph,
                             star_graph)
from starcolor.oracle import oracle_chromatic, oracle_feasible, proper_coloring_feasible

from strategies import graphs


@pytest.mark.parametrize("g, value", [
    (Graph.empty(0), 0), (Graph.empty(3), 1), (path_graph(2), 2), (path_graph(3), 2), (path_graph(4), 3),
    (cycle_graph(4), 3), (cycle_graph(5), 4), (complete_graph(5), 5), (star_graph(4), 2),
])
def test_known_values(g, value):
    chi, c = oracle_chromatic(g)
    assert chi == value
    if g.n:
        assert is_star_coloring(g, c).ok


def test_fixed_colors_are_respected():
    g = path_graph(4)
    res = oracle_feasible(g, 3, fixed={1: 1, 3: 1})
    assert res.feasible and res.coloring[1] == res.coloring[3] == 1
    # fixing 1 and 4 to one color and 2, 3 to another makes a bicolored P4
    assert not oracle_feasible(g, 3, fixed={1: 1, 2: 2, 3: 1, 4: 2}).feasible
    assert not oracle_feasible(g, 2, fixed={1: 3}).feasible


def test_conflict_edges_must_differ():
    g = Graph.empty(2)
    assert oracle_feasible(g, 1).feasible
    assert not oracle_feasible(g, 1, conflict=Graph.from_edges(2, [(1, 2)])).feasible
    with pytest.raises(ContractViolation):
        oracle_feasible(g, 1, conflict=Graph.empty(3))


def test_budget_refusal():
    with pytest.raises(BudgetExceeded):
        oracle_feasible(Graph.empty(15), 2)


def test_k_zero():
    assert oracle_feasible(Graph.empty(0), 0).feasible
    assert not oracle_feasible(Graph.empty(1), 0).feasible


@settings(max_examples=150, deadline=None)
@given(graphs(7), st.integers(1, 4))
def test_monotone_in_k_and_witness_verified(g, k):
    res = oracle_feasible(g, k)
    if res.feasible:
        assert is_star_coloring(g, res.coloring).ok
        assert max(res.coloring.colors.values(), default=1) <= k
        assert oracle_feasible(g, k + 1).feasible


@settings(max_examples=100, deadline=None)
@given(graphs(7))
def test_chromatic_bounds(g):
    chi, _ = oracle_chromatic(g)
    assert chi >= max_clique_size(g)
    if g.n:
        assert proper_coloring_feasible(g, chi)
        assert not oracle_feasible(g, chi - 1).feasible
