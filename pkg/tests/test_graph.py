from __future__ import annotations

import pytest
from hypothesis import given, settings

from starcolor.errors import ContractViolation, ParseError
from starcolor.graph import (Coloring, Graph, StarVerdict, are_true_twins, complete_graph, connected_components,
                             cycle_graph, induced_subgraph, is_proper, is_star_coloring, max_clique_size,
                             parse_dimacs, partial_star_check, path_graph, same_type, star_graph, to_dimacs,
                             two_class_star_forest_check, violation_at)

from strategies import colored_graphs, graphs


class TestDimacs:
    def test_parse_basic(self):
        g = parse_dimacs("c triangle\np edge 3 3\ne 1 2\ne 2 3\ne 1 3\n")
        assert g.n == 3 and g.sorted_edges() == [(1, 2), (1, 3), (2, 3)]

    def test_duplicate_edges_collapse(self):
        g = parse_dimacs("p edge 2 2\ne 1 2\ne 2 1\n")
        assert g.m == 1

    def test_col_header_and_bytes(self):
        assert parse_dimacs(b"p col 4 0\n").n == 4

    @pytest.mark.parametrize("text, line", [
        ("p edge 3 1\ne 1 4\n", 2),
        ("p edge 3 1\ne 2 2\n", 2),
        ("e 1 2\np edge 2 1\n", 1),
        ("p edge 3\n", 1),
        ("p edge 3 0\nx 1\n", 2),
        ("p edge 2 0\np edge 2 0\n", 2),
        ("p edge 2 1\ne 1 b\n", 2),
    ])
    def test_errors_carry_line(self, text, line):
        with pytest.raises(ParseError) as info:
            parse_dimacs(text)
        assert info.value.line == line

    def test_missing_header(self):
        with pytest.raises(ParseError):
            parse_dimacs("c nothing here\n")

    @given(graphs())
    def test_round_trip(self, g):
        assert parse_dimacs(to_dimacs(g, "round\ntrip")) == g


class TestVerifier:
    def test_p4_bicolored(self):
        v = is_star_coloring(path_graph(4), Coloring.from_sequence([1, 2, 1, 2]))
        assert not v.ok and v.witness == (1, 2, 3, 4) and v.kind == "path"

    def test_improper_edge(self):
        v = is_star_coloring(path_graph(3), Coloring.from_sequence([1, 1, 2]))
        assert v.witness == (1, 2) and v.kind == "edge"

    def test_triangle_and_c4(self):
        assert is_star_coloring(complete_graph(3), Coloring.from_sequence([1, 2, 3])).ok
        assert is_star_coloring(cycle_graph(4), Coloring.from_sequence([1, 2, 1, 3])).ok
        assert not is_star_coloring(cycle_graph(4), Coloring.from_sequence([1, 2, 1, 2])).ok

    def test_star_with_two_colors(self):
        assert is_star_coloring(star_graph(5), Coloring.from_sequence([1] + [2] * 5)).ok

    def test_partial_coloring_rejected(self):
        with pytest.raises(ContractViolation):
            is_star_coloring(path_graph(3), Coloring(2, {1: 1, 2: 2}))

    def test_partial_check_ignores_uncolored(self):
        g = path_graph(4)
        assert partial_star_check(g, {1: 1, 2: 2, 3: 1}).ok
        assert not partial_star_check(g, {1: 1, 2: 2, 3: 1, 4: 2}).ok

    def test_verdict_invariant(self):
        with pytest.raises(ValueError):
            StarVerdict(True, (1, 2))
        assert StarVerdict(False, (1, 2)).to_dict() == {"ok": False, "kind": "edge", "witness": [1, 2]}

    def test_forest_check_contract(self):
        with pytest.raises(ContractViolation):
            two_class_star_forest_check(path_graph(2), Coloring.from_sequence([1, 1]))

    @settings(max_examples=300)
    @given(colored_graphs())
    def test_matches_star_forest_characterization(self, gc):
        g, c = gc
        forest = is_proper(g, c) and two_class_star_forest_check(g, c)
        assert is_star_coloring(g, c).ok == forest

    @settings(max_examples=300)
    @given(colored_graphs())
    def test_witness_is_genuine(self, gc):
        g, c = gc
        v = is_star_coloring(g, c)
        if v.ok:
            return
        w = v.witness
        assert all(g.has_edge(a, b) for a, b in zip(w, w[1:]))
        if len(w) == 2:
            assert c[w[0]] == c[w[1]]
        else:
            assert len(set(w)) == 4 and c[w[0]] == c[w[2]] and c[w[1]] == c[w[3]]

    @settings(max_examples=200)
    @given(colored_graphs())
    def test_incremental_check_agrees(self, gc):
        # coloring vertices one by one, violation_at fires exactly at the first failing prefix
        g, c = gc
        colors: dict[int, int] = {}
        for v in g.vertices:
            colors[v] = c[v]
            if violation_at(g, colors, v):
                assert not partial_star_check(g, colors).ok
                return
            assert partial_star_check(g, colors).ok
        assert is_star_coloring(g, c).ok


class TestColoring:
    def test_json_round_trip(self):
        c = Coloring.from_sequence([1, 3, 2])
        assert Coloring.from_json(c.to_json()) == c

    def test_color_range(self):
        with pytest.raises(ValueError):
            Coloring(2, {1: 3})

    def test_bad_json(self):
        with pytest.raises(ParseError):
            Coloring.from_json("{\"k\": 2}")


class TestStructure:
    def test_twins_and_types(self):
        g = Graph.from_edges(4, [(1, 2), (1, 3), (2, 3), (3, 4)])
        assert are_true_twins(g, 1, 2) and not are_true_twins(g, 1, 3)
        s = star_graph(3)
        assert same_type(s, 2, 3) and not same_type(s, 1, 2)

    def test_components_and_induced(self):
        g = Graph.from_edges(5, [(1, 2), (4, 5)])
        assert connected_components(g) == [[1, 2], [3], [4, 5]]
        sub, mapping = induced_subgraph(g, [2, 4, 5])
        assert mapping == {2: 1, 4: 2, 5: 3} and sub.sorted_edges() == [(2, 3)]

    def test_max_clique(self):
        assert max_clique_size(complete_graph(5)) == 5
        assert max_clique_size(cycle_graph(5)) == 2
        assert max_clique_size(Graph.empty(0)) == 0

    def test_graph_rejects_bad_edges(self):
        with pytest.raises((ValueError, ContractViolation)):
            Graph.from_edges(2, [(1, 1)])
