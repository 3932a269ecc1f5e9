from __future__ import annotations

import random

import networkx as nx
import pytest

from starcolor.errors import ParameterError
from starcolor.generate import (atlas_graphs, cluster_plus_cover, from_networkx, generated_corpus, gnp,
                                hand_written_corpus, random_ilp, random_nice_expression)
from starcolor.graph import complete_graph
from starcolor.twincover import compute_twin_cover
from starcolor.wexpr import check_nice, evaluate, width


def test_gnp_extremes():
    assert gnp(6, 0.0, 1).m == 0
    assert gnp(6, 1.0, 1) == complete_graph(6)
    with pytest.raises(ParameterError):
        gnp(3, 1.5, 0)


def test_seeded_generators_are_deterministic():
    assert gnp(12, 0.4, 99) == gnp(12, 0.4, 99)
    assert cluster_plus_cover(3, 4, 3, 5) == cluster_plus_cover(3, 4, 3, 5)
    assert random_nice_expression(3, 7, 11) == random_nice_expression(3, 7, 11)
    assert random_ilp(random.Random(2)) == random_ilp(random.Random(2))


@pytest.mark.parametrize("seed", range(10))
def test_cluster_plus_cover_bound(seed):
    t = seed % 4
    g = cluster_plus_cover(t, 5, 3, seed)
    assert compute_twin_cover(g, t) is not None


def test_expression_is_nice():
    e = random_nice_expression(2, 5, 7)
    assert check_nice(e) is None and width(e) <= 2 and len(evaluate(e).vertices) == 5


def test_atlas():
    graphs = atlas_graphs(4)
    assert len(graphs) == 1 + 1 + 2 + 4 + 11
    assert from_networkx(nx.path_graph(3)).sorted_edges() == [(1, 2), (2, 3)]


def test_corpora():
    names = [name for name, _ in hand_written_corpus()]
    assert len(names) == len(set(names)) == 27
    generated = generated_corpus(20, 3)
    assert len(generated) == 20
    assert all(check_nice(e) is None and width(e) <= 3 and len(evaluate(e).vertices) <= 8 for _, e in generated)
