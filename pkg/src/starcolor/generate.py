"""Seeded instance generators and hand-written expression families."""

from __future__ import annotations

import random

import networkx as nx

from .errors import ParameterError
from .graph import Coloring, Graph
from .ilp import IlpInstance, Implication, LinearComparison
from .wexpr import Introduce, Join, LabeledGraph, Relabel, Union, WExpr, parse_wexpr


def gnp(n: int, p: float, seed: int) -> Graph:
    if n < 0 or not 0.0 <= p <= 1.0:
        raise ParameterError("gnp needs n >= 0 and 0 <= p <= 1")
    rng = random.Random(seed)
    edges = [(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1) if rng.random() < p]
    return Graph.from_edges(n, edges)


def cluster_plus_cover(t: int, cliques: int, max_clique: int, seed: int,
                       p_cover: float = 0.5, p_attach: float = 0.5) -> Graph:
    """Vertices ``1..t`` form the cover; every further clique sees a random subset of it.

    ``{1..t}`` is a twin cover of the result by construction.
    """
    if t < 0 or cliques < 0 or max_clique < 1:
        raise ParameterError("cluster-plus-cover needs t >= 0, cliques >= 0, max_clique >= 1")
    rng = random.Random(seed)
    cover = list(range(1, t + 1))
    edges = [(a, b) for a in cover for b in cover if a < b and rng.random() < p_cover]
    n = t
    for _ in range(cliques):
        size = rng.randint(1, max_clique)
        members = list(range(n + 1, n + size + 1))
        n += size
        seen = [x for x in cover if rng.random() < p_attach]
        edges += [(a, b) for a in members for b in members if a < b]
        edges += [(x, a) for a in members for x in seen]
    return Graph.from_edges(n, edges)


def from_networkx(h: nx.Graph) -> Graph:
    """Relabel the nodes of ``h`` to ``1..n`` in sorted order."""
    index = {v: i for i, v in enumerate(sorted(h.nodes()), start=1)}
    return Graph.from_edges(len(index), [(index[a], index[b]) for a, b in h.edges()])


def atlas_graphs(n_max: int = 7) -> list[Graph]:
    """All graphs on at most ``min(n_max, 7)`` vertices up to isomorphism, smallest first."""
    return [from_networkx(h) for h in nx.graph_atlas_g() if h.number_of_nodes() <= n_max]


def random_coloring(g: Graph, k: int, rng: random.Random) -> Coloring:
    return Coloring(k, {v: rng.randint(1, k) for v in g.vertices})


def random_ilp(rng: random.Random, q_max: int = 4, bound_max: int = 3) -> IlpInstance:
    """Small bounded instance with random constraints and implications."""
    q = rng.randint(1, q_max)
    lower, upper = [], []
    for _ in range(q):
        lo = rng.randint(0, bound_max)
        hi = rng.randint(lo, bound_max)
        lower.append(lo)
        upper.append(hi)

    def comparison() -> LinearComparison:
        coeffs = [rng.choice((0, 0, 1, 1, 2)) for _ in range(q)]
        return LinearComparison.from_dense(coeffs, rng.choice(("<=", "=", ">=")),
                                           rng.randint(0, bound_max * 2))

    constraints = tuple(comparison() for _ in range(rng.randint(0, 3)))
    implications = tuple(Implication(comparison(), comparison()) for _ in range(rng.randint(0, 3)))
    return IlpInstance(q, tuple(lower), tuple(upper), constraints, implications)


# -- random nice expressions -----------------------------------------------------

def _classes(lg: LabeledGraph, label: int) -> list[int]:
    return [v for v in lg.vertices if lg.labels[v] == label]


def random_nice_expression(w: int, n: int, seed: int, *, p_join: float = 0.85) -> WExpr:
    """A random w-expression on vertices ``1..n`` in which no join repeats an edge.

    A join is only emitted between two nonempty label classes with no edge
    between them yet, which makes niceness hold by construction.
    """
    if w < 1 or n < 1:
        raise ParameterError("expression generator needs w >= 1 and n >= 1")
    rng = random.Random(seed)
    pool: list[tuple[WExpr, LabeledGraph]] = []
    next_id = 1

    def join_options(lg: LabeledGraph) -> list[tuple[int, int]]:
        options = []
        for a in range(1, w + 1):
            xs = _classes(lg, a)
            if not xs:
                continue
            for b in range(a + 1, w + 1):
                ys = _classes(lg, b)
                if ys and not any((min(x, y), max(x, y)) in lg.edges for x in xs for y in ys):
                    options.append((a, b))
        return options

    def decorate(expr: WExpr, lg: LabeledGraph) -> tuple[WExpr, LabeledGraph]:
        # a few joins and relabels on a freshly built component
        for _ in range(rng.randint(1, 4)):
            opts = join_options(lg)
            if opts and rng.random() < p_join:
                a, b = rng.choice(opts)
                pairs = {(min(x, y), max(x, y)) for x in _classes(lg, a) for y in _classes(lg, b)}
                expr = Join(a, b, expr)
                lg = LabeledGraph(lg.vertices, lg.edges | pairs, lg.labels)
            elif w >= 2 and rng.random() < 0.5:
                used = sorted(set(lg.labels.values()))
                src = rng.choice(used)
                dst = rng.choice([x for x in range(1, w + 1) if x != src])
                expr = Relabel(src, dst, expr)
                lg = LabeledGraph(lg.vertices, lg.edges,
                                  {v: dst if lab == src else lab for v, lab in lg.labels.items()})
        return expr, lg

    while next_id <= n or len(pool) > 1:
        if next_id <= n and (len(pool) < 2 or rng.random() < 0.5):
            label = rng.randint(1, w)
            lg = LabeledGraph(frozenset((next_id,)), frozenset(), {next_id: label})
            pool.append((Introduce(next_id, label), lg))
            next_id += 1
            continue
        x = pool.pop(rng.randrange(len(pool)))
        y = pool.pop(rng.randrange(len(pool)))
        lg = LabeledGraph(x[1].vertices | y[1].vertices, x[1].edges | y[1].edges,
                          {**x[1].labels, **y[1].labels})
        pool.append(decorate(Union(x[0], y[0]), lg))
    return pool[0][0]


# -- hand-written families ------------------------------------------------------

def path_expr(n: int) -> WExpr:
    """Path ``1-2-...-n``; the current end carries label 2, finished vertices label 3."""
    if n < 1:
        raise ParameterError("path needs n >= 1")
    e: WExpr = Introduce(1, 2)
    for v in range(2, n + 1):
        e = Relabel(1, 2, Relabel(2, 3, Join(1, 2, Union(e, Introduce(v, 1)))))
    return e


def clique_expr(n: int) -> WExpr:
    """Complete graph on ``1..n`` with two labels."""
    if n < 1:
        raise ParameterError("clique needs n >= 1")
    e: WExpr = Introduce(1, 2)
    for v in range(2, n + 1):
        e = Relabel(1, 2, Join(1, 2, Union(e, Introduce(v, 1))))
    return e


def star_expr(leaves: int) -> WExpr:
    """Star with center 1 and leaves ``2..leaves+1``."""
    if leaves < 0:
        raise ParameterError("star needs leaves >= 0")
    e: WExpr = Introduce(1, 1)
    for v in range(2, leaves + 2):
        e = Union(e, Introduce(v, 2))
    return Join(1, 2, e) if leaves else e


# 3-expressions of short cycles, vertex ids in cycle order
_CYCLES = {
    3: "eta(1,2,u(rho(2->1,eta(1,2,u(v(1,1),v(2,2)))),v(3,2)))",
    4: "eta(1,2,u(u(v(1,1),v(3,1)),u(v(2,2),v(4,2))))",
    5: "eta(1,2,u(rho(1->3,eta(1,3,u(eta(1,2,u(v(4,2),v(3,1))),eta(2,3,u(v(1,2),v(2,3)))))),v(5,1)))",
    6: "eta(1,2,u(v(4,1),rho(1->3,eta(1,3,u(eta(2,3,u(v(6,3),v(5,2))),"
       "eta(2,3,u(v(1,1),u(v(3,2),v(2,3)))))))))",
}


def cycle_expr(n: int) -> WExpr:
    """Cycle ``1-2-...-n-1`` for ``3 <= n <= 6`` using at most three labels."""
    if n not in _CYCLES:
        raise ParameterError("cycle expressions are available for 3 <= n <= 6")
    return parse_wexpr(_CYCLES[n])


def spider_expr(legs: int) -> WExpr:
    """Vertex 1 with a 2-path 1-2-3 and ``legs`` leaves ``4..``; the leaves are joined last.

    The final join gives vertex 1 several same-labeled neighbors at once
    while its other neighbor already has a second neighbor.
    """
    if legs < 1:
        raise ParameterError("spider needs at least one leaf")
    core: WExpr = Relabel(2, 3, Join(2, 3, Union(Join(1, 3, Union(Introduce(1, 1), Introduce(2, 3))),
                                                 Introduce(3, 2))))
    leaves: WExpr = Introduce(4, 2)
    for v in range(5, legs + 4):
        leaves = Union(leaves, Introduce(v, 2))
    return Join(1, 2, Union(core, leaves))


def hand_written_corpus() -> list[tuple[str, WExpr]]:
    """Paths, cycles, cliques, stars and spiders with at most 8 vertices and width at most 3."""
    corpus = [(f"path{n}", path_expr(n)) for n in range(1, 9)]
    corpus += [(f"cycle{n}", cycle_expr(n)) for n in range(3, 7)]
    corpus += [(f"clique{n}", clique_expr(n)) for n in range(1, 7)]
    corpus += [(f"star{m}", star_expr(m)) for m in range(1, 6)]
    corpus += [(f"spider{m}", spider_expr(m)) for m in range(1, 5)]
    return corpus


def generated_corpus(count: int, seed: int, *, n_max: int = 8, w_max: int = 3) -> list[tuple[str, WExpr]]:
    rng = random.Random(seed)
    out = []
    for idx in range(count):
        w = rng.randint(min(2, w_max), w_max)
        n = rng.randint(1, n_max)
        s = rng.getrandbits(32)
        out.append((f"random{idx}-w{w}-n{n}-s{s}", random_nice_expression(w, n, s)))
    return out
