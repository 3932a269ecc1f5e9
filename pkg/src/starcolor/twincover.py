"""Star coloring parameterized by twin cover.

Pipeline per guessed coloring ``f`` of the cover ``X``:

1. merge all cliques of a clique type whose ``X``-neighbors repeat a color,
2. drop all but one largest clique of every other multi-clique type,
3. merge two clique types that share a neighbor ``u`` when one of them has a
   second neighbor colored like ``u``,
4. guess which cover colors each surviving clique reuses, then decide the
   rest with a proper coloring of the residual graph in fresh colors.

Edges added in steps 1 and 3 only say "these vertices must get different
colors"; they are kept in a separate *conflict graph*. Properness is checked
on the conflict graph, bicolored paths on the original graph. Checking paths
on the conflict graph would reject valid colorings, because an added edge
can close a 2-colored path that does not exist in the input.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterator, Mapping

from .errors import ContractViolation, InternalConsistencyError, ParameterError
from .graph import (Coloring, Graph, are_true_twins, connected_components, induced_subgraph,
                    is_star_coloring, max_clique_size, violation_at)
from .nd import nd_proper_coloring, nd_proper_feasible


@dataclass(frozen=True)
class TwinCover:
    X: tuple[int, ...]

    @property
    def t(self) -> int:
        return len(self.X)


@dataclass(frozen=True)
class CliqueTypeMap:
    """Cliques of ``G - X`` grouped by their neighborhood in ``X``.

    ``cliques[mask]`` lists the cliques whose ``X``-neighborhood is
    ``{X[i] : bit i of mask}``, each as a sorted vertex tuple, ordered by
    smallest vertex.
    """

    X: tuple[int, ...]
    cliques: dict[int, list[tuple[int, ...]]]

    def members(self, mask: int) -> tuple[int, ...]:
        return tuple(v for K in self.cliques.get(mask, ()) for v in K)

    def cover_vertices(self, mask: int) -> tuple[int, ...]:
        return tuple(x for i, x in enumerate(self.X) if mask >> i & 1)


@dataclass(frozen=True)
class WorkGraph:
    """A graph under surgery.

    ``graph`` keeps the original vertex ids and holds the conflict edges;
    ``alive`` is the set of vertices not removed by clique deletion.
    """

    graph: Graph
    alive: frozenset[int]

    @classmethod
    def of(cls, g: Graph) -> "WorkGraph":
        return cls(g, frozenset(g.vertices))


@dataclass
class SurgeryRecord:
    added_edges: list[tuple[int, int]] = field(default_factory=list)
    # (deleted clique, surviving representative clique, type mask)
    deleted_cliques: list[tuple[tuple[int, ...], tuple[int, ...], int]] = field(default_factory=list)

    def __add__(self, other: "SurgeryRecord") -> "SurgeryRecord":
        return SurgeryRecord(self.added_edges + other.added_edges,
                             self.deleted_cliques + other.deleted_cliques)

    def to_dict(self) -> dict:
        return {"added_edges": [list(e) for e in self.added_edges],
                "deleted_cliques": [{"clique": list(K), "representative": list(R), "type": mask}
                                    for K, R, mask in self.deleted_cliques]}


@dataclass
class TcStats:
    twin_cover: tuple[int, ...] = ()
    x_colorings: int = 0
    guesses: int = 0
    residual_checks: int = 0


# -- twin cover -----------------------------------------------------------------

def non_twin_edges(g: Graph) -> list[tuple[int, int]]:
    return [(u, v) for u, v in g.sorted_edges() if not are_true_twins(g, u, v)]


def is_twin_cover(g: Graph, X) -> bool:
    Xs = set(X)
    return all(u in Xs or v in Xs for u, v in non_twin_edges(g))


def compute_twin_cover(g: Graph, t_max: int) -> TwinCover | None:
    """A minimum twin cover if one of size ``<= t_max`` exists.

    Minimum vertex cover, by a bounded search tree, of the graph formed by
    the edges whose endpoints are not true twins.
    """
    edges = non_twin_edges(g)

    def cover(remaining: list[tuple[int, int]], budget: int, chosen: tuple[int, ...]):
        if not remaining:
            return chosen
        if budget == 0:
            return None
        u, v = remaining[0]
        for pick in (u, v):
            rest = [e for e in remaining if pick not in e]
            found = cover(rest, budget - 1, chosen + (pick,))
            if found is not None:
                return found
        return None

    for size in range(t_max + 1):
        found = cover(edges, size, ())
        if found is not None:
            return TwinCover(tuple(sorted(found)))
    return None


# -- clique types -----------------------------------------------------------------

def _x_mask(g: Graph, X: tuple[int, ...], v: int) -> int:
    return sum(1 << i for i, x in enumerate(X) if g.has_edge(v, x))


def clique_types(w: WorkGraph, X: tuple[int, ...]) -> CliqueTypeMap:
    """Group the live non-cover vertices of ``w`` into clique types."""
    Xs = set(X)
    groups: dict[int, list[int]] = {}
    for v in sorted(w.alive - Xs):
        groups.setdefault(_x_mask(w.graph, X, v), []).append(v)
    cliques: dict[int, list[tuple[int, ...]]] = {}
    for mask, vs in sorted(groups.items()):
        comps = connected_components(w.graph, vs)
        for comp in comps:
            if any(not w.graph.has_edge(a, b) for a, b in combinations(comp, 2)):
                raise ContractViolation(f"component {comp} of G - X is not a clique")
        cliques[mask] = sorted((tuple(c) for c in comps), key=lambda K: K[0])
    return CliqueTypeMap(tuple(X), cliques)


def build_clique_types(g: Graph, X) -> CliqueTypeMap:
    """Clique types of ``g`` for the twin cover ``X``, with validation."""
    X = tuple(sorted(X))
    Xs = set(X)
    for comp in connected_components(g, set(g.vertices) - Xs):
        if any(not g.has_edge(a, b) for a, b in combinations(comp, 2)):
            raise ContractViolation(f"component {comp} of G - X is not a clique; X is no twin cover")
        if len({_x_mask(g, X, v) for v in comp}) > 1:
            raise ContractViolation(f"component {comp} has non-uniform neighborhood in X")
    return clique_types(WorkGraph.of(g), X)


# -- surgery ------------------------------------------------------------------

def _complete(w: WorkGraph, vertices) -> tuple[WorkGraph, list[tuple[int, int]]]:
    new = [(a, b) for a, b in combinations(sorted(vertices), 2) if not w.graph.has_edge(a, b)]
    if not new:
        return w, []
    return WorkGraph(w.graph.with_edges(new), w.alive), new


def _repeats_color(f: Mapping[int, int], vertices) -> bool:
    cols = [f[x] for x in vertices]
    return len(cols) != len(set(cols))


def apply_claim1(w: WorkGraph, f: Mapping[int, int], types: CliqueTypeMap) -> tuple[WorkGraph, SurgeryRecord]:
    """Merge the cliques of every multi-clique type whose cover neighbors repeat a color."""
    record = SurgeryRecord()
    X = types.X
    while True:
        for mask, cl in types.cliques.items():
            if len(cl) >= 2 and _repeats_color(f, types.cover_vertices(mask)):
                w, new = _complete(w, types.members(mask))
                record.added_edges.extend(new)
                types = clique_types(w, X)
                break
        else:
            return w, record


def apply_rr1(w: WorkGraph, types: CliqueTypeMap,
              f: Mapping[int, int] | None = None) -> tuple[WorkGraph, SurgeryRecord]:
    """Keep one largest clique (smallest vertex id on ties) of every multi-clique type."""
    record = SurgeryRecord()
    alive = set(w.alive)
    for mask, cl in types.cliques.items():
        if len(cl) < 2:
            continue
        if f is not None and _repeats_color(f, types.cover_vertices(mask)):
            raise ContractViolation(f"type {mask} still qualifies for clique merging")
        keep = max(cl, key=lambda K: (len(K), -K[0]))
        for K in cl:
            if K is not keep:
                record.deleted_cliques.append((K, keep, mask))
                alive.difference_update(K)
    if not record.deleted_cliques:
        return w, record
    sub = Graph.from_edges(w.graph.n, [(a, b) for a, b in w.graph.edges if a in alive and b in alive])
    return WorkGraph(sub, frozenset(alive)), record


def claim2_pairs(f: Mapping[int, int], types: CliqueTypeMap) -> list[tuple[int, int]]:
    """Ordered type pairs (A, B) with ``u`` in both neighborhoods and ``v`` in B's, same color."""
    pairs = []
    masks = sorted(m for m, cl in types.cliques.items() if cl)
    for A in masks:
        for B in masks:
            if A == B:
                continue
            shared = types.cover_vertices(A & B)
            inB = types.cover_vertices(B)
            if any(u != v and f[u] == f[v] for u in shared for v in inB):
                pairs.append((A, B))
    return pairs


def apply_claim2(w: WorkGraph, f: Mapping[int, int], types: CliqueTypeMap) -> tuple[WorkGraph, SurgeryRecord]:
    """Make two clique types mutually exclusive in color when they qualify."""
    record = SurgeryRecord()
    while True:
        changed = False
        for A, B in claim2_pairs(f, types):
            w, new = _complete(w, types.members(A) + types.members(B))
            if new:
                record.added_edges.extend(new)
                changed = True
        if not changed:
            return w, record
        types = clique_types(w, types.X)


def surgery(g: Graph, X, f: Mapping[int, int]) -> tuple[WorkGraph, CliqueTypeMap, SurgeryRecord]:
    """Merge types whose cover neighbors repeat a color, delete surplus cliques, then merge clashing type pairs."""
    X = tuple(sorted(X))
    w = WorkGraph.of(g)
    types = clique_types(w, X)
    w, rec1 = apply_claim1(w, f, types)
    types = clique_types(w, X)
    w, rec2 = apply_rr1(w, types, f)
    types = clique_types(w, X)
    w, rec3 = apply_claim2(w, f, types)
    types = clique_types(w, X)
    return w, types, rec1 + rec2 + rec3


# -- guessing -----------------------------------------------------------------

def enumerate_x_colorings(X, k: int) -> Iterator[dict[int, int]]:
    """One coloring per set partition of ``X`` into at most ``k`` blocks.

    Blocks are numbered by first occurrence in sorted order (restricted
    growth strings), so colors used are exactly ``1..t'``.
    """
    X = sorted(X)
    limit = min(len(X), k)
    if not X:
        yield {}
        return
    if limit == 0:
        return
    cols = [0] * len(X)

    def rec(i: int, top: int):
        if i == len(X):
            yield dict(zip(X, cols))
            return
        for c in range(1, min(top + 1, limit) + 1):
            cols[i] = c
            yield from rec(i + 1, max(top, c))

    yield from rec(0, 0)


def _is_cluster(g: Graph) -> bool:
    return all(
        all(g.has_edge(a, b) for a, b in combinations(comp, 2))
        for comp in connected_components(g))


def _residual_coloring(b: Graph, colors_available: int, stats: TcStats | None,
                       cross_check: bool) -> Coloring | None:
    if stats is not None:
        stats.residual_checks += 1
    if b.n == 0:
        return Coloring(max(colors_available, 1), {})
    if colors_available <= 0:
        return None
    if _is_cluster(b):
        fits = max_clique_size(b) <= colors_available
        if cross_check and fits != nd_proper_feasible(b, colors_available):
            raise InternalConsistencyError("clique-size test and type ILP disagree on a cluster graph")
        if not fits:
            return None
        colors = {}
        for comp in connected_components(b):
            for pos, v in enumerate(comp, start=1):
                colors[v] = pos
        return Coloring(colors_available, colors)
    return nd_proper_coloring(b, colors_available)


def _fits(g: Graph, conflict: Graph, colors: dict[int, int], v: int) -> bool:
    c = colors[v]
    if any(colors.get(u) == c for u in conflict.adj[v]):
        return False
    return not violation_at(g, colors, v)


def solve_for_fixed_f(g: Graph, w: WorkGraph, f: Mapping[int, int], types: CliqueTypeMap, k: int, *,
                      stats: TcStats | None = None, cross_check: bool = False) -> Coloring | None:
    """Extend ``f`` to a star coloring of the surgered graph, or None.

    ``g`` is the original graph, used for bicolored-path checks; ``w`` holds
    the conflict edges and the surviving vertices.
    """
    if any(len(cl) > 1 for cl in types.cliques.values()):
        raise ContractViolation("every clique type must hold at most one clique")
    t_prime = len(set(f.values()))
    if t_prime > k:
        return None
    conflict = w.graph
    colors: dict[int, int] = {}
    for x in sorted(f):
        colors[x] = f[x]
        if not _fits(g, conflict, colors, x):
            return None
    order = [(mask, cl[0]) for mask, cl in sorted(types.cliques.items()) if cl]

    def guess(idx: int) -> Coloring | None:
        if idx == len(order):
            return finish()
        mask, K = order[idx]
        forbidden = {f[x] for x in types.cover_vertices(mask)}
        palette = [c for c in range(1, t_prime + 1) if c not in forbidden]
        for size in range(0, min(len(K), len(palette)) + 1):
            for D in combinations(palette, size):
                if stats is not None:
                    stats.guesses += 1
                placed = []
                ok = True
                for v, c in zip(K, D):
                    colors[v] = c
                    placed.append(v)
                    if not _fits(g, conflict, colors, v):
                        ok = False
                        break
                if ok:
                    found = guess(idx + 1)
                    if found is not None:
                        return found
                for v in placed:
                    del colors[v]
        return None

    def finish() -> Coloring | None:
        rest = sorted(v for v in w.alive if v not in colors)
        sub, mapping = induced_subgraph(conflict, rest)
        res = _residual_coloring(sub, k - t_prime, stats, cross_check)
        if res is None:
            return None
        h = dict(colors)
        for old, new in mapping.items():
            h[old] = t_prime + res[new]
        return Coloring(k, h)

    h = guess(0)
    if h is None:
        return None
    _verify_on_live(g, w, h)
    return h


def _verify_on_live(g: Graph, w: WorkGraph, h: Coloring) -> None:
    sub, mapping = induced_subgraph(g, w.alive)
    local = Coloring(h.k, {mapping[v]: c for v, c in h.colors.items() if v in mapping})
    verdict = is_star_coloring(sub, local)
    inv = {new: old for old, new in mapping.items()}
    if not verdict.ok:
        raise InternalConsistencyError(
            f"assembled coloring fails on the input graph: {[inv[x] for x in verdict.witness]}")
    for a, b in w.graph.edges:
        if h[a] == h[b]:
            raise InternalConsistencyError(f"assembled coloring repeats a color on conflict edge {a}-{b}")


def lift_coloring(record: SurgeryRecord, h: Coloring) -> Coloring:
    """Color deleted cliques with colors of their surviving representatives."""
    colors = dict(h.colors)
    for K, rep, _mask in reversed(record.deleted_cliques):
        palette = sorted(colors[v] for v in rep)
        if len(palette) < len(K):
            raise ContractViolation("deleted clique larger than its representative")
        for v, c in zip(K, palette):
            colors[v] = c
    return Coloring(h.k, colors)


def solve_tc(g: Graph, k: int, t_max: int = 3, *, X=None, stats: TcStats | None = None,
             cross_check: bool = False) -> Coloring | None:
    """Star coloring with at most ``k`` colors via a twin cover, or None.

    ``X`` may be supplied; otherwise a minimum twin cover of size at most
    ``t_max`` is computed and :class:`ParameterError` raised if none exists.
    """
    if X is None:
        cover = compute_twin_cover(g, t_max)
        if cover is None:
            raise ParameterError(f"no twin cover of size <= {t_max}")
        X = cover.X
    else:
        X = tuple(sorted(set(X)))
        if not is_twin_cover(g, X):
            raise ParameterError(f"{list(X)} is not a twin cover")
    if stats is not None:
        stats.twin_cover = tuple(X)
    if g.n == 0:
        return Coloring(max(k, 1), {})
    for f in enumerate_x_colorings(X, k):
        if stats is not None:
            stats.x_colorings += 1
        w, types, record = surgery(g, X, f)
        h = solve_for_fixed_f(g, w, f, types, k, stats=stats, cross_check=cross_check)
        if h is None:
            continue
        result = lift_coloring(record, h)
        verdict = is_star_coloring(g, result)
        if not verdict.ok:
            raise InternalConsistencyError(f"lifted coloring fails verification: {verdict.witness}")
        return result
    return None
