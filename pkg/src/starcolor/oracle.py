"""Brute-force exact star coloring; the ground truth for every cross-check."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .errors import BudgetExceeded, ContractViolation
from .graph import Coloring, Graph, is_star_coloring, violation_at

DEFAULT_MAX_VERTICES = 14


@dataclass(frozen=True)
class OracleResult:
    feasible: bool
    coloring: Coloring | None
    states_explored: int


def search_order(g: Graph, first: list[int] | None = None) -> list[int]:
    """Vertex order that keeps each new vertex attached to the placed ones."""
    order = list(first or [])
    placed = set(order)
    links = {v: len(g.adj[v] & placed) for v in g.vertices}
    while len(order) < g.n:
        v = max((v for v in g.vertices if v not in placed),
                key=lambda u: (links[u], g.degree(u), -u))
        order.append(v)
        placed.add(v)
        for u in g.adj[v]:
            links[u] += 1
    return order


def oracle_feasible(g: Graph, k: int, *, fixed: Mapping[int, int] | None = None,
                    conflict: Graph | None = None,
                    max_vertices: int = DEFAULT_MAX_VERTICES) -> OracleResult:
    """Decide whether ``g`` has a star coloring with at most ``k`` colors.

    ``fixed`` optionally pins colors of some vertices; the search then only
    looks for extensions of it, and color symmetry breaking is switched off
    for the colors it uses. ``conflict`` is an optional graph on the same
    vertices whose edges must also join differently colored vertices.
    """
    if k < 0:
        raise ContractViolation("k must be nonnegative")
    if g.n > max_vertices:
        raise BudgetExceeded(f"oracle refuses n={g.n} > {max_vertices}")
    fixed = dict(fixed or {})
    for v, c in fixed.items():
        if not 1 <= c <= k:
            return OracleResult(False, None, 0)
    if g.n == 0:
        return OracleResult(True, Coloring(k, {}), 1)
    if k == 0:
        return OracleResult(False, None, 1)

    if conflict is not None and conflict.n != g.n:
        raise ContractViolation("conflict graph must have the same vertex count")
    colors: dict[int, int] = {}

    def bad(v: int) -> bool:
        if conflict is not None and any(colors.get(u) == colors[v] for u in conflict.adj[v]):
            return True
        return violation_at(g, colors, v)

    for v in sorted(fixed):
        colors[v] = fixed[v]
        if bad(v):
            return OracleResult(False, None, 1)
    order = [v for v in search_order(g, sorted(fixed)) if v not in fixed]
    base = max(fixed.values(), default=0)
    explored = 0

    def extend(idx: int, top: int) -> bool:
        nonlocal explored
        explored += 1
        if idx == len(order):
            return True
        v = order[idx]
        # colors above `top` are interchangeable; try only the first unused one
        for c in range(1, min(top + 1, k) + 1):
            colors[v] = c
            if not bad(v) and extend(idx + 1, max(top, c)):
                return True
        del colors[v]
        return False

    if not extend(0, base):
        return OracleResult(False, None, explored)
    result = Coloring(k, colors)
    assert is_star_coloring(g, result).ok
    assert conflict is None or all(colors[a] != colors[b] for a, b in conflict.edges)
    return OracleResult(True, result, explored)


def oracle_chromatic(g: Graph, *, max_vertices: int = DEFAULT_MAX_VERTICES) -> tuple[int, Coloring]:
    """Star chromatic number of ``g`` with a witness coloring."""
    if g.n > max_vertices:
        raise BudgetExceeded(f"oracle refuses n={g.n} > {max_vertices}")
    k = 0
    while True:
        res = oracle_feasible(g, k, max_vertices=max_vertices)
        if res.feasible:
            return k, res.coloring
        k += 1


def proper_coloring_feasible(g: Graph, k: int) -> bool:
    """Plain proper-coloring brute force (no star condition)."""
    if g.n == 0:
        return True
    if k == 0:
        return False
    order = search_order(g)
    colors: dict[int, int] = {}

    def extend(idx: int, top: int) -> bool:
        if idx == len(order):
            return True
        v = order[idx]
        for c in range(1, min(top + 1, k) + 1):
            if all(colors.get(u) != c for u in g.adj[v]):
                colors[v] = c
                if extend(idx + 1, max(top, c)):
                    return True
                del colors[v]
        return False

    return extend(0, 0)
