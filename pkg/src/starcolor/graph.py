"""Simple undirected graphs, colorings and star-coloring verification.

Vertices are the integers ``1..n`` (DIMACS convention). Colors are the
integers ``1..k``. Both :class:`Graph` and :class:`Coloring` are immutable.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping

from .errors import ContractViolation, ParseError


@dataclass(frozen=True)
class Graph:
    n: int
    edges: frozenset[tuple[int, int]]
    adj: tuple[frozenset[int], ...] = field(repr=False, compare=False)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        if n < 0:
            raise ValueError(f"negative vertex count {n}")
        norm = set()
        nbrs: list[set[int]] = [set() for _ in range(n + 1)]
        for u, v in edges:
            if not (1 <= u <= n and 1 <= v <= n):
                raise ValueError(f"edge ({u}, {v}) out of range 1..{n}")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if u > v:
                u, v = v, u
            norm.add((u, v))
            nbrs[u].add(v)
            nbrs[v].add(u)
        return cls(n, frozenset(norm), tuple(frozenset(s) for s in nbrs))

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls.from_edges(n, ())

    @property
    def vertices(self) -> range:
        return range(1, self.n + 1)

    @property
    def m(self) -> int:
        return len(self.edges)

    def neighbors(self, v: int) -> frozenset[int]:
        return self.adj[v]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def closed_neighborhood(self, v: int) -> frozenset[int]:
        return self.adj[v] | {v}

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def with_edges(self, extra: Iterable[tuple[int, int]]) -> "Graph":
        return Graph.from_edges(self.n, list(self.edges) + list(extra))

    def __str__(self) -> str:
        return f"Graph(n={self.n}, edges={self.sorted_edges()})"


@dataclass(frozen=True)
class Coloring:
    """A total or partial map from vertices to colors in ``1..k``."""

    k: int
    colors: Mapping[int, int]

    def __post_init__(self):
        frozen = dict(self.colors)
        for v, c in frozen.items():
            if not 1 <= c <= self.k:
                raise ValueError(f"color {c} of vertex {v} outside 1..{self.k}")
        object.__setattr__(self, "colors", MappingProxyType(frozen))

    @classmethod
    def from_sequence(cls, seq: Iterable[int], k: int | None = None) -> "Coloring":
        """Build a coloring of vertices 1, 2, ... from a list of colors."""
        seq = list(seq)
        if k is None:
            k = max(seq, default=0)
        return cls(k, {v: c for v, c in enumerate(seq, start=1)})

    def __getitem__(self, v: int) -> int:
        return self.colors[v]

    def get(self, v: int) -> int | None:
        return self.colors.get(v)

    def is_assigned(self, v: int) -> bool:
        return v in self.colors

    def is_total(self, g: Graph) -> bool:
        return all(v in self.colors for v in g.vertices)

    def used_colors(self) -> set[int]:
        return set(self.colors.values())

    def as_dict(self) -> dict[int, int]:
        return dict(self.colors)

    def to_json(self) -> str:
        return json.dumps(
            {"k": self.k, "colors": {str(v): c for v, c in sorted(self.colors.items())}},
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, text: str) -> "Coloring":
        try:
            data = json.loads(text)
            k = int(data["k"])
            colors = {int(v): int(c) for v, c in data["colors"].items()}
            return cls(k, colors)
        except (ValueError, KeyError, TypeError, AttributeError) as exc:
            raise ParseError(f"bad coloring JSON: {exc}") from exc


@dataclass(frozen=True)
class StarVerdict:
    ok: bool
    witness: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.ok != (self.witness is None):
            raise ValueError("ok must hold exactly when no witness is given")

    @property
    def kind(self) -> str | None:
        if self.witness is None:
            return None
        return "edge" if len(self.witness) == 2 else "path"

    def to_dict(self) -> dict:
        return {"ok": self.ok, "kind": self.kind,
                "witness": list(self.witness) if self.witness else None}


# -- DIMACS I/O ---------------------------------------------------------------

def parse_dimacs(text: str | bytes) -> Graph:
    """Parse a DIMACS ``.col`` graph.

    Duplicate edge lines are accepted and collapse to one edge.
    """
    if isinstance(text, bytes):
        text = text.decode("ascii", errors="replace")
    n = None
    edges: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        tag = parts[0]
        if tag == "p":
            if n is not None:
                raise ParseError("second problem line", line=lineno)
            if len(parts) != 4 or parts[1] not in ("edge", "col"):
                raise ParseError(f"malformed header {line!r}", line=lineno)
            try:
                n, _declared_m = int(parts[2]), int(parts[3])
            except ValueError:
                raise ParseError(f"malformed header {line!r}", line=lineno) from None
            if n < 0:
                raise ParseError("negative vertex count", line=lineno)
        elif tag == "e":
            if n is None:
                raise ParseError("edge line before problem line", line=lineno)
            if len(parts) != 3:
                raise ParseError(f"malformed edge line {line!r}", line=lineno)
            try:
                u, v = int(parts[1]), int(parts[2])
            except ValueError:
                raise ParseError(f"malformed edge line {line!r}", line=lineno) from None
            if not (1 <= u <= n and 1 <= v <= n):
                raise ParseError(f"vertex index out of range 1..{n} in {line!r}", line=lineno)
            if u == v:
                raise ParseError(f"self-loop at vertex {u}", line=lineno)
            edges.append((u, v))
        else:
            raise ParseError(f"unknown line type {tag!r}", line=lineno)
    if n is None:
        raise ParseError("missing problem line 'p edge <n> <m>'")
    return Graph.from_edges(n, edges)


def to_dimacs(g: Graph, comment: str | None = None) -> str:
    lines = []
    if comment:
        lines.extend(f"c {c}" for c in comment.splitlines())
    lines.append(f"p edge {g.n} {g.m}")
    lines.extend(f"e {u} {v}" for u, v in g.sorted_edges())
    return "\n".join(lines) + "\n"


# -- verification ---------------------------------------------------------------

def _improper_edge(g: Graph, colors: Mapping[int, int]) -> tuple[int, int] | None:
    for u, v in g.sorted_edges():
        cu = colors.get(u)
        if cu is not None and cu == colors.get(v):
            return (u, v)
    return None


def _bicolored_path(g: Graph, colors: Mapping[int, int]) -> tuple[int, int, int, int] | None:
    # Enumerate the middle edge u2-u3 in both orientations.
    for a, b in g.sorted_edges():
        for u2, u3 in ((a, b), (b, a)):
            c2, c3 = colors.get(u2), colors.get(u3)
            if c2 is None or c3 is None:
                continue
            ends1 = [u1 for u1 in sorted(g.adj[u2]) if u1 != u3 and colors.get(u1) == c3]
            if not ends1:
                continue
            ends4 = [u4 for u4 in sorted(g.adj[u3]) if u4 != u2 and colors.get(u4) == c2]
            if ends4:
                return (ends1[0], u2, u3, ends4[0])
    return None


def _verdict(g: Graph, colors: Mapping[int, int]) -> StarVerdict:
    bad = _improper_edge(g, colors)
    if bad is not None:
        return StarVerdict(False, bad)
    path = _bicolored_path(g, colors)
    if path is not None:
        return StarVerdict(False, path)
    return StarVerdict(True)


def is_star_coloring(g: Graph, c: Coloring) -> StarVerdict:
    """Check that ``c`` is proper and leaves no path on four vertices 2-colored."""
    if not c.is_total(g):
        missing = [v for v in g.vertices if not c.is_assigned(v)]
        raise ContractViolation(f"coloring is partial; unassigned vertices {missing[:10]}")
    return _verdict(g, c.colors)


def partial_star_check(g: Graph, c: Coloring | Mapping[int, int]) -> StarVerdict:
    """Like :func:`is_star_coloring` but only looks at the colored vertices."""
    colors = c.colors if isinstance(c, Coloring) else c
    return _verdict(g, colors)


def violation_at(g: Graph, colors: Mapping[int, int], v: int) -> bool:
    """True iff some improper edge or bicolored P4 among colored vertices uses ``v``.

    Assumes no violation existed before ``v`` was colored.
    """
    cv = colors[v]
    adj = g.adj
    for a in adj[v]:
        if colors.get(a) == cv:
            return True
    for a in adj[v]:
        ca = colors.get(a)
        if ca is None:
            continue
        # v as an endpoint: v - a - b - c
        for b in adj[a]:
            if b != v and colors.get(b) == cv:
                for c in adj[b]:
                    if c != a and colors.get(c) == ca:
                        return True
        # v as an inner vertex: a - v - b - c with color(a) == color(b)
        for b in adj[v]:
            if b != a and colors.get(b) == ca:
                for c in adj[b]:
                    if c != v and colors.get(c) == cv:
                        return True
    return False


def is_proper(g: Graph, c: Coloring | Mapping[int, int]) -> bool:
    colors = c.colors if isinstance(c, Coloring) else c
    return _improper_edge(g, colors) is None


def two_class_star_forest_check(g: Graph, c: Coloring) -> bool:
    """True iff every pair of color classes induces a disjoint union of stars."""
    if not c.is_total(g):
        raise ContractViolation("coloring is partial")
    if _improper_edge(g, c.colors) is not None:
        raise ContractViolation("coloring is not proper")
    classes: dict[int, list[int]] = {}
    for v in g.vertices:
        classes.setdefault(c[v], []).append(v)
    for a, b in combinations(sorted(classes), 2):
        keep = set(classes[a]) | set(classes[b])
        for comp in _components(g, keep):
            centers = sum(1 for v in comp if len(g.adj[v] & keep) > 1)
            if centers > 1:
                return False
    return True


def _components(g: Graph, keep: set[int]) -> Iterator[list[int]]:
    seen: set[int] = set()
    for s in sorted(keep):
        if s in seen:
            continue
        seen.add(s)
        stack, comp = [s], []
        while stack:
            x = stack.pop()
            comp.append(x)
            for y in g.adj[x]:
                if y in keep and y not in seen:
                    seen.add(y)
                    stack.append(y)
        yield comp


def connected_components(g: Graph, keep: Iterable[int] | None = None) -> list[list[int]]:
    keep = set(g.vertices) if keep is None else set(keep)
    return [sorted(comp) for comp in _components(g, keep)]


# -- twins and subgraphs -------------------------------------------------------

def are_true_twins(g: Graph, u: int, v: int) -> bool:
    if u == v:
        raise ContractViolation("twin test needs two distinct vertices")
    return g.closed_neighborhood(u) == g.closed_neighborhood(v)


def same_type(g: Graph, u: int, v: int) -> bool:
    """Neighborhood-diversity equivalence: ``N(u) - {v} == N(v) - {u}``."""
    return g.adj[u] - {v} == g.adj[v] - {u}


def induced_subgraph(g: Graph, keep: Iterable[int]) -> tuple[Graph, dict[int, int]]:
    """Return ``G[keep]`` relabeled to ``1..|keep|`` and the old-to-new id map.

    New ids follow the ascending order of the old ones.
    """
    kept = sorted(set(keep))
    for v in kept:
        if not 1 <= v <= g.n:
            raise ContractViolation(f"vertex {v} not in graph")
    mapping = {old: new for new, old in enumerate(kept, start=1)}
    edges = [(mapping[u], mapping[v]) for u, v in g.edges if u in mapping and v in mapping]
    return Graph.from_edges(len(kept), edges), mapping


def max_clique_size(g: Graph, within: Iterable[int] | None = None) -> int:
    """Size of a largest clique, by simple branch and bound (desk-scale only)."""
    cand = set(g.vertices) if within is None else set(within)
    best = 0

    def expand(size: int, pool: set[int]) -> None:
        nonlocal best
        if not pool:
            best = max(best, size)
            return
        if size + len(pool) <= best:
            return
        for v in sorted(pool):
            if size + len(pool) <= best:
                return
            expand(size + 1, pool & g.adj[v])
            pool = pool - {v}

    expand(0, cand)
    return best


# -- a few named graphs used throughout tests and the CLI ---------------------

def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(1, n)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    return Graph.from_edges(n, [(i, i + 1) for i in range(1, n)] + [(n, 1)])


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, combinations(range(1, n + 1), 2))


def star_graph(leaves: int) -> Graph:
    """``K_{1,leaves}`` with center 1."""
    return Graph.from_edges(leaves + 1, [(1, v) for v in range(2, leaves + 2)])
