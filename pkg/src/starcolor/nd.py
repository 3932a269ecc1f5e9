"""Star coloring parameterized by neighborhood diversity.

Vertices are grouped into types (``N(u) - {v} == N(v) - {u}``). For every
set ``A`` of types there is one integer variable ``n_A``: the number of
colors used in every type of ``A`` and in no other type. Types are indexed
``0..t-1`` and a set of types is the bitmask of its members, so the ILP
variable of ``A`` has index ``mask(A)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from pathlib import Path

from .errors import ContractViolation, InternalConsistencyError
from .graph import Coloring, Graph, is_star_coloring, same_type
from .ilp import (DEFAULT_NODE_BUDGET, IlpAssignment, IlpInstance, Implication,
                  LinearComparison, SolveStats, check_assignment, solve_feasibility)

CLIQUE = "clique"
INDEPENDENT = "independent"


@dataclass(frozen=True)
class TypePartition:
    types: tuple[tuple[int, ...], ...]
    kinds: tuple[str, ...]
    adjacency: frozenset[tuple[int, int]]  # symmetric, both orders stored

    @property
    def t(self) -> int:
        return len(self.types)

    def adjacent(self, i: int, j: int) -> bool:
        return (i, j) in self.adjacency

    def neighbors(self, i: int) -> list[int]:
        return [j for j in range(self.t) if (i, j) in self.adjacency]

    def type_of(self) -> dict[int, int]:
        return {v: i for i, members in enumerate(self.types) for v in members}


@dataclass(frozen=True)
class ColorBlockLayout:
    """Consecutive color intervals per subset mask and the colors of each type."""

    blocks: dict[int, tuple[int, ...]]
    type_colors: tuple[tuple[int, ...], ...]


def compute_type_partition(g: Graph) -> TypePartition:
    """Coarsest partition of ``V(g)`` into neighborhood-diversity types."""
    reps: list[int] = []
    groups: list[list[int]] = []
    for v in g.vertices:
        for idx, r in enumerate(reps):
            if same_type(g, v, r):
                groups[idx].append(v)
                break
        else:
            reps.append(v)
            groups.append([v])
    kinds = []
    for members in groups:
        if len(members) == 1 or g.has_edge(members[0], members[1]):
            kinds.append(CLIQUE)
        else:
            kinds.append(INDEPENDENT)
    adjacency = set()
    for i, j in permutations(range(len(groups)), 2):
        if g.has_edge(groups[i][0], groups[j][0]):
            adjacency.add((i, j))
    return TypePartition(tuple(tuple(m) for m in groups), tuple(kinds), frozenset(adjacency))


def _is_independent_mask(p: TypePartition, mask: int) -> bool:
    members = [i for i in range(p.t) if mask >> i & 1]
    return not any(p.adjacent(a, b) for a in members for b in members if a < b)


def _containing(allowed: list[int], required: int) -> list[int]:
    return [m for m in allowed if m & required == required]


def _base_instance(p: TypePartition, k: int):
    q = 1 << p.t
    allowed = [m for m in range(q) if _is_independent_mask(p, m)]
    upper = [0] * q
    for m in allowed:
        upper[m] = k
    constraints = [LinearComparison.sum_of(allowed, "<=", k, "color-budget")]
    for i in range(p.t):
        with_i = _containing(allowed, 1 << i)
        size = len(p.types[i])
        if p.kinds[i] == CLIQUE:
            constraints.append(LinearComparison.sum_of(with_i, "=", size, f"clique-type-{i}"))
        else:
            constraints.append(LinearComparison.sum_of(with_i, ">=", 1, f"independent-type-{i}-low"))
            constraints.append(LinearComparison.sum_of(with_i, "<=", min(k, size),
                                                       f"independent-type-{i}-high"))
    names = tuple("n{" + ",".join(str(i + 1) for i in range(p.t) if m >> i & 1) + "}"
                  for m in range(q))
    return q, allowed, upper, constraints, names


def build_ilp(p: TypePartition, k: int) -> IlpInstance:
    """ILP whose feasibility is equivalent to star ``k``-colorability."""
    q, allowed, upper, constraints, names = _base_instance(p, k)
    t = p.t
    implications: list[Implication] = []
    seen = set()

    # four distinct types forming a path i1-i2-i3-i4 at type level
    for i2 in range(t):
        for i1 in p.neighbors(i2):
            for i3 in p.neighbors(i2):
                if i3 == i1:
                    continue
                for i4 in p.neighbors(i3):
                    if i4 in (i1, i2, i3):
                        continue
                    key = ("path4", frozenset((i1, i3)), frozenset((i2, i4)))
                    if key in seen:
                        continue
                    seen.add(key)
                    implications.append(Implication(
                        LinearComparison.sum_of(_containing(allowed, 1 << i1 | 1 << i3), ">=", 1),
                        LinearComparison.sum_of(_containing(allowed, 1 << i2 | 1 << i4), "=", 0),
                        f"path4:{i1}-{i2}-{i3}-{i4}"))

    # an independent type reusing a color, with two distinct neighbor types
    for i1 in range(t):
        if p.kinds[i1] != INDEPENDENT:
            continue
        size = len(p.types[i1])
        nbrs = p.neighbors(i1)
        for i2 in nbrs:
            for i3 in nbrs:
                if i3 == i2:
                    continue
                key = ("path3", i1, frozenset((i2, i3)))
                if key in seen:
                    continue
                seen.add(key)
                implications.append(Implication(
                    LinearComparison.sum_of(_containing(allowed, 1 << i1), "<=", size - 1),
                    LinearComparison.sum_of(_containing(allowed, 1 << i2 | 1 << i3), "=", 0),
                    f"path3:{i1}|{i2},{i3}"))

    # two adjacent independent types cannot both reuse a color
    for i1, i2 in sorted(p.adjacency):
        if p.kinds[i1] != INDEPENDENT or p.kinds[i2] != INDEPENDENT:
            continue
        implications.append(Implication(
            LinearComparison.sum_of(_containing(allowed, 1 << i1), "<=", len(p.types[i1]) - 1),
            LinearComparison.sum_of(_containing(allowed, 1 << i2), "=", len(p.types[i2])),
            f"path2:{i1}->{i2}"))

    return IlpInstance(q, (0,) * q, tuple(upper), tuple(constraints), tuple(implications), names)


def build_proper_ilp(p: TypePartition, k: int) -> IlpInstance:
    """Same variables and type constraints, without the path implications.

    Feasible iff the graph has a proper ``k``-coloring.
    """
    q, _allowed, upper, constraints, names = _base_instance(p, k)
    return IlpInstance(q, (0,) * q, tuple(upper), tuple(constraints), (), names)


def color_layout(p: TypePartition, a: IlpAssignment) -> ColorBlockLayout:
    blocks: dict[int, tuple[int, ...]] = {}
    nxt = 1
    for mask, count in enumerate(a.values):
        blocks[mask] = tuple(range(nxt, nxt + count))
        nxt += count
    type_colors = tuple(
        tuple(c for mask in range(len(a.values)) if mask >> i & 1 for c in blocks[mask])
        for i in range(p.t))
    return ColorBlockLayout(blocks, type_colors)


def coloring_from_assignment(p: TypePartition, a: IlpAssignment, k: int) -> Coloring:
    """Colors by consecutive blocks per subset, round-robin inside independent types (no checks)."""
    layout = color_layout(p, a)
    colors: dict[int, int] = {}
    for i, members in enumerate(p.types):
        palette = layout.type_colors[i]
        if not palette:
            raise ContractViolation(f"type {i + 1} receives no colors")
        if p.kinds[i] == CLIQUE and len(palette) != len(members):
            raise ContractViolation(f"clique type {i + 1} needs {len(members)} colors")
        # round-robin; for a clique type this is a bijection
        for pos, v in enumerate(members):
            colors[v] = palette[pos % len(palette)]
    return Coloring(k, colors)


def reconstruct_coloring(g: Graph, p: TypePartition, a: IlpAssignment,
                         k: int | None = None) -> Coloring:
    """Turn a feasible assignment of :func:`build_ilp` into a star coloring."""
    if k is None:
        k = max(1, sum(a.values))
    if not check_assignment(build_ilp(p, k), a):
        raise ContractViolation("assignment does not satisfy the ILP")
    return coloring_from_assignment(p, a, k)


def induced_assignment(p: TypePartition, c: Coloring) -> IlpAssignment:
    """Count, for every set of types, the colors used exactly on those types."""
    used = [frozenset(c[v] for v in members) for members in p.types]
    counts = [0] * (1 << p.t)
    for color in range(1, c.k + 1):
        mask = sum(1 << i for i in range(p.t) if color in used[i])
        counts[mask] += 1
    return IlpAssignment(tuple(counts))


def solve_nd(g: Graph, k: int, *, max_nodes: int = DEFAULT_NODE_BUDGET,
             stats: SolveStats | None = None, dump_ilp: str | Path | None = None) -> Coloring | None:
    """Star coloring of ``g`` with at most ``k`` colors via the type ILP, or None."""
    p = compute_type_partition(g)
    inst = build_ilp(p, k)
    if dump_ilp is not None:
        Path(dump_ilp).write_text(inst.to_json())
    a = solve_feasibility(inst, max_nodes=max_nodes, stats=stats)
    if a is None:
        return None
    coloring = coloring_from_assignment(p, a, max(k, 1))
    verdict = is_star_coloring(g, coloring)
    if not verdict.ok:
        raise InternalConsistencyError(
            f"reconstructed coloring fails verification, witness {verdict.witness}")
    return coloring


def nd_proper_coloring(g: Graph, k: int, *, max_nodes: int = DEFAULT_NODE_BUDGET) -> Coloring | None:
    p = compute_type_partition(g)
    a = solve_feasibility(build_proper_ilp(p, k), max_nodes=max_nodes)
    if a is None:
        return None
    coloring = coloring_from_assignment(p, a, max(k, 1))
    for u, v in g.edges:
        if coloring[u] == coloring[v]:
            raise InternalConsistencyError(f"proper reconstruction colors edge {u}-{v} twice")
    return coloring


def nd_proper_feasible(g: Graph, k: int, *, max_nodes: int = DEFAULT_NODE_BUDGET) -> bool:
    return nd_proper_coloring(g, k, max_nodes=max_nodes) is not None
