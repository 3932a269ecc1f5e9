"""Star coloring over a nice w-expression by dynamic programming.

A table entry summarizes a partial coloring of the subexpression's graph
by, for every label ``l`` and colors ``q, q'``:

* ``N[l, q]``: number of ``l``-labeled vertices colored ``q``, capped at 2;
* ``B[l, m, q, q']``: whether some ``l``-labeled ``q``-vertex has a
  ``q'``-neighbor labeled ``m``;
* ``A[l, {m, m'}, q, q']``: whether some ``l``-labeled ``q``-vertex has two
  distinct ``q'``-neighbors, labeled ``m`` and ``m'``.

``A`` and ``B`` are presence flags rather than capped counts. Capped counts
of "vertices with a neighbor in some label class" cannot be maintained
under relabeling (two label classes merging makes the count depend on the
overlap), while every decision the join filter makes only asks whether
such a vertex exists.

A state is packed into four ints ``(n_pos, n_two, b, a)``: bit ``l*k + q``
of ``n_pos`` / ``n_two`` says ``N[l, q] >= 1`` / ``N[l, q] == 2``.
Labels and colors are 0-based internally and 1-based at the API.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from pathlib import Path
from typing import Iterable, Mapping

from .errors import BudgetExceeded, InternalConsistencyError, ParameterError
from .graph import Coloring, is_star_coloring
from .wexpr import (Introduce, Join, LabeledGraph, Relabel, Union, WExpr, check_nice, evaluate, postorder,
                    width)

PackedState = tuple[int, int, int, int]

# join filters: VERBATIM restricts helper labels to those outside the joined pair and
# checks paths through a third vertex only when both sides hold one vertex of the color;
# EXTENDED checks every shape of a new 2-colored path on four vertices
VERBATIM = "paper"
EXTENDED = "extended"
JOIN_CASE_RANGES = (VERBATIM, EXTENDED)
DEFAULT_MAX_STATES = 2_000_000


def _bits(x: int) -> Iterable[int]:
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


@dataclass(frozen=True)
class StateLayout:
    """Bit positions of the state variables for ``w`` labels and ``k`` colors."""

    w: int
    k: int

    @property
    def pairs(self) -> list[tuple[int, int]]:
        return list(combinations_with_replacement(range(self.w), 2))

    def pair_index(self, m: int, m2: int) -> int:
        if m > m2:
            m, m2 = m2, m
        # position of (m, m2) in combinations_with_replacement order
        return m * self.w - m * (m - 1) // 2 + (m2 - m)

    def n_bit(self, l: int, q: int) -> int:
        return l * self.k + q

    def b_bit(self, l: int, m: int, q: int, q2: int) -> int:
        return ((l * self.w + m) * self.k + q) * self.k + q2

    def a_bit(self, l: int, m: int, m2: int, q: int, q2: int) -> int:
        p = self.pair_index(m, m2)
        return ((l * len(self.pairs) + p) * self.k + q) * self.k + q2

    def row_mask(self) -> int:
        return (1 << self.k) - 1


@dataclass(frozen=True)
class DpState:
    """Readable form of a packed state; labels and colors are 1-based."""

    N: dict[tuple[int, int], int]
    B: frozenset[tuple[int, int, int, int]]
    A: frozenset[tuple[int, int, int, int, int]]

    def to_dict(self) -> dict:
        return {"N": sorted([l, q, c] for (l, q), c in self.N.items()),
                "B": sorted(list(t) for t in self.B),
                "A": sorted(list(t) for t in self.A)}


def decode_state(layout: StateLayout, s: PackedState) -> DpState:
    n_pos, n_two, b, a = s
    w, k = layout.w, layout.k
    N = {}
    for l in range(w):
        for q in range(k):
            bit = layout.n_bit(l, q)
            if n_pos >> bit & 1:
                N[(l + 1, q + 1)] = 2 if n_two >> bit & 1 else 1
    B = set()
    A = set()
    for l in range(w):
        for q in range(k):
            for q2 in range(k):
                for m in range(w):
                    if b >> layout.b_bit(l, m, q, q2) & 1:
                        B.add((l + 1, m + 1, q + 1, q2 + 1))
                for m, m2 in layout.pairs:
                    if a >> layout.a_bit(l, m, m2, q, q2) & 1:
                        A.add((l + 1, m + 1, m2 + 1, q + 1, q2 + 1))
    return DpState(N, frozenset(B), frozenset(A))


def semantic_state(lg: LabeledGraph, colors: Mapping[int, int], w: int, k: int) -> PackedState:
    """The state a (labeled graph, total coloring) pair should map to, by direct counting."""
    layout = StateLayout(w, k)
    count: dict[int, int] = {}
    adj: dict[int, list[int]] = {v: [] for v in lg.vertices}
    for x, y in lg.edges:
        adj[x].append(y)
        adj[y].append(x)
    b = a = 0
    for v in lg.vertices:
        l, q = lg.labels[v] - 1, colors[v] - 1
        bit = layout.n_bit(l, q)
        count[bit] = count.get(bit, 0) + 1
        nbrs = sorted(adj[v])
        for u in nbrs:
            b |= 1 << layout.b_bit(l, lg.labels[u] - 1, q, colors[u] - 1)
        for idx, u in enumerate(nbrs):
            for u2 in nbrs[idx + 1:]:
                if colors[u] == colors[u2]:
                    a |= 1 << layout.a_bit(l, lg.labels[u] - 1, lg.labels[u2] - 1, q, colors[u] - 1)
    n_pos = n_two = 0
    for bit, c in count.items():
        n_pos |= 1 << bit
        if c >= 2:
            n_two |= 1 << bit
    return (n_pos, n_two, b, a)


# -- transitions ---------------------------------------------------------------

def dp_introduce(layout: StateLayout, label: int) -> dict[PackedState, int]:
    """One state per color; the value is the color (1-based), kept as provenance."""
    l = label - 1
    return {(1 << layout.n_bit(l, q), 0, 0, 0): q + 1 for q in range(layout.k)}


def union_states(s1: PackedState, s2: PackedState) -> PackedState:
    p1, t1, b1, a1 = s1
    p2, t2, b2, a2 = s2
    return (p1 | p2, t1 | t2 | (p1 & p2), b1 | b2, a1 | a2)


def dp_union(t1: Mapping[PackedState, object], t2: Mapping[PackedState, object],
             max_states: int = DEFAULT_MAX_STATES) -> dict[PackedState, tuple[PackedState, PackedState]]:
    out: dict[PackedState, tuple[PackedState, PackedState]] = {}
    for s1 in t1:
        for s2 in t2:
            s = union_states(s1, s2)
            if s not in out:
                out[s] = (s1, s2)
                if len(out) > max_states:
                    raise BudgetExceeded(f"DP table exceeded {max_states} states")
    return out


class _RelabelMap:
    """Bit permutations (non-injective) for relabeling ``src`` to ``dst``."""

    def __init__(self, layout: StateLayout, src: int, dst: int):
        w, k = layout.w, layout.k
        r = [dst if l == src else l for l in range(w)]
        self.layout = layout
        self.src, self.dst = src, dst
        self.b_map: dict[int, int] = {}
        self.a_map: dict[int, int] = {}
        for l in range(w):
            for q in range(k):
                for q2 in range(k):
                    for m in range(w):
                        self.b_map[layout.b_bit(l, m, q, q2)] = layout.b_bit(r[l], r[m], q, q2)
                    for m, m2 in layout.pairs:
                        self.a_map[layout.a_bit(l, m, m2, q, q2)] = layout.a_bit(r[l], r[m], r[m2], q, q2)
        self.memo_b: dict[int, int] = {}
        self.memo_a: dict[int, int] = {}

    @staticmethod
    def _apply(x: int, table: dict[int, int], memo: dict[int, int]) -> int:
        got = memo.get(x)
        if got is None:
            got = 0
            for bit in _bits(x):
                got |= 1 << table[bit]
            memo[x] = got
        return got

    def __call__(self, s: PackedState) -> PackedState:
        n_pos, n_two, b, a = s
        k = self.layout.k
        mask = self.layout.row_mask()
        so, do = self.src * k, self.dst * k
        sp, st = n_pos >> so & mask, n_two >> so & mask
        dp_, dt = n_pos >> do & mask, n_two >> do & mask
        clear = ~((mask << so) | (mask << do))
        new_pos = (n_pos & clear) | ((sp | dp_) << do)
        new_two = (n_two & clear) | ((st | dt | (sp & dp_)) << do)
        return (new_pos, new_two, self._apply(b, self.b_map, self.memo_b), self._apply(a, self.a_map, self.memo_a))


def dp_relabel(layout: StateLayout, src: int, dst: int, table: Mapping[PackedState, object]
               ) -> dict[PackedState, PackedState]:
    if src == dst:
        raise ParameterError("relabel needs two different labels")
    f = _RelabelMap(layout, src - 1, dst - 1)
    out: dict[PackedState, PackedState] = {}
    for s in table:
        out.setdefault(f(s), s)
    return out


class _JoinRule:
    """Filter and update for joining labels ``i`` and ``j`` (0-based)."""

    def __init__(self, layout: StateLayout, i: int, j: int, case_range: str):
        if case_range not in JOIN_CASE_RANGES:
            raise ParameterError(f"join case range must be one of {JOIN_CASE_RANGES}")
        self.layout = layout
        self.i, self.j = i, j
        self.verbatim = case_range == VERBATIM
        w, k = layout.w, layout.k
        helpers = [a for a in range(w) if a not in (i, j)] if self.verbatim else list(range(w))
        # has_nb[(x, q, q2)]: B bits "x-labeled q-vertex with q2-neighbor labeled helper"
        self.has_nb: dict[tuple[int, int, int], int] = {}
        # a_through[(x, q, q2)]: A bits "helper-labeled q-vertex with q2-neighbors labeled x and helper"
        self.a_through: dict[tuple[int, int, int], int] = {}
        for x in (i, j):
            for q in range(k):
                for q2 in range(k):
                    mb = 0
                    ma = 0
                    for a in helpers:
                        mb |= 1 << layout.b_bit(x, a, q, q2)
                        for b in helpers:
                            ma |= 1 << layout.a_bit(a, x, b, q, q2)
                    self.has_nb[(x, q, q2)] = mb
                    self.a_through[(x, q, q2)] = ma

    def creates_bicolored_path(self, s: PackedState, q: int, q2: int) -> bool:
        """Whether joining adds a 2-colored P4 on the ``q``-vertices of ``i`` and ``q2``-vertices of ``j``."""
        layout, i, j = self.layout, self.i, self.j
        n_pos, n_two, b, a = s
        i_two = n_two >> layout.n_bit(i, q) & 1
        j_two = n_two >> layout.n_bit(j, q2) & 1
        i_nb = bool(b & self.has_nb[(i, q, q2)])
        j_nb = bool(b & self.has_nb[(j, q2, q)])
        # through a third vertex: a q2-vertex adjacent to an i-labeled q-vertex
        # with another q-neighbor, or symmetrically
        through = bool(a & self.a_through[(i, q2, q)]) or bool(a & self.a_through[(j, q, q2)])
        if i_two and j_two:
            return True
        if self.verbatim:
            if i_two and not j_two and i_nb:
                return True
            if j_two and not i_two and j_nb:
                return True
            if not i_two and not j_two and (i_nb and j_nb or through):
                return True
            return False
        return (i_two and i_nb) or (j_two and j_nb) or (i_nb and j_nb) or through

    def __call__(self, s: PackedState) -> PackedState | None:
        layout, i, j = self.layout, self.i, self.j
        k, w = layout.k, layout.w
        n_pos, n_two, b, a = s
        mask = layout.row_mask()
        ri = n_pos >> (i * k) & mask
        rj = n_pos >> (j * k) & mask
        if ri & rj:
            return None  # some color on both sides: improper
        new_b, new_a = b, a
        for q in _bits(ri):
            for q2 in _bits(rj):
                if self.creates_bicolored_path(s, q, q2):
                    return None
                new_b |= 1 << layout.b_bit(i, j, q, q2)
                new_b |= 1 << layout.b_bit(j, i, q2, q)
                for m in range(w):
                    if m != j and b >> layout.b_bit(i, m, q, q2) & 1:
                        new_a |= 1 << layout.a_bit(i, j, m, q, q2)
                    if m != i and b >> layout.b_bit(j, m, q2, q) & 1:
                        new_a |= 1 << layout.a_bit(j, i, m, q2, q)
                if n_two >> layout.n_bit(j, q2) & 1:
                    new_a |= 1 << layout.a_bit(i, j, j, q, q2)
                if n_two >> layout.n_bit(i, q) & 1:
                    new_a |= 1 << layout.a_bit(j, i, i, q2, q)
        return (n_pos, n_two, new_b, new_a)


def dp_join(layout: StateLayout, i: int, j: int, table: Mapping[PackedState, object],
            case_range: str = EXTENDED) -> dict[PackedState, PackedState]:
    if i == j:
        raise ParameterError("join needs two different labels")
    rule = _JoinRule(layout, i - 1, j - 1, case_range)
    out: dict[PackedState, PackedState] = {}
    for s in table:
        t = rule(s)
        if t is not None:
            out.setdefault(t, s)
    return out


# -- driver --------------------------------------------------------------------

@dataclass
class DpStats:
    nodes: int = 0
    max_table: int = 0
    total_states: int = 0


@dataclass
class CwResult:
    feasible: bool
    coloring: Coloring | None = None
    width: int = 0
    stats: DpStats = field(default_factory=DpStats)


def _table_lines(layout: StateLayout, table: Iterable[PackedState]) -> list[str]:
    return sorted(json.dumps(decode_state(layout, s).to_dict(), sort_keys=True) for s in table)


def run_tables(e: WExpr, k: int, *, w: int | None = None, case_range: str = EXTENDED,
               max_states: int = DEFAULT_MAX_STATES, keep: bool = False,
               stats: DpStats | None = None, dump_tables: str | Path | None = None
               ) -> tuple[dict[PackedState, object], dict[int, dict[PackedState, object]]]:
    """Compute the DP table of every node; return the root table and, if ``keep``, all tables by ``id``."""
    if w is None:
        w = width(e)
    layout = StateLayout(w, k)
    tables: dict[int, dict[PackedState, object]] = {}
    remaining_uses: dict[int, int] = {}
    dump_dir = Path(dump_tables) if dump_tables is not None else None
    if dump_dir is not None:
        dump_dir.mkdir(parents=True, exist_ok=True)
    for index, node in enumerate(postorder(e)):
        if isinstance(node, Introduce):
            table: dict = dp_introduce(layout, node.label)
            kind = "introduce"
            kids: tuple = ()
        elif isinstance(node, Union):
            table = dp_union(tables[id(node.left)], tables[id(node.right)], max_states)
            kind = "union"
            kids = (node.left, node.right)
        elif isinstance(node, Relabel):
            table = dp_relabel(layout, node.src, node.dst, tables[id(node.child)])
            kind = "relabel"
            kids = (node.child,)
        else:
            table = dp_join(layout, node.a, node.b, tables[id(node.child)], case_range)
            kind = "join"
            kids = (node.child,)
        if len(table) > max_states:
            raise BudgetExceeded(f"DP table exceeded {max_states} states")
        if stats is not None:
            stats.nodes += 1
            stats.max_table = max(stats.max_table, len(table))
            stats.total_states += len(table)
        if dump_dir is not None:
            lines = _table_lines(layout, table)
            (dump_dir / f"node{index:04d}_{kind}.jsonl").write_text("".join(x + "\n" for x in lines))
        tables[id(node)] = table
        if not keep:
            for kid in kids:
                del tables[id(kid)]
    root = tables[id(e)]
    return root, tables


def _replay(e: WExpr, state: PackedState, tables: Mapping[int, Mapping[PackedState, object]]) -> dict[int, int]:
    colors: dict[int, int] = {}
    stack: list[tuple[WExpr, PackedState]] = [(e, state)]
    while stack:
        node, s = stack.pop()
        prov = tables[id(node)][s]
        if isinstance(node, Introduce):
            colors[node.vertex] = prov
        elif isinstance(node, Union):
            stack.append((node.left, prov[0]))
            stack.append((node.right, prov[1]))
        else:
            stack.append((node.child, prov))
    return colors


def solve_cw(e: WExpr, k: int, *, witness: bool = False, join_case_range: str = EXTENDED,
             max_states: int = DEFAULT_MAX_STATES, dump_tables: str | Path | None = None,
             w: int | None = None) -> CwResult:
    """Decide star ``k``-colorability of the graph defined by a nice expression.

    With ``witness=True`` a coloring keyed by the expression's vertex ids is
    rebuilt from per-state provenance and verified.
    """
    violation = check_nice(e)
    if violation is not None:
        raise ParameterError(f"expression is not nice: {violation}")
    if k < 0:
        raise ParameterError("k must be nonnegative")
    width_used = width(e) if w is None else w
    stats = DpStats()
    if k == 0:
        return CwResult(False, None, width_used, stats)
    root, tables = run_tables(e, k, w=width_used, case_range=join_case_range, max_states=max_states,
                              keep=witness, stats=stats, dump_tables=dump_tables)
    if not root:
        return CwResult(False, None, width_used, stats)
    coloring = None
    if witness:
        state = min(root)
        colors = _replay(e, state, tables)
        lg = evaluate(e)
        g, mapping = lg.to_graph()
        verdict = is_star_coloring(g, Coloring(k, {mapping[v]: c for v, c in colors.items()}))
        if not verdict.ok:
            raise InternalConsistencyError(f"DP witness fails verification: {verdict.witness}")
        if semantic_state(lg, colors, width_used, k) != state:
            raise InternalConsistencyError("DP witness does not realize its root state")
        coloring = Coloring(k, colors)
    return CwResult(True, coloring, width_used, stats)
