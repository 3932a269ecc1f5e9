"""w-expressions: parsing, printing, evaluation and niceness.

Concrete syntax (whitespace-insensitive)::

    expr := "v(" INT "," INT ")"              introduce vertex with label
          | "u(" expr "," expr ")"             disjoint union
          | "rho(" INT "->" INT "," expr ")"   relabel i to j
          | "eta(" INT "," INT "," expr ")"    join labels i and j

A file may start with a header line ``w <int>`` declaring the label budget.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Mapping, Union as _U

from .errors import ContractViolation, ParseError
from .graph import Graph


@dataclass(frozen=True)
class Introduce:
    vertex: int
    label: int


@dataclass(frozen=True)
class Union:
    left: "WExpr"
    right: "WExpr"


@dataclass(frozen=True)
class Relabel:
    src: int
    dst: int
    child: "WExpr"


@dataclass(frozen=True)
class Join:
    a: int
    b: int
    child: "WExpr"


WExpr = _U[Introduce, Union, Relabel, Join]


@dataclass(frozen=True)
class LabeledGraph:
    """Vertices with arbitrary positive ids, undirected edges ``(u, v)`` with ``u < v``, one label each."""

    vertices: frozenset[int]
    edges: frozenset[tuple[int, int]]
    labels: Mapping[int, int]

    def label_class(self, label: int) -> list[int]:
        return sorted(v for v in self.vertices if self.labels[v] == label)

    def to_graph(self) -> tuple[Graph, dict[int, int]]:
        """Graph on ``1..n`` plus the id mapping (ascending ids to ``1..n``)."""
        mapping = {v: i for i, v in enumerate(sorted(self.vertices), start=1)}
        g = Graph.from_edges(len(mapping), [(mapping[a], mapping[b]) for a, b in self.edges])
        return g, mapping


@dataclass(frozen=True)
class NiceViolation:
    join: Join
    edge: tuple[int, int]

    def __str__(self) -> str:
        return f"join eta({self.join.a},{self.join.b}) re-adds edge {self.edge[0]}-{self.edge[1]}"


# -- parsing ----------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|(->)|(rho|eta|v|u)|([(),])|(\S))")


@dataclass
class _Tok:
    kind: str  # "int", "kw", "sym", "end"
    text: str
    pos: int


def _tokenize(text: str, offset: int, line: int | None) -> list[_Tok]:
    toks: list[_Tok] = []
    i = 0
    while i < len(text):
        m = _TOKEN.match(text, i)
        if m is None:  # only trailing whitespace left
            break
        start = m.start(m.lastindex)
        if m.group(1):
            toks.append(_Tok("int", m.group(1), offset + start))
        elif m.group(2) or m.group(4):
            toks.append(_Tok("sym", m.group(m.lastindex), offset + start))
        elif m.group(3):
            toks.append(_Tok("kw", m.group(3), offset + start))
        else:
            raise ParseError(f"unexpected character {m.group(5)!r}", line=line, position=offset + start)
        i = m.end()
    toks.append(_Tok("end", "", offset + len(text)))
    return toks


class _Parser:
    def __init__(self, toks: list[_Tok], w: int | None, line: int | None):
        self.toks = toks
        self.i = 0
        self.w = w
        self.line = line
        self.seen: set[int] = set()

    def error(self, msg: str, tok: _Tok) -> ParseError:
        return ParseError(msg, line=self.line, position=tok.pos)

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def take(self, kind: str, text: str | None = None) -> _Tok:
        tok = self.peek()
        if tok.kind != kind or (text is not None and tok.text != text):
            want = text if text is not None else kind
            got = tok.text or "end of input"
            raise self.error(f"expected {want!r}, found {got!r}", tok)
        self.i += 1
        return tok

    def label(self) -> int:
        tok = self.take("int")
        value = int(tok.text)
        if value < 1:
            raise self.error("labels start at 1", tok)
        if self.w is not None and value > self.w:
            raise self.error(f"label {value} exceeds declared width {self.w}", tok)
        return value

    def expr(self) -> WExpr:
        tok = self.take("kw")
        self.take("sym", "(")
        if tok.text == "v":
            vt = self.take("int")
            vid = int(vt.text)
            if vid < 1:
                raise self.error("vertex ids must be positive", vt)
            if vid in self.seen:
                raise self.error(f"duplicate vertex id {vid}", vt)
            self.seen.add(vid)
            self.take("sym", ",")
            node: WExpr = Introduce(vid, self.label())
        elif tok.text == "u":
            left = self.expr()
            self.take("sym", ",")
            node = Union(left, self.expr())
        elif tok.text == "rho":
            src = self.label()
            self.take("sym", "->")
            dst_tok = self.peek()
            dst = self.label()
            if src == dst:
                raise self.error("relabel needs two different labels", dst_tok)
            self.take("sym", ",")
            node = Relabel(src, dst, self.expr())
        else:
            a = self.label()
            self.take("sym", ",")
            b_tok = self.peek()
            b = self.label()
            if a == b:
                raise self.error("join needs two different labels", b_tok)
            self.take("sym", ",")
            node = Join(a, b, self.expr())
        self.take("sym", ")")
        return node


_HEADER = re.compile(r"\s*w\s+(\d+)\s*$")


def parse_wexpr_with_width(text: str) -> tuple[WExpr, int | None]:
    """Parse an expression, honoring an optional ``w <int>`` header line.

    Returns the expression and the declared width (None without header).
    """
    lines = text.split("\n")
    w = None
    offset = 0
    body_start = 0
    for idx, line in enumerate(lines):
        if not line.strip() or line.lstrip().startswith("#"):
            offset += len(line) + 1
            continue
        m = _HEADER.match(line)
        if m:
            w = int(m.group(1))
            if w < 1:
                raise ParseError("declared width must be at least 1", line=idx + 1)
            offset += len(line) + 1
            body_start = idx + 1
        else:
            body_start = idx
        break
    body = "\n".join(lines[body_start:])
    toks = _tokenize(body, offset, None)
    parser = _Parser(toks, w, None)
    node = parser.expr()
    tail = parser.peek()
    if tail.kind != "end":
        raise parser.error(f"trailing input {tail.text!r}", tail)
    return node, w


def parse_wexpr(text: str) -> WExpr:
    return parse_wexpr_with_width(text)[0]


def to_text(e: WExpr) -> str:
    """Canonical concrete syntax; ``parse_wexpr(to_text(e)) == e``."""
    out: list[str] = []

    def emit(node: WExpr) -> None:
        if isinstance(node, Introduce):
            out.append(f"v({node.vertex},{node.label})")
        elif isinstance(node, Union):
            out.append("u(")
            emit(node.left)
            out.append(",")
            emit(node.right)
            out.append(")")
        elif isinstance(node, Relabel):
            out.append(f"rho({node.src}->{node.dst},")
            emit(node.child)
            out.append(")")
        else:
            out.append(f"eta({node.a},{node.b},")
            emit(node.child)
            out.append(")")

    emit(e)
    return "".join(out)


def to_file_text(e: WExpr, w: int | None = None) -> str:
    return f"w {width(e) if w is None else w}\n{to_text(e)}\n"


# -- traversal and evaluation -----------------------------------------------

def children(e: WExpr) -> tuple[WExpr, ...]:
    if isinstance(e, Introduce):
        return ()
    if isinstance(e, Union):
        return (e.left, e.right)
    return (e.child,)


def postorder(e: WExpr) -> Iterator[WExpr]:
    """Subexpressions, children before parents (iterative)."""
    stack: list[tuple[WExpr, bool]] = [(e, False)]
    while stack:
        node, done = stack.pop()
        if done:
            yield node
            continue
        stack.append((node, True))
        for c in reversed(children(node)):
            stack.append((c, False))


def width(e: WExpr) -> int:
    """Largest label used by this expression."""
    best = 0
    for node in postorder(e):
        if isinstance(node, Introduce):
            best = max(best, node.label)
        elif isinstance(node, Relabel):
            best = max(best, node.src, node.dst)
        elif isinstance(node, Join):
            best = max(best, node.a, node.b)
    return best


def introduced_vertices(e: WExpr) -> list[int]:
    return [node.vertex for node in postorder(e) if isinstance(node, Introduce)]


def validate(e: WExpr, w: int | None = None) -> None:
    """Raise :class:`ContractViolation` for ASTs the parser would reject."""
    seen: set[int] = set()
    for node in postorder(e):
        labels: tuple[int, ...] = ()
        if isinstance(node, Introduce):
            if node.vertex < 1 or node.vertex in seen:
                raise ContractViolation(f"bad or duplicate vertex id {node.vertex}")
            seen.add(node.vertex)
            labels = (node.label,)
        elif isinstance(node, Relabel):
            labels = (node.src, node.dst)
        elif isinstance(node, Join):
            labels = (node.a, node.b)
        if len(labels) == 2 and labels[0] == labels[1]:
            raise ContractViolation("relabel and join need two different labels")
        for lab in labels:
            if lab < 1 or (w is not None and lab > w):
                raise ContractViolation(f"label {lab} out of range")


def _walk(e: WExpr, on_join=None) -> list[tuple[WExpr, LabeledGraph]]:
    """Evaluate every subexpression in postorder.

    ``on_join(node, child_graph, join_pairs)`` observes every join.
    """
    memo: dict[int, LabeledGraph] = {}
    result: list[tuple[WExpr, LabeledGraph]] = []
    for node in postorder(e):
        if isinstance(node, Introduce):
            lg = LabeledGraph(frozenset((node.vertex,)), frozenset(), {node.vertex: node.label})
        elif isinstance(node, Union):
            lhs, rhs = memo[id(node.left)], memo[id(node.right)]
            if lhs.vertices & rhs.vertices:
                raise ContractViolation("union of expressions sharing vertex ids")
            lg = LabeledGraph(lhs.vertices | rhs.vertices, lhs.edges | rhs.edges,
                              {**lhs.labels, **rhs.labels})
        elif isinstance(node, Relabel):
            sub = memo[id(node.child)]
            labels = {v: node.dst if lab == node.src else lab for v, lab in sub.labels.items()}
            lg = LabeledGraph(sub.vertices, sub.edges, labels)
        else:
            sub = memo[id(node.child)]
            pairs = {(min(x, y), max(x, y)) for x in sub.label_class(node.a) for y in sub.label_class(node.b)}
            if on_join is not None:
                on_join(node, sub, pairs)
            lg = LabeledGraph(sub.vertices, sub.edges | pairs, sub.labels)
        memo[id(node)] = lg
        result.append((node, lg))
    return result


def evaluate(e: WExpr) -> LabeledGraph:
    return _walk(e)[-1][1]


def subexpression_graphs(e: WExpr) -> list[tuple[WExpr, LabeledGraph]]:
    """Every subexpression with its labeled graph, children first."""
    return _walk(e)


def evaluate_graph(e: WExpr) -> tuple[Graph, dict[int, int]]:
    return evaluate(e).to_graph()


def check_nice(e: WExpr) -> NiceViolation | None:
    """None if no join re-adds an existing edge, else the first offending join."""
    found: list[NiceViolation] = []

    def on_join(node: Join, sub: LabeledGraph, pairs: set[tuple[int, int]]) -> None:
        if not found:
            old = sorted(pairs & sub.edges)
            if old:
                found.append(NiceViolation(node, old[0]))

    _walk(e, on_join)
    return found[0] if found else None


def join_new_edge_counts(e: WExpr) -> list[int]:
    """Number of edges each join adds, in evaluation order."""
    counts: list[int] = []
    _walk(e, lambda node, sub, pairs: counts.append(len(pairs - sub.edges)))
    return counts


def drop_redundant_joins(e: WExpr) -> WExpr:
    """Remove joins that add no edge; the defined graph is unchanged."""
    rebuilt: dict[int, WExpr] = {}
    graphs: dict[int, LabeledGraph] = {}
    for node in postorder(e):
        if isinstance(node, Introduce):
            new: WExpr = node
            lg = LabeledGraph(frozenset((node.vertex,)), frozenset(), {node.vertex: node.label})
        elif isinstance(node, Union):
            left, right = rebuilt[id(node.left)], rebuilt[id(node.right)]
            new = node if (left is node.left and right is node.right) else Union(left, right)
            lhs, rhs = graphs[id(node.left)], graphs[id(node.right)]
            lg = LabeledGraph(lhs.vertices | rhs.vertices, lhs.edges | rhs.edges,
                              {**lhs.labels, **rhs.labels})
        elif isinstance(node, Relabel):
            child = rebuilt[id(node.child)]
            new = node if child is node.child else Relabel(node.src, node.dst, child)
            sub = graphs[id(node.child)]
            lg = LabeledGraph(sub.vertices, sub.edges,
                              {v: node.dst if lab == node.src else lab for v, lab in sub.labels.items()})
        else:
            child = rebuilt[id(node.child)]
            sub = graphs[id(node.child)]
            pairs = {(min(x, y), max(x, y)) for x in sub.label_class(node.a) for y in sub.label_class(node.b)}
            if pairs <= sub.edges:
                new, lg = child, sub
            else:
                new = node if child is node.child else Join(node.a, node.b, child)
                lg = LabeledGraph(sub.vertices, sub.edges | pairs, sub.labels)
        rebuilt[id(node)] = new
        graphs[id(node)] = lg
    return rebuilt[id(e)]
