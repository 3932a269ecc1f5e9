"""Bounded-domain integer feasibility with implication constraints.

The search starts from the lower-bound point and only ever increases
variables. At each node it picks a violated constraint (or implication)
whose repair set is smallest and branches on which variable of that set is
the next to grow, excluding the earlier candidates in later branches. Every
solution above the current point is reached by exactly one branch, so the
search is complete and duplicate-free. This relies on all coefficients
being nonnegative, which :class:`IlpInstance` enforces.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import product
from typing import Sequence

from .errors import BudgetExceeded, ContractViolation

DEFAULT_NODE_BUDGET = 10**8

_OPS = ("<=", "=", ">=")


@dataclass(frozen=True)
class LinearComparison:
    """``sum(coef * x[var]) op rhs`` with sparse ``terms``."""

    terms: tuple[tuple[int, int], ...]
    op: str
    rhs: int
    label: str = ""

    def __post_init__(self):
        if self.op not in _OPS:
            raise ValueError(f"comparator must be one of {_OPS}, got {self.op!r}")
        merged: dict[int, int] = {}
        for var, coef in self.terms:
            merged[var] = merged.get(var, 0) + coef
        object.__setattr__(self, "terms", tuple(sorted((v, c) for v, c in merged.items() if c)))

    @classmethod
    def sum_of(cls, variables, op: str, rhs: int, label: str = "") -> "LinearComparison":
        return cls(tuple((v, 1) for v in variables), op, rhs, label)

    @classmethod
    def from_dense(cls, coeffs: Sequence[int], op: str, rhs: int, label: str = "") -> "LinearComparison":
        return cls(tuple((i, c) for i, c in enumerate(coeffs) if c), op, rhs, label)

    def dense(self, q: int) -> list[int]:
        row = [0] * q
        for var, coef in self.terms:
            row[var] = coef
        return row

    def value(self, values: Sequence[int]) -> int:
        return sum(coef * values[var] for var, coef in self.terms)

    def holds(self, values: Sequence[int]) -> bool:
        return _compare(self.value(values), self.op, self.rhs)

    def to_dict(self) -> dict:
        d = {"terms": [list(t) for t in self.terms], "op": self.op, "rhs": self.rhs}
        if self.label:
            d["label"] = self.label
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "LinearComparison":
        return cls(tuple((int(v), int(c)) for v, c in d["terms"]), d["op"], int(d["rhs"]),
                   d.get("label", ""))


@dataclass(frozen=True)
class Implication:
    antecedent: LinearComparison
    consequent: LinearComparison
    label: str = ""

    def holds(self, values: Sequence[int]) -> bool:
        return not self.antecedent.holds(values) or self.consequent.holds(values)


@dataclass(frozen=True)
class IlpInstance:
    var_count: int
    lower: tuple[int, ...]
    upper: tuple[int, ...]
    constraints: tuple[LinearComparison, ...] = ()
    implications: tuple[Implication, ...] = ()
    names: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        q = self.var_count
        object.__setattr__(self, "lower", tuple(self.lower))
        object.__setattr__(self, "upper", tuple(self.upper))
        object.__setattr__(self, "constraints", tuple(self.constraints))
        object.__setattr__(self, "implications", tuple(self.implications))
        if len(self.lower) != q or len(self.upper) != q:
            raise ValueError("bounds must have one entry per variable")
        for lo, hi in zip(self.lower, self.upper):
            if lo < 0 or lo > hi:
                raise ValueError(f"bad bounds [{lo}, {hi}]")
        for lc in self._all_comparisons():
            for var, coef in lc.terms:
                if not 0 <= var < q:
                    raise ValueError(f"variable index {var} out of range")
                if coef < 0:
                    raise ValueError("coefficients must be nonnegative")

    def _all_comparisons(self):
        yield from self.constraints
        for imp in self.implications:
            yield imp.antecedent
            yield imp.consequent

    def to_json(self) -> str:
        return json.dumps({
            "var_count": self.var_count,
            "names": list(self.names),
            "lower": list(self.lower),
            "upper": list(self.upper),
            "constraints": [c.to_dict() for c in self.constraints],
            "implications": [
                {"if": imp.antecedent.to_dict(), "then": imp.consequent.to_dict(),
                 **({"label": imp.label} if imp.label else {})}
                for imp in self.implications
            ],
        }, indent=1, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "IlpInstance":
        d = json.loads(text)
        return cls(
            d["var_count"], tuple(d["lower"]), tuple(d["upper"]),
            tuple(LinearComparison.from_dict(c) for c in d["constraints"]),
            tuple(Implication(LinearComparison.from_dict(i["if"]),
                              LinearComparison.from_dict(i["then"]), i.get("label", ""))
                  for i in d["implications"]),
            tuple(d.get("names", ())),
        )


@dataclass(frozen=True)
class IlpAssignment:
    values: tuple[int, ...]


@dataclass
class SolveStats:
    nodes: int = 0


def _compare(value: int, op: str, rhs: int) -> bool:
    if op == "<=":
        return value <= rhs
    if op == ">=":
        return value >= rhs
    return value == rhs


def check_assignment(inst: IlpInstance, a: IlpAssignment | Sequence[int]) -> bool:
    """Independent dense re-check of bounds, constraints and implications."""
    values = list(a.values if isinstance(a, IlpAssignment) else a)
    if len(values) != inst.var_count:
        raise ContractViolation("assignment length does not match the instance")
    if any(not lo <= x <= hi for x, lo, hi in zip(values, inst.lower, inst.upper)):
        return False
    q = inst.var_count
    for lc in inst.constraints:
        row = lc.dense(q)
        if not _compare(sum(r * x for r, x in zip(row, values)), lc.op, lc.rhs):
            return False
    for imp in inst.implications:
        ante, cons = imp.antecedent.dense(q), imp.consequent.dense(q)
        if _compare(sum(r * x for r, x in zip(ante, values)), imp.antecedent.op, imp.antecedent.rhs) \
                and not _compare(sum(r * x for r, x in zip(cons, values)), imp.consequent.op,
                                 imp.consequent.rhs):
            return False
    return True


class _Search:
    # Forms are the linear expressions of constraints and implication sides;
    # `val[f]` is their value at the current point.

    def __init__(self, inst: IlpInstance, max_nodes: int):
        self.inst = inst
        self.max_nodes = max_nodes
        self.stats = SolveStats()
        forms: list[LinearComparison] = list(inst.constraints)
        self.n_lin = len(forms)
        for imp in inst.implications:
            forms.append(imp.antecedent)
            forms.append(imp.consequent)
        self.forms = forms
        q = inst.var_count
        self.x = list(inst.lower)
        self.val = [lc.value(self.x) for lc in forms]
        self.incidence: list[list[tuple[int, int]]] = [[] for _ in range(q)]
        for f, lc in enumerate(forms):
            for var, coef in lc.terms:
                self.incidence[var].append((f, coef))
        # caps: (form, coef) pairs that bound how far a variable may grow
        self.caps: list[list[tuple[int, int]]] = [[] for _ in range(q)]
        for f in range(self.n_lin):
            if forms[f].op in ("<=", "="):
                for var, coef in forms[f].terms:
                    self.caps[var].append((f, coef))
        self.excluded = [False] * q

    def can_grow(self, var: int) -> bool:
        if self.excluded[var] or self.x[var] >= self.inst.upper[var]:
            return False
        val, forms = self.val, self.forms
        for f, coef in self.caps[var]:
            if val[f] + coef > forms[f].rhs:
                return False
        return True

    def grow_set(self, f: int) -> list[int]:
        return [var for var, _ in self.forms[f].terms if self.can_grow(var)]

    def repair_set(self) -> list[int] | None:
        """None when the point is feasible, [] when the node is dead."""
        forms, val = self.forms, self.val
        best: list[int] | None = None
        for f in range(self.n_lin):
            lc = forms[f]
            v = val[f]
            if v > lc.rhs and lc.op != ">=":
                return []
            if v < lc.rhs and lc.op != "<=":
                cand = self.grow_set(f)
                if not cand:
                    return []
                if best is None or len(cand) < len(best):
                    best = cand
        for idx in range(len(self.inst.implications)):
            fa = self.n_lin + 2 * idx
            fc = fa + 1
            ante, cons = forms[fa], forms[fc]
            if not _compare(val[fa], ante.op, ante.rhs) or _compare(val[fc], cons.op, cons.rhs):
                continue
            cand: list[int] = []
            if ante.op != ">=":
                cand.extend(self.grow_set(fa))
            if cons.op != "<=" and val[fc] < cons.rhs:
                cand.extend(self.grow_set(fc))
            if not cand:
                return []
            cand = sorted(set(cand))
            if best is None or len(cand) < len(best):
                best = cand
        return best

    def bump(self, var: int, delta: int) -> None:
        self.x[var] += delta
        val = self.val
        for f, coef in self.incidence[var]:
            val[f] += coef * delta

    def run(self) -> bool:
        self.stats.nodes += 1
        if self.stats.nodes > self.max_nodes:
            raise BudgetExceeded(f"ILP search exceeded {self.max_nodes} nodes")
        cand = self.repair_set()
        if cand is None:
            return True
        newly_excluded = []
        found = False
        for var in cand:
            self.bump(var, 1)
            if self.run():
                found = True
                break
            self.bump(var, -1)
            self.excluded[var] = True
            newly_excluded.append(var)
        for var in newly_excluded:
            self.excluded[var] = False
        return found


def solve_feasibility(inst: IlpInstance, max_nodes: int = DEFAULT_NODE_BUDGET,
                      stats: SolveStats | None = None) -> IlpAssignment | None:
    """Return a feasible point of ``inst`` or ``None`` if none exists.

    Raises :class:`BudgetExceeded` when the search needs more than
    ``max_nodes`` nodes; that outcome says nothing about feasibility.
    """
    search = _Search(inst, max_nodes)
    try:
        ok = search.run()
    finally:
        if stats is not None:
            stats.nodes += search.stats.nodes
    if not ok:
        return None
    result = IlpAssignment(tuple(search.x))
    if not check_assignment(inst, result):
        raise AssertionError("ILP search returned a point the checker rejects")
    return result


def brute_force_solutions(inst: IlpInstance) -> list[IlpAssignment]:
    """Every feasible point, by enumerating the whole box; for small instances only."""
    ranges = [range(lo, hi + 1) for lo, hi in zip(inst.lower, inst.upper)]
    return [IlpAssignment(values) for values in product(*ranges) if check_assignment(inst, values)]
