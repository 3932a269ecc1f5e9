"""Cross-check every solver against the brute-force oracle.

Each check walks a corpus, compares a solver's answer with the oracle and
records disagreements. A disagreement on a graph is shrunk by deleting
vertices while it persists and written out as a reproducer.
"""

from __future__ import annotations

import itertools
import json
import random
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from .cwdp import EXTENDED, solve_cw
from .generate import (atlas_graphs, cluster_plus_cover, generated_corpus, hand_written_corpus, random_coloring,
                       random_ilp)
from .graph import (Coloring, Graph, induced_subgraph, is_proper, is_star_coloring, to_dimacs,
                    two_class_star_forest_check)
from .ilp import brute_force_solutions, check_assignment, solve_feasibility
from .nd import build_ilp, compute_type_partition, induced_assignment, solve_nd
from .oracle import oracle_feasible
from .twincover import compute_twin_cover, enumerate_x_colorings, solve_tc, surgery
from .wexpr import evaluate, to_file_text

Solver = Callable[[Graph, int], Coloring | None]


@dataclass
class Disagreement:
    check: str
    detail: dict
    reproducer: str | None = None

    def to_dict(self) -> dict:
        return {"check": self.check, "detail": self.detail, "reproducer": self.reproducer}


@dataclass
class CrosscheckReport:
    counts: dict[str, int] = field(default_factory=dict)
    disagreements: list[Disagreement] = field(default_factory=list)
    timings: dict[str, float] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.disagreements

    def to_dict(self, with_timings: bool = True) -> dict:
        d = {"ok": self.ok, "counts": dict(sorted(self.counts.items())),
             "disagreements": sorted((x.to_dict() for x in self.disagreements),
                                     key=lambda x: json.dumps(x, sort_keys=True))}
        if with_timings:
            d["timings"] = {key: round(v, 3) for key, v in sorted(self.timings.items())}
        return d


def shrink_graph(g: Graph, still_bad: Callable[[Graph], bool]) -> Graph:
    """Delete vertices one at a time while ``still_bad`` keeps holding."""
    changed = True
    while changed and g.n > 0:
        changed = False
        for v in g.vertices:
            smaller, _ = induced_subgraph(g, [u for u in g.vertices if u != v])
            if still_bad(smaller):
                g = smaller
                changed = True
                break
    return g


class _Recorder:
    def __init__(self, report: CrosscheckReport, out_dir: Path | None, limit: int = 5):
        self.report = report
        self.out_dir = out_dir
        self.limit = limit
        self.per_check: dict[str, int] = {}

    def graph(self, check: str, g: Graph, k: int, detail: dict,
              still_bad: Callable[[Graph], bool] | None = None) -> None:
        if still_bad is not None:
            g = shrink_graph(g, still_bad)
        detail = {"n": g.n, "edges": [list(e) for e in g.sorted_edges()], "k": k, **detail}
        self._add(check, detail, to_dimacs(g, f"{check} disagreement, k={k}"), "col")

    def other(self, check: str, detail: dict, text: str, suffix: str) -> None:
        self._add(check, detail, text, suffix)

    def _add(self, check: str, detail: dict, text: str, suffix: str) -> None:
        idx = self.per_check.get(check, 0)
        self.per_check[check] = idx + 1
        path = None
        if self.out_dir is not None and idx < self.limit:
            self.out_dir.mkdir(parents=True, exist_ok=True)
            target = self.out_dir / f"{check}-{idx}.{suffix}"
            target.write_text(text)
            path = str(target)
        self.report.disagreements.append(Disagreement(check, detail, path))


def _feasible(solver: Solver, g: Graph, k: int) -> tuple[bool, bool]:
    """(feasible, witness verified) for a solver returning an optional coloring."""
    c = solver(g, k)
    if c is None:
        return False, True
    return True, is_star_coloring(g, c).ok


def check_verifier(rec: _Recorder, graphs: list[Graph], k_max: int, rng: random.Random, trials: int) -> int:
    checked = 0

    def compare(g: Graph, c: Coloring) -> None:
        nonlocal checked
        checked += 1
        forest = is_proper(g, c) and two_class_star_forest_check(g, c)
        if is_star_coloring(g, c).ok != forest:
            rec.graph("verifier", g, c.k, {"coloring": c.as_dict()})

    for g in graphs:
        if g.n > 5:
            continue
        for k in range(1, min(k_max, 3) + 1):
            for seq in itertools.product(range(1, k + 1), repeat=g.n):
                compare(g, Coloring.from_sequence(seq, k))
    for _ in range(trials):
        g = _random_graph(rng, 10)
        compare(g, random_coloring(g, rng.randint(1, 4), rng))
    return checked


def _random_graph(rng: random.Random, n_max: int) -> Graph:
    n = rng.randint(1, n_max)
    p = rng.random()
    return Graph.from_edges(n, [(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1) if rng.random() < p])


def check_solver(rec: _Recorder, name: str, solver: Solver, graphs: list[Graph], k_max: int) -> int:
    checked = 0
    for g in graphs:
        for k in range(1, k_max + 1):
            checked += 1
            want = oracle_feasible(g, k).feasible
            got, verified = _feasible(solver, g, k)
            if got != want or not verified:
                def still_bad(h: Graph, k=k) -> bool:
                    w = oracle_feasible(h, k).feasible
                    gt, ok = _feasible(solver, h, k)
                    return gt != w or not ok
                rec.graph(name, g, k, {"oracle": want, "solver": got, "witness_verified": verified}, still_bad)
    return checked


def check_nd_witnesses(rec: _Recorder, graphs: list[Graph], k_max: int) -> int:
    """Oracle witnesses induce feasible ILP points."""
    checked = 0
    for g in graphs:
        p = compute_type_partition(g)
        for k in range(1, k_max + 1):
            res = oracle_feasible(g, k)
            if not res.feasible:
                continue
            checked += 1
            if not check_assignment(build_ilp(p, k), induced_assignment(p, res.coloring)):
                rec.graph("nd-induced-assignment", g, k, {"coloring": res.coloring.as_dict()})
    return checked


def check_surgery(rec: _Recorder, trials: int, rng: random.Random, n_max: int = 7) -> int:
    checked = 0
    while checked < trials:
        t = rng.randint(1, 3)
        g = cluster_plus_cover(t, rng.randint(1, 4), rng.randint(1, 3), rng.getrandbits(32))
        if g.n > max(n_max, t + 1):
            continue
        X = compute_twin_cover(g, 3).X
        f = rng.choice(list(enumerate_x_colorings(X, 4)))
        k = rng.randint(len(set(f.values())), 4)
        checked += 1
        before = oracle_feasible(g, k, fixed=f).feasible
        w, _types, record = surgery(g, X, f)
        sub, mapping = induced_subgraph(g, w.alive)
        conflict, _ = induced_subgraph(w.graph, w.alive)
        after = oracle_feasible(sub, k, fixed={mapping[x]: c for x, c in f.items()}, conflict=conflict).feasible
        if before != after:
            rec.graph("surgery", g, k, {"cover": list(X), "f": {str(x): c for x, c in f.items()},
                                         "before": before, "after": after, "surgery": record.to_dict()})
    return checked


def check_cw(rec: _Recorder, trials: int, seed: int, k_max: int, n_max: int,
             case_range: str = EXTENDED) -> int:
    checked = 0
    corpus = hand_written_corpus() + generated_corpus(trials, seed, n_max=max(n_max, 1))
    for name, e in corpus:
        g, _ = evaluate(e).to_graph()
        if g.n > n_max:
            continue
        for k in range(1, k_max + 1):
            checked += 1
            want = oracle_feasible(g, k).feasible
            try:
                got = solve_cw(e, k, join_case_range=case_range, witness=True).feasible
                err = None
            except Exception as exc:  # a failed witness replay is a disagreement too
                got, err = None, f"{type(exc).__name__}: {exc}"
            if got != want:
                rec.other("cliquewidth", {"expression": name, "k": k, "oracle": want, "solver": got,
                                          "error": err}, to_file_text(e), "cwx")
    return checked


def check_ilp(rec: _Recorder, trials: int, rng: random.Random) -> int:
    for idx in range(trials):
        inst = random_ilp(rng)
        want = bool(brute_force_solutions(inst))
        got = solve_feasibility(inst) is not None
        if got != want:
            rec.other("ilp", {"trial": idx, "enumeration": want, "solver": got}, inst.to_json(), "json")
    return trials


def run_crosscheck(n_max: int = 7, k_max: int = 4, trials: int = 200, seed: int = 0, *,
                   reproducer_dir: str | Path | None = None,
                   solvers: dict[str, Solver] | None = None) -> CrosscheckReport:
    """Run all checks; ``solvers`` may replace the nd / twincover solvers (fault injection)."""
    report = CrosscheckReport()
    rec = _Recorder(report, Path(reproducer_dir) if reproducer_dir is not None else None)
    solvers = solvers or {}
    nd_solver = solvers.get("nd", lambda g, k: solve_nd(g, k))
    tc_solver = solvers.get("twincover", lambda g, k: solve_tc(g, k, 3))
    graphs = atlas_graphs(n_max) if n_max > 0 else []
    tc_graphs = [g for g in graphs if compute_twin_cover(g, 3) is not None]
    rng = random.Random(seed)

    def timed(name: str, fn: Callable[[], int]) -> None:
        start = time.perf_counter()
        report.counts[name] = fn()
        report.timings[name] = time.perf_counter() - start

    if n_max <= 0:
        return report
    timed("verifier", lambda: check_verifier(rec, graphs, k_max, random.Random(rng.getrandbits(64)), trials))
    timed("nd", lambda: check_solver(rec, "nd", nd_solver, graphs, k_max))
    timed("nd-induced-assignment", lambda: check_nd_witnesses(rec, graphs, k_max))
    timed("twincover", lambda: check_solver(rec, "twincover", tc_solver, tc_graphs, k_max))
    timed("surgery", lambda: check_surgery(rec, trials, random.Random(rng.getrandbits(64)), n_max))
    timed("cliquewidth", lambda: check_cw(rec, trials, rng.getrandbits(64), k_max, max(n_max, 1)))
    timed("ilp", lambda: check_ilp(rec, trials, random.Random(rng.getrandbits(64))))
    return report
