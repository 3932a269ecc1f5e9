from __future__ import annotations

from starcolor.crosscheck import run_crosscheck, shrink_graph
from starcolor.graph import complete_graph, parse_dimacs
from starcolor.ilp import IlpInstance, solve_feasibility
from starcolor.nd import build_ilp, coloring_from_assignment, compute_type_partition


def test_nothing_to_check():
    report = run_crosscheck(n_max=0)
    assert report.ok and report.counts == {}


def test_small_run_agrees():
    report = run_crosscheck(n_max=4, k_max=3, trials=20, seed=1)
    assert report.ok, report.to_dict()
    assert set(report.counts) == {"verifier", "nd", "nd-induced-assignment", "twincover", "surgery",
                                  "cliquewidth", "ilp"}
    assert report.to_dict(with_timings=False) == run_crosscheck(n_max=4, k_max=3, trials=20, seed=1).to_dict(
        with_timings=False)


def _nd_without_path3(g, k):
    # a deliberately broken solver: drops the implications for reused colors in independent types
    p = compute_type_partition(g)
    inst = build_ilp(p, k)
    kept = tuple(i for i in inst.implications if not i.label.startswith("path3"))
    inst = IlpInstance(inst.var_count, inst.lower, inst.upper, inst.constraints, kept, inst.names)
    a = solve_feasibility(inst)
    return None if a is None else coloring_from_assignment(p, a, max(k, 1))


def test_fault_injection_is_caught(tmp_path):
    report = run_crosscheck(n_max=5, k_max=3, trials=5, seed=0, reproducer_dir=tmp_path,
                            solvers={"nd": _nd_without_path3})
    bad = [d for d in report.disagreements if d.check == "nd"]
    assert bad and not report.ok
    first = bad[0]
    assert first.reproducer is not None
    g = parse_dimacs(open(first.reproducer).read())
    assert g.n == first.detail["n"] and first.detail["witness_verified"] is False
    # shrinking leaves a minimal failing graph
    assert g.n <= 5


def test_shrink_graph():
    g = shrink_graph(complete_graph(6), lambda h: h.n >= 3)
    assert g == complete_graph(3)
