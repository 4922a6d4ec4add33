"""Acceptance criteria 1-8, one PASS/FAIL line each.

Run alone with ``pytest tests/test_acceptance.py -v`` or as a script.
"""

import os
import sys
import time

import pytest

from weightkit import linalg
from weightkit.complexes import Complex, homology
from weightkit.counterexamples import (Triple, build_even_dim_example,
                                       build_triple_example, even_dim_report,
                                       parity_obstruction_check)
from weightkit.fuzz import FuzzConfig, run_property_suite
from weightkit.linalg import QQ
from weightkit.weights import without_weights

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")
RINGS = ("Z", "F2", "F3", "Q")
LAWS = ("monotonicity", "ideal", "composition", "merging", "self_duality")

_start = {}


@pytest.fixture(scope="module", autouse=True)
def violation_baseline():
    _start["violations"] = linalg.check_violations()


@pytest.fixture
def report(request):
    tr = request.config.pluginmanager.get_plugin("terminalreporter")

    def emit(n, ok, detail):
        line = f"acceptance criterion {n}: {'PASS' if ok else 'FAIL'} ({detail})"
        if tr is not None:
            tr.write_line("")
            tr.write_line(line)
        else:
            print(line)
        return ok
    return emit


def _fixture(name):
    with open(os.path.join(FIXTURES, name)) as fh:
        return fh.read()


def test_criterion_1_equivalence_suite(report):
    t = time.perf_counter()
    rep = run_property_suite(FuzzConfig(seed=1, trials=1000,
                                        coefficients=RINGS,
                                        properties=("methods_agree",)))
    dt = time.perf_counter() - t
    per_ring = {tag: rep.counts[("methods_agree", tag)] for tag in RINGS}
    ok = (rep.ok and all(c.checked == 1000 and c.failed == 0
                         for c in per_ring.values()) and dt <= 300)
    pos = sum(c.positive for c in per_ring.values())
    assert report(1, ok, f"4 methods agree on {4 * 1000} instances, "
                  f"{pos} positive, {len(rep.failures)} disagreements, "
                  f"{dt:.0f}s"), rep.text()


def test_criterion_2_even_dimensional_example(report):
    text = even_dim_report()
    ex = build_even_dim_example()
    pr = parity_obstruction_check(ex.M, (0, 0))
    dims = [homology(ex.M, i).rank for i in (-1, 0, 1)]
    ok = (text == _fixture("even_dim_report.txt")
          and without_weights(ex.M, (0, 0), "all").verdict
          and ex.printed_homotopy.verify() and dims == [1, 0, 1]
          and (pr.X_dim, pr.Y_dim) == (1, 1) and pr.obstructed)
    assert report(2, ok, f"homology dims {dims}, component dims "
                  f"{pr.X_dim} and {pr.Y_dim}, report bit-exact "
                  f"{text == _fixture('even_dim_report.txt')}")


def test_criterion_3_triple_example(report):
    M, text = build_triple_example()
    L = Complex.concentrated(QQ, 0)
    Z = Complex.zero(QQ)
    split = [Triple((L, Z, Z)), Triple((Z, Z, L))]
    degenerate = all(homology(M.weight_complex(), i).is_zero
                     for i in M.weight_complex().degrees)
    ok = (text == _fixture("triple_report.txt") and M.in_category()
          and degenerate and not any(s.in_category() for s in split)
          and text.rstrip().endswith("result: verified"))
    assert report(3, ok, f"(L,0,L) total dim {M.total_dim()}, degenerate "
                  f"{degenerate}, split dims "
                  f"{[s.total_dim() for s in split]}, report bit-exact "
                  f"{text == _fixture('triple_report.txt')}")


def test_criterion_4_avoiding_soundness(report):
    rep = run_property_suite(FuzzConfig(seed=4, trials=1000,
                                        coefficients=RINGS,
                                        properties=("avoid_sound",)))
    c = rep.total("avoid_sound")
    ok = rep.ok and c.failed == 0
    assert report(4, ok, f"{c.checked} decompositions certified, "
                  f"{c.skipped} instances with weights refused, "
                  f"{c.failed} failures"), rep.text()


def test_criterion_5_normal_form_roundtrip(report):
    rep = run_property_suite(FuzzConfig(seed=5, trials=1000, max_rank=5,
                                        coefficients=("Z",),
                                        properties=("normal_form",)))
    c = rep.total("normal_form")
    ok = rep.ok and c.checked == 1000
    assert report(5, ok, f"{c.checked} Z-complexes, {c.failed} failures"), \
        rep.text()


def test_criterion_6_criteria_agreement(report):
    rep = run_property_suite(FuzzConfig(seed=6, trials=1000,
                                        coefficients=("Z",),
                                        properties=("criteria_agree",)))
    c = rep.total("criteria_agree")
    ok = rep.ok and c.checked == 1000
    assert report(6, ok, f"{c.checked} Z-trials, {c.failed} "
                  f"disagreements"), rep.text()


def test_criterion_7_structural_laws(report):
    rep = run_property_suite(FuzzConfig(seed=7, trials=250,
                                        coefficients=RINGS,
                                        properties=LAWS))
    totals = {name: rep.total(name) for name in LAWS}
    ok = rep.ok and all(c.checked >= 500 and c.failed == 0
                        for c in totals.values())
    detail = ", ".join(f"{k} {c.checked}" for k, c in totals.items())
    assert report(7, ok, f"checked: {detail}; "
                  f"{sum(c.failed for c in totals.values())} failures"), \
        rep.text()


def test_criterion_8_self_checks(report):
    rep = run_property_suite(FuzzConfig(seed=8, trials=1000,
                                        coefficients=RINGS,
                                        properties=("linear_algebra",)))
    c = rep.total("linear_algebra")
    violations = linalg.check_violations() - _start["violations"]
    ok = linalg.CHECKS and rep.ok and violations == 0
    assert report(8, ok, f"checks enabled {linalg.CHECKS}, {c.checked} "
                  f"extra SNF/kernel trials, {violations} violations "
                  f"across the acceptance run")


if __name__ == "__main__":
    linalg.set_checks(True)
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
