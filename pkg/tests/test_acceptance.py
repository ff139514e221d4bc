"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Sizes are the full acceptance sizes; the whole module takes several minutes.
"""

import time

import pytest

from conftest import ACCEPTANCE_LINES
from sep2 import sepgraph as sgph
from sep2 import suites

pytestmark = pytest.mark.slow


def record(n, title, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {n}: {title} -- {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


@pytest.fixture(scope="module")
def sep_ball():
    t0 = time.perf_counter()
    ball = sgph.build_ball("abAB", word_bound=16, radius=3, mcg_length=5)
    return ball, time.perf_counter() - t0


def test_criterion_01_farey_parity():
    rep = suites.farey_parity(bound=100)
    ok = rep["ok"] and rep["triangles"] > 0 and not rep["violations"] and rep["seconds"] < 60
    record(1, "Farey parity rainbow", ok, f"{rep['triangles']} triangles, {len(rep['violations'])} violations, {rep['seconds']}s")


def test_criterion_02_completions():
    rep = suites.completions(samples=1000, seed=0)
    ok = rep["ok"] and rep["pairs"] == 1000 and not rep["violations"]
    record(2, "triangle completions", ok, f"{rep['pairs']} pairs, {len(rep['violations'])} violations")


def test_criterion_03_slope_determinant():
    rep = suites.slope_determinant(range_=10)
    ok = rep["ok"] and not rep["violations"] and not rep["roundtrip_failures"] and rep["seconds"] < 600
    record(3, "slope dictionary determinant law", ok, f"{rep['slopes']} slopes, {rep['pairs']} pairs, {len(rep['violations'])} violations, {rep['seconds']}s")


def test_criterion_04_figure3():
    rep = suites.figure3(range_=5)
    ok = rep["ok"] and rep["pairs"] == 121 and rep["equal_to_four"] == 121
    record(4, "transversal pairs meet four times", ok, f"{rep['equal_to_four']}/{rep['pairs']} pairs with i = 4")


def test_criterion_05_exactly_one_separating():
    rep = suites.claim_onesep(samples=500, seed=0)
    ok = rep["ok"] and rep["markings"] >= 500 and not rep["exceptions"]
    record(5, "exactly one separating", ok, f"{rep['markings']} markings, {rep['triangles']} triangles, {len(rep['exceptions'])} exceptions")


def test_criterion_06_lemma_naturality():
    rep = suites.lemma_naturality(samples=200, seed=0)
    plain, coh = rep["plain"], rep["coherent"]
    ok = (
        rep["ok"]
        and rep["moves"] >= 200
        and plain["unresolved"] == 0
        and coh["unresolved"] == 0
        and coh["distance-2"] == 0
    )
    record(6, "phi naturality under elementary moves", ok, f"{rep['moves']} moves, plain {plain}, coherent {coh}")


def test_criterion_07_word_engine():
    rep = suites.twist_relations(pairs=500, triples=200, braids=50, growth=100, seed=0)
    ok = rep["ok"] and not rep["failures"]
    record(7, "word-engine soundness", ok, f"counts {rep['counts']}, failures {sorted(rep['failures'])}")


def test_criterion_08_separating_minimal_intersection(sep_ball):
    ball, _ = sep_ball
    scan = sgph.adjacency_scan(ball.vertices)
    ok = scan["ordered_pairs"] >= 10**4 and scan["min_intersection"] == 4 and not scan["below_four"]
    record(
        8,
        "separating pairs meet at least four times",
        ok,
        f"{scan['ordered_pairs']} ordered pairs, min i = {scan['min_intersection']}, {len(scan['below_four'])} below four",
    )


def test_criterion_09_holes():
    rep = suites.holes(pairs=100, seed=0)
    audit = rep["audit"]
    ok = rep["ok"] and not rep["catalog_mismatches"] and audit["checked"] >= 100 and not audit["disjoint_pairs"]
    record(9, "hole catalog and overlap audit", ok, f"{rep['catalog_entries']} catalog entries, {audit['checked']} hole pairs, {len(audit['disjoint_pairs'])} disjoint")


def test_criterion_10_delta():
    rep = suites.delta(word_bound=16, radius=3, mcg_length=5, samples=20000, seed=0)
    r = rep["report"]
    ok = (
        rep["ok"]
        and rep["tree_delta"] == 0
        and rep["cycle6_delta"] == rep["cycle6_brute"]
        and rep["deterministic"]
        and bool(r["per_shell"])
        and r["truncation"]["word_bound"] == 16
        and r["truncation"]["radius"] >= 3
        and rep["seconds"] < 1800
    )
    record(
        10,
        "delta self-tests and ball probe",
        ok,
        f"tree {rep['tree_delta']}, 6-cycle {rep['cycle6_delta']} (brute {rep['cycle6_brute']}), ball {rep['ball']['vertices']} vertices, per-shell {r['per_shell']}, {rep['seconds']}s",
    )
