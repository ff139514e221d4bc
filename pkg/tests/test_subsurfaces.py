import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import lift_intersection
from sep2 import subsurfaces as sub
from sep2 import suites
from sep2 import surfgroup as sg
from sep2.farey import INFINITY, ZERO, ParityClass, Slope, det, farey_distance, parity_class
from sep2.subsurfaces import (
    BadConfiguration,
    DisjointFromSubsurface,
    InessentialBoundary,
    NotInSubsurface,
    chart_for,
    classify_subsurface,
)


@pytest.fixture(scope="module")
def chart():
    return suites.standard_chart()


def test_chart_errors():
    with pytest.raises(BadConfiguration):
        chart_for("a", "a")
    with pytest.raises(BadConfiguration):
        chart_for("a", "b")  # they intersect
    with pytest.raises(BadConfiguration):
        chart_for("a", "abAB")  # separating boundary


def test_anchors(chart):
    anchors = chart.anchors
    assert set(anchors) == {INFINITY, ZERO, Slope(1, 1)}
    for s, t in itertools.combinations(anchors, 2):
        assert sg.intersection_number(anchors[s].word, anchors[t].word) == 2
    for c in anchors.values():
        assert chart.contains(c)
        assert chart.curve_to_slope(c) in anchors


def test_twist_calibration(chart):
    a_inf, a_zero = chart.anchors[INFINITY], chart.anchors[ZERO]
    assert chart.curve_to_slope(chart._twist(INFINITY, a_zero.word, 1)) == Slope(2, 1)
    assert chart.curve_to_slope(chart._twist(ZERO, a_inf.word, 1)) == Slope(1, 2)


def test_determinant_law_small(chart):
    slopes = suites.bounded_slopes(4)
    assert sub.determinant_violations(chart, slopes) == []
    for s in slopes:
        assert chart.curve_to_slope(chart.slope_to_curve(s)) == s


@pytest.mark.parametrize("u,v", [("1/0", "0/1"), ("1/2", "2/1"), ("1/3", "-1/2"), ("3/2", "2/3"), ("2/1", "-3/1")])
def test_determinant_law_matches_lifting_oracle(chart, u, v):
    su, sv = Slope.parse(u), Slope.parse(v)
    cu, cv = chart.slope_to_curve(su), chart.slope_to_curve(sv)
    assert lift_intersection(cu.word, cv.word) == 2 * abs(det(su, sv))


def test_separating_slopes_are_one_parity_class(chart):
    for s in suites.bounded_slopes(4):
        assert chart.slope_to_curve(s).separating == (parity_class(s) is ParityClass.EO)


def test_not_in_subsurface(chart):
    with pytest.raises(NotInSubsurface):
        chart.curve_to_slope("b")
    with pytest.raises(NotInSubsurface):
        chart.curve_to_slope("a")  # a boundary curve is peripheral


def test_project(chart):
    assert chart.project(chart.slope_to_curve(Slope(3, 2))) == {Slope(3, 2)}
    with pytest.raises(DisjointFromSubsurface):
        chart.project("a")
    for w in ["b", "d", "abAB", "bd", "aBcD"]:
        proj = chart.project(w)
        assert proj
        # projections of a curve have bounded diameter
        assert max(farey_distance(x, y) for x in proj for y in proj) <= 2


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**6))
def test_exactly_one_separating_per_triangle_through_infinity(seed):
    rng = random.Random(seed)
    c = suites.standard_chart()
    n = rng.randint(-6, 6)
    # triangles over the edge 1/0 -- n/1 in the standard chart
    verts = [INFINITY, Slope(n, 1), Slope(n + 1, 1)]
    seps = [c.slope_to_curve(s).separating for s in verts]
    assert seps.count(True) == 1


def test_chart_is_cached():
    assert chart_for("a", "c") is chart_for("A", "C")


def test_classify_catalog():
    for boundary, witness, topo, hole in suites.CATALOG:
        d = classify_subsurface(boundary, witness)
        assert d.topo_type is topo and d.is_hole == hole, (boundary, witness)


def test_classify_errors():
    with pytest.raises(InessentialBoundary):
        classify_subsurface([], "a")
    with pytest.raises(InessentialBoundary):
        classify_subsurface(["a", "b"], "c")  # boundary curves cross
    with pytest.raises(InessentialBoundary):
        classify_subsurface(["a"], "b")  # witness crosses boundary
    with pytest.raises(InessentialBoundary):
        classify_subsurface(["a", "c", "ac"], "abAB")  # pants decomposition
    with pytest.raises(InessentialBoundary):
        classify_subsurface(["a", "a", "a"], "c")


def test_descriptor_contains():
    torus = classify_subsurface(["abAB"], "a")
    assert torus.contains("b") and torus.contains("ab")
    assert not torus.contains("c") and not torus.contains("abAB")
    sphere = classify_subsurface(["a", "c"], "ac")
    assert sphere.contains("abAB") and not sphere.contains("b")
    assert classify_subsurface(["a"], "a").contains("a")
    assert sphere.to_json()["topo_type"] == "S0,4"
    assert sphere.complexity == 1 and classify_subsurface(["a"], "c").complexity == 2


def test_surgery_candidates_land_inside():
    boundary = (sg.Curve.from_word("a"), sg.Curve.from_word("c"))
    for w in ["b", "d", "bd", "aBcD"]:
        cands = sub.surgery_candidates(sg.Curve.from_word(w), boundary)
        inside = [c for c in cands if sub._inside(c, boundary)]
        assert inside, w
        for c in inside:
            assert all(sg.intersection_number(c.word, b.word) == 0 for b in boundary)
