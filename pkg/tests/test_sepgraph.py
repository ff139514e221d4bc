import itertools
from types import SimpleNamespace

import pytest

from oracles import lift_intersection
from sep2 import sepgraph as sgph
from sep2 import suites
from sep2 import surfgroup as sg
from sep2.farey import Slope
from sep2.subsurfaces import classify_subsurface
from sep2.sepgraph import NotAHole, NotSeparating, SameVertex, TooSmall, TruncatedBall


@pytest.fixture(scope="module")
def small_ball():
    return sgph.build_ball("abAB", word_bound=12, radius=3, mcg_length=3)


def test_vertices_must_separate():
    with pytest.raises(NotSeparating):
        sgph.SepVertex.of("a")
    assert sgph.SepVertex.of("abAB") == sgph.SepVertex.of("BAba")


def test_is_adjacent():
    # slope 2/1 of the standard chart is separating and meets abAB four times
    w = suites.standard_chart().slope_to_curve(Slope(2, 1)).word
    assert sgph.is_adjacent("abAB", w)
    assert lift_intersection("abAB", w) == 4
    assert not sgph.is_adjacent("abAB", suites.standard_chart().slope_to_curve(Slope(4, 1)).word)
    with pytest.raises(SameVertex):
        sgph.is_adjacent("abAB", "BAba")


def test_ball_edges_match_lifting_oracle(small_ball):
    for u, v in small_ball.edges[:6]:
        assert lift_intersection(u, v) == 4


def test_ball_structure(small_ball):
    b = small_ball
    assert b.center in b.vertices and b.distance[b.center] == 0
    assert b.params["min_intersection"] == 4
    adj = b.adjacency()
    for u, v in b.edges:
        assert sg.intersection_number(u, v) == 4
        assert abs(b.distance[u] - b.distance[v]) <= 1
    for v in b.vertices:
        if v != b.center:
            assert any(b.distance[w] == b.distance[v] - 1 for w in adj[v])
    js = b.to_json()
    assert js["distances_are"] == "UPPER BOUND" and len(js["vertices"]) == len(b.vertices)


def test_ball_radius_zero_and_monotone():
    b0 = sgph.build_ball("abAB", word_bound=12, radius=0, mcg_length=3)
    assert b0.vertices == [b0.center] and b0.edges == []
    b1 = sgph.build_ball("abAB", word_bound=12, radius=1, mcg_length=3)
    b2 = sgph.build_ball("abAB", word_bound=12, radius=2, mcg_length=3)
    assert set(b1.vertices) <= set(b2.vertices)
    b_short = sgph.build_ball("abAB", word_bound=10, radius=2, mcg_length=3)
    assert set(b_short.vertices) <= set(b2.vertices)


def test_triangle_inequality(small_ball):
    d = small_ball.all_pairs()
    verts = small_ball.vertices[:25]
    for x, y, z in itertools.combinations(verts, 3):
        assert d[x][z] <= d[x][y] + d[y][z]


def test_delta_synthetic_graphs():
    tree = TruncatedBall.from_graph(suites.tree_graph(), 0)
    assert sgph.estimate_delta(tree)["delta"] == 0
    cyc = suites.cycle_graph(6)
    rep = sgph.estimate_delta(TruncatedBall.from_graph(cyc, 0))
    assert rep["exhaustive"] and rep["delta"] == suites.brute_delta(cyc) == 1.0


def test_delta_errors_and_determinism(small_ball):
    with pytest.raises(TooSmall):
        sgph.estimate_delta(TruncatedBall.from_graph(suites.cycle_graph(3), 0))
    r1 = sgph.estimate_delta(small_ball, samples=500, seed=3)
    r2 = sgph.estimate_delta(small_ball, samples=500, seed=3)
    assert r1 == r2
    assert r1["truncation"]["word_bound"] == 12 and r1["per_shell"]
    assert 0 <= r1["delta"] <= 2 * max(small_ball.distance.values())


def test_projection_bounds(small_ball):
    chart = suites.standard_chart()
    u = "abAB"
    v = small_ball.vertices[-1]
    same = sgph.projection_lower_bound(u, u, [chart])
    assert same["lower_bound"] == 0
    assert sgph.projection_distance(chart, u, u) == 0
    rep = sgph.projection_lower_bound(u, v, [chart], threshold=0, ball=small_ball)
    assert rep["lower_bound"] >= 0 and rep["upper_bound"] == small_ball.distance[v]
    high = sgph.projection_lower_bound(u, v, [chart], threshold=10**6)
    assert high["lower_bound"] == 0


def test_projection_rejects_non_holes():
    fake = SimpleNamespace(descriptor=SimpleNamespace(is_hole=False), boundary=(sg.Curve.from_word("abAB"),))
    with pytest.raises(NotAHole):
        sgph.projection_lower_bound("abAB", "abAB", [fake])


def test_adjacency_scan(small_ball):
    scan = sgph.adjacency_scan(small_ball.vertices)
    n = len(small_ball.vertices)
    assert scan["ordered_pairs"] == n * (n - 1)
    assert scan["min_intersection"] == 4 and scan["below_four"] == []
    # every pair meeting four times inside the ball is an edge of it
    assert scan["adjacent_ordered_pairs"] == 2 * len(small_ball.edges)


def test_holes_overlap_audit():
    sphere = classify_subsurface(["a", "c"], "ac")
    s12 = classify_subsurface(["a"], "c")
    torus = classify_subsurface(["abAB"], "a")
    rep = sgph.holes_overlap_audit([(sphere, s12), (sphere, sphere), (s12, torus)])
    assert rep["ok"] and rep["checked"] == 2 and rep["skipped_non_holes"] == 1
