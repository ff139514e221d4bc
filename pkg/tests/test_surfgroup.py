import random

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import lift_intersection, trace
from sep2 import surfgroup as sg
from sep2.surfgroup import (
    CHAIN_WORDS,
    ChainTwist,
    Curve,
    EmptyWord,
    NonPrimitive,
    NotSimple,
    apply_twist,
    canonical,
    curve_key,
    homology_class,
    intersection_number,
    is_conjugate,
    reduce,
    self_intersection,
)

words = st.text(alphabet="abcdABCD", min_size=1, max_size=14)


def test_reduce_examples():
    with pytest.raises(EmptyWord):
        reduce("abBA")
    assert reduce("abA") == "b"
    assert canonical("abABcd") == canonical("dc")
    with pytest.raises(EmptyWord):
        reduce("abABcdCD")
    with pytest.raises(ValueError):
        reduce("abx")


@settings(max_examples=200, deadline=None)
@given(words)
def test_reduce_preserves_class(w):
    # the holonomy trace is a conjugacy invariant computed without any rewriting
    try:
        r = reduce(w)
    except EmptyWord:
        assert abs(trace(w) - 2) < 1e-6
        return
    assert homology_class(r) == homology_class(w)
    assert abs(trace(r) - trace(w)) < 1e-6 * max(1.0, trace(w))
    assert reduce(r) == r


def test_is_conjugate_examples():
    w = "abcDaB"
    assert is_conjugate(w, w[2:] + w[:2])
    assert not is_conjugate("a", "b")
    rng = random.Random(3)
    for _ in range(20):
        g = "".join(rng.choice("abcdABCD") for _ in range(3))
        assert is_conjugate(w, g + w + sg.inverse(g))


@settings(max_examples=60)
@given(words, st.text(alphabet="abcdABCD", min_size=1, max_size=4))
def test_conjugation_invariance_of_keys(w, g):
    try:
        reduce(w)
    except EmptyWord:
        return
    assert is_conjugate(w, g + w + sg.inverse(g))


def test_homology_examples():
    assert homology_class("abAB") == (0, 0, 0, 0)
    assert homology_class("a") == (1, 0, 0, 0)
    assert homology_class("aacD") == (2, 0, 1, -1)


def test_self_intersection_examples():
    assert self_intersection("a") == 0
    assert self_intersection("abAB") == 0
    assert self_intersection("ab") == 0
    assert self_intersection("aaBB") == 1
    with pytest.raises(NonPrimitive):
        self_intersection("aa")


@pytest.mark.parametrize("w", ["a", "ab", "abAB", "aab", "abc", "aBcD", "aaBB", "abAc", "aBAbcd"])
def test_self_intersection_matches_lifting_oracle(w):
    assert 2 * self_intersection(w) == lift_intersection(w, w)


GEN_TABLE = {("a", "b"): 1, ("c", "d"): 1, ("a", "c"): 0, ("a", "d"): 0, ("b", "c"): 0, ("b", "d"): 0}


@pytest.mark.parametrize("pair,value", sorted(GEN_TABLE.items()))
def test_generator_table(pair, value):
    u, v = pair
    assert intersection_number(u, v) == value
    assert intersection_number(v, u) == value


ORACLE_PAIRS = [
    ("abAB", "a"),
    ("abAB", "c"),
    ("ab", "a"),
    ("ab", "b"),
    ("ac", "b"),
    ("ac", "d"),
    ("aB", "cd"),
    ("aBcD", "ab"),
    ("abc", "d"),
    ("abAB", "aBcD"),
    ("aab", "ab"),
    ("abAB", "cdCD"),
    ("ac", "bd"),
]


@pytest.mark.parametrize("u,v", ORACLE_PAIRS)
def test_intersection_matches_lifting_oracle(u, v):
    assert intersection_number(u, v) == lift_intersection(u, v)


def test_chain_pattern():
    for i, u in enumerate(CHAIN_WORDS):
        assert not Curve.from_word(u).separating
        for j, v in enumerate(CHAIN_WORDS):
            if i < j:
                assert intersection_number(u, v) == (1 if j - i == 1 else 0)


def test_curve_construction():
    c = Curve.from_word("BAba")
    assert c.separating and c == Curve.from_word("abAB")
    with pytest.raises(NotSimple):
        Curve.from_word("aaBB")
    with pytest.raises(NonPrimitive):
        Curve.from_word("abab")
    with pytest.raises(EmptyWord):
        Curve.from_word("aA")


def test_twist_identity_and_inverse():
    rng = random.Random(5)
    for _ in range(20):
        w = rng.choice(["b", "d", "abAB", "aBcD", "ac", "bd"])
        g = ChainTwist(rng.randint(1, 5))
        assert curve_key(apply_twist(g, w, 0)) == curve_key(w)
        assert curve_key(apply_twist(g, apply_twist(g, w, 1), -1)) == curve_key(w)


def test_twist_preserves_relator():
    for g in ChainTwist:
        for p in (1, -1):
            img = sg.twist_map(canonical(g.core)).image(sg.RELATOR, p)
            assert is_conjugate(img, sg.RELATOR)


@pytest.mark.parametrize("n", range(-10, 11))
def test_twist_growth_simple(n):
    # i(T_a^n b, b) = |n| i(a, b)^2
    assert intersection_number(apply_twist(ChainTwist.T1, "b", n), "b") == abs(n)


def test_twist_invariance_and_braids():
    rng = random.Random(11)
    for _ in range(15):
        u = Curve.from_word(sg.apply_twist_word([(ChainTwist(rng.randint(1, 5)), 1)], rng.choice(CHAIN_WORDS)))
        v = Curve.from_word(rng.choice(["abAB", "bd", "ab"]))
        g = ChainTwist(rng.randint(1, 5))
        n = rng.choice([-2, -1, 1, 2])
        assert intersection_number(apply_twist(g, u.word, n), apply_twist(g, v.word, n)) == intersection_number(u, v)
    w = "aBcD"
    for i in range(1, 5):
        gi, gj = ChainTwist(i), ChainTwist(i + 1)
        lhs = sg.apply_twist_word([(gi, 1), (gj, 1), (gi, 1)], w)
        rhs = sg.apply_twist_word([(gj, 1), (gi, 1), (gj, 1)], w)
        assert curve_key(lhs) == curve_key(rhs)


def test_crossing_points_and_smoothings():
    a, b = Curve.from_word("a"), Curve.from_word("b")
    pts = sg.crossing_points(a, b)
    assert len(pts) == 1 and pts[0].sign in (1, -1)
    # the two curves meeting twice in S minus (a, c) have simple resolutions
    u, v = Curve.from_word("ac"), Curve.from_word("abAB")
    res = sg.smoothings(u, v)
    assert res and all(r.simple for r in res)


def test_path_words():
    assert sg.path_word("abcd", (1, mpmath.mpf("0.2")), (1, mpmath.mpf("0.7"))) == ""
    assert sg.path_word("abcd", (1, mpmath.mpf("0.7")), (1, mpmath.mpf("0.2"))) == "bcda"
    assert sg.path_word("abcd", (3, 0), (1, 0)) == "da"
    assert sg.loop_from("abcd", (2, 0)) == "cdab"


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["b", "d", "ab", "abAB", "aBcD", "ac", "cdCD", "bd"]), st.sampled_from(["a", "b", "c", "d", "ac"]))
def test_mod2_parity(u, v):
    cu, cv = Curve.from_word(u), Curve.from_word(v)
    k = intersection_number(cu, cv)
    assert k % 2 == abs(sg.algebraic_intersection(cu.homology, cv.homology)) % 2


def test_twisted_curves_match_lifting_oracle():
    rng = random.Random(9)
    for _ in range(12):
        steps = [(ChainTwist(rng.randint(1, 5)), rng.choice([1, -1])) for _ in range(4)]
        u = sg.apply_twist_word(steps, rng.choice(CHAIN_WORDS + ("abAB",)))
        v = rng.choice(["a", "b", "c", "d", "ac", "abAB", "bd", "aBcD"])
        assert intersection_number(u, v) == lift_intersection(u, v), (u, v)
