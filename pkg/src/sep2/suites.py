"""Verification suites shared by the ``verify`` command and the acceptance tests.

Each suite takes keyword parameters, returns a JSON-ready report with an
``ok`` flag, counts and counterexamples, and draws all randomness from one
seeded generator.
"""

from __future__ import annotations

import math
import random
import time

from . import farey as fy
from . import markings as mk
from . import sepgraph as sgph
from . import subsurfaces as sub
from . import surfgroup as sg
from .farey import Slope


def _timed(fn):
    def run(**kw):
        t0 = time.perf_counter()
        rep = fn(**kw)
        rep["seconds"] = round(time.perf_counter() - t0, 3)
        rep["params"] = kw
        return rep

    run.__name__ = fn.__name__
    run.__doc__ = fn.__doc__
    return run


@_timed
def farey_parity(bound: int = 100):
    """Every Farey triangle up to ``bound`` is rainbow; no edge joins equal classes."""
    bad = []
    count = 0
    for tri in fy.enumerate_triangles(bound):
        count += 1
        classes = {fy.parity_class(v) for v in tri}
        if len(classes) != 3:
            bad.append([str(v) for v in tri])
    return {"ok": not bad and count > 0, "triangles": count, "violations": bad[:20]}


def random_adjacent_pair(rng: random.Random, size: int = 10**6):
    while True:
        p, q = rng.randint(-size, size), rng.randint(0, size)
        if (p, q) != (0, 0) and math.gcd(p, q) == 1:
            break
    a = Slope(p, q)
    _, x, y = fy._egcd(p, q)  # p*x + q*y = 1, so (-y)/x is a neighbour
    k = rng.randint(-1000, 1000)
    b = Slope(-y + k * p, x + k * q)
    return a, b


@_timed
def completions(samples: int = 1000, seed: int = 0):
    """Both triangle completions are adjacent to both inputs, with mutual |det| 2."""
    rng = random.Random(seed)
    bad = []
    for _ in range(samples):
        a, b = random_adjacent_pair(rng)
        c1, c2 = fy.triangle_completions(a, b)
        ok = all(fy.farey_adjacent(c, x) for c in (c1, c2) for x in (a, b)) and abs(fy.det(c1, c2)) == 2
        if not ok:
            bad.append([str(a), str(b), str(c1), str(c2)])
    return {"ok": not bad, "pairs": samples, "violations": bad[:20]}


def standard_chart():
    """The chart of S minus the first- and second-handle curves a, c."""
    return sub.chart_for("a", "c")


def bounded_slopes(r: int):
    return sorted({Slope(p, q) for q in range(0, r + 1) for p in range(-r, r + 1) if (p, q) != (0, 0)})


@_timed
def slope_determinant(range_: int = 10):
    """i(curve(u), curve(v)) = 2|det(u, v)| and curve_to_slope round trips."""
    chart = standard_chart()
    slopes = bounded_slopes(range_)
    bad = sub.determinant_violations(chart, slopes)
    trips = [str(s) for s in slopes if chart.curve_to_slope(chart.slope_to_curve(s)) != s]
    return {
        "ok": not bad and not trips,
        "slopes": len(slopes),
        "pairs": len(slopes) * (len(slopes) + 1) // 2,
        "anchors": {str(k): v.word for k, v in chart.anchors.items()},
        "violations": [[str(u), str(v), k, e] for u, v, k, e in bad[:20]],
        "roundtrip_failures": trips,
    }


def figure3_family(range_: int = 5):
    """Transversals t1(n), t2(m) of slopes n/1, m/1 in the two standard charts."""
    g1, g2, g3 = mk.STANDARD_BASES
    c1 = sub.chart_for(g2, g3, meridian=g1)
    c2 = sub.chart_for(g1, g3, meridian=g2)
    t1 = {n: c1.slope_to_curve(Slope(n, 1)) for n in range(-range_, range_ + 1)}
    t2 = {m: c2.slope_to_curve(Slope(m, 1)) for m in range(-range_, range_ + 1)}
    return t1, t2


@_timed
def figure3(range_: int = 5):
    """i(t1(n), t2(m)) = 4 for all n, m in [-range, range]."""
    t1, t2 = figure3_family(range_)
    table = {}
    bad = []
    for n, a in t1.items():
        for m, b in t2.items():
            k = sg.intersection_number(a.word, b.word)
            table[f"{n},{m}"] = k
            if k != 4:
                bad.append([n, m, a.word, b.word, k])
    return {
        "ok": not bad,
        "pairs": len(table),
        "equal_to_four": sum(v == 4 for v in table.values()),
        "separating_t1": [n for n, c in t1.items() if c.separating],
        "separating_t2": [m for m, c in t2.items() if c.separating],
        "violations": bad[:20],
    }


@_timed
def claim_onesep(samples: int = 500, seed: int = 0, mcg_length: int = 8):
    """Exactly one of t_k, o_k separates, over generated no-separating-base markings."""
    rng = random.Random(seed)
    bad = []
    rows = 0
    done = 0
    while done < samples:
        m = mk.random_marking(rng, "nonsep", mcg_length)
        rep = mk.one_separating_report(m)
        rows += len(rep["rows"])
        done += 1
        if not rep["ok"]:
            bad.append(rep)
        choice = mk.phi(m)
        if not choice.curve.separating:
            bad.append({"marking": m.words(), "phi": choice.to_json()})
    return {"ok": not bad, "markings": done, "triangles": rows, "exceptions": bad[:10]}


@_timed
def lemma_naturality(samples: int = 200, seed: int = 0, mcg_length: int = 8, window: int = 3, walk: int = 4):
    """phi moves by at most 2 per elementary move, and at most 1 with coherent choices.

    Moves are sampled along random walks of length ``walk`` starting from
    random markings of both families; one coherent session follows each walk.
    """
    rng = random.Random(seed)
    plain = {"equal": 0, "adjacent": 0, "distance-2": 0, "unresolved": 0}
    coherent = dict(plain)
    failures = []
    moves = 0
    invalid = 0
    while moves < samples:
        family = "nonsep" if rng.random() < 0.5 else "sep"
        m = mk.random_marking(rng, family, mcg_length)
        session = mk.PhiSession()
        for _ in range(walk):
            if moves >= samples:
                break
            m2 = mk.random_move(rng, m, window)
            try:
                mk.validate_marking(m2.pairs)
            except mk.MarkingError:
                invalid += 1
            r1 = mk.phi_stability_check(m, m2)
            r2 = mk.phi_stability_check(m, m2, session)
            plain[r1["relation"]] += 1
            coherent[r2["relation"]] += 1
            if r1["distance"] is None or r2["distance"] is None or r2["distance"] > 1:
                failures.append({"from": m.words(), "to": m2.words(), "plain": r1, "coherent": r2})
            moves += 1
            m = m2
    return {
        "ok": not failures and invalid == 0,
        "moves": moves,
        "plain": plain,
        "coherent": coherent,
        "invalid_outputs": invalid,
        "failures": failures[:10],
    }


def random_curve(rng: random.Random, max_len: int = 4):
    """A simple closed curve: a chain curve or abAB moved by a short chain-twist word."""
    w = rng.choice(sg.CHAIN_WORDS + ("abAB",))
    moves = mk.random_mapping_word(rng, max_len)
    return sg.Curve.from_word(sg.apply_twist_word(moves, w)).normalized()


def _random_conjugator(rng):
    while True:
        g = "".join(rng.choice(sg.LETTERS) for _ in range(3))
        if sg.free_reduce(g) == g:
            return g


@_timed
def twist_relations(pairs: int = 500, triples: int = 200, braids: int = 50, growth: int = 100, seed: int = 0):
    """Word-engine soundness: generator table, symmetry, invariances, braid relations, twist growth."""
    rng = random.Random(seed)
    failures = {}

    def fail(name, item):
        failures.setdefault(name, []).append(item)

    expected = {("a", "b"): 1, ("c", "d"): 1, ("a", "c"): 0, ("a", "d"): 0, ("b", "c"): 0, ("b", "d"): 0}
    for (u, v), k in expected.items():
        got = sg.intersection_number(u, v)
        if got != k:
            fail("generator_table", [u, v, got, k])
    for i, u in enumerate(sg.CHAIN_WORDS):
        for j, v in enumerate(sg.CHAIN_WORDS):
            if i < j:
                want = 1 if j - i == 1 else 0
                if sg.intersection_number(u, v) != want:
                    fail("chain_pattern", [u, v])
    for _ in range(pairs):
        u, v = random_curve(rng), random_curve(rng)
        k = sg.intersection_number(u.word, v.word)
        if k != sg.intersection_number(v.word, u.word):
            fail("symmetry", [u.word, v.word])
        g = _random_conjugator(rng)
        if sg.intersection_number(g + u.word + sg.inverse(g), v.word) != k:
            fail("conjugation", [u.word, v.word, g])
        if k % 2 != abs(sg.algebraic_intersection(u.homology, v.homology)) % 2:
            fail("parity", [u.word, v.word])
    for _ in range(triples):
        u, v = random_curve(rng), random_curve(rng)
        g = sg.ChainTwist(rng.randint(1, 5))
        n = rng.choice([x for x in range(-5, 6) if x])
        k = sg.intersection_number(u.word, v.word)
        tu, tv = sg.apply_twist(g, u.word, n), sg.apply_twist(g, v.word, n)
        if sg.intersection_number(tu, tv) != k:
            fail("twist_invariance", [u.word, v.word, int(g), n])
    for _ in range(braids):
        w = random_curve(rng).word
        for i in range(1, 6):
            for j in range(i + 1, 6):
                gi, gj = sg.ChainTwist(i), sg.ChainTwist(j)
                if j - i == 1:
                    lhs = sg.apply_twist_word([(gi, 1), (gj, 1), (gi, 1)], w)
                    rhs = sg.apply_twist_word([(gj, 1), (gi, 1), (gj, 1)], w)
                else:
                    lhs = sg.apply_twist_word([(gi, 1), (gj, 1)], w)
                    rhs = sg.apply_twist_word([(gj, 1), (gi, 1)], w)
                if sg.curve_key(lhs) != sg.curve_key(rhs):
                    fail("braid", [w, i, j])
    for _ in range(growth):
        a, b = random_curve(rng, 2), random_curve(rng, 2)
        g = sg.ChainTwist(rng.randint(1, 5))
        n = rng.choice([x for x in range(-10, 11) if x])
        core = g.core
        lhs = sg.intersection_number(sg.apply_twist(g, a.word, n), b.word)
        mid = abs(n) * sg.intersection_number(a.word, core) * sg.intersection_number(core, b.word)
        if abs(lhs - mid) > sg.intersection_number(a.word, b.word):
            fail("growth_band", [a.word, b.word, int(g), n, lhs, mid])
    return {
        "ok": not failures,
        "counts": {"pairs": pairs, "triples": triples, "braid_curves": braids, "growth": growth},
        "failures": {k: v[:10] for k, v in failures.items()},
    }


# hand-listed catalog entries: (boundary words, witness, expected type, expected hole flag)
CATALOG = [
    (["abAB"], "a", sub.TopoType.S11, False),
    (["abAB"], "c", sub.TopoType.S11, False),
    (["a", "c"], "ac", sub.TopoType.S04, True),
    (["a"], "c", sub.TopoType.S12, True),
    (["a", "a"], "c", sub.TopoType.S12, True),
    (["c"], "a", sub.TopoType.S12, True),
    (["ac", "c"], "a", sub.TopoType.S04, True),
    (["abAB", "a"], "c", sub.TopoType.S11, False),
    (["a"], "a", sub.TopoType.ANNULUS, False),
]


def hole_descriptors(rng: random.Random, count: int, mcg_length: int = 6):
    """Hole descriptors cut out by base curves of random markings."""
    out = []
    while len(out) < count:
        m = mk.random_marking(rng, rng.choice(("nonsep", "sep")), mcg_length)
        bases = m.bases
        for k in range(3):
            others = [b for j, b in enumerate(bases) if j != k]
            if not any(b.separating for b in others):
                out.append(sub.classify_subsurface(others, bases[k]))
            if not bases[k].separating:
                out.append(sub.classify_subsurface([bases[k]], others[0]))
    return out[:count]


@_timed
def holes(pairs: int = 100, seed: int = 0, mcg_length: int = 6):
    """Catalog classification plus the pairwise hole-overlap audit."""
    rng = random.Random(seed)
    catalog_bad = []
    for boundary, witness, topo, hole in CATALOG:
        d = sub.classify_subsurface(boundary, witness)
        if d.topo_type is not topo or d.is_hole != hole:
            catalog_bad.append([boundary, witness, d.topo_type.value, d.is_hole])
    descs = hole_descriptors(rng, 2 * pairs, mcg_length)
    holes_ = [d for d in descs if d.is_hole]
    sample = []
    while len(sample) < pairs:
        sample.append((rng.choice(holes_), rng.choice(holes_)))
    sample.append((holes_[0], holes_[0]))
    non_hole = sub.classify_subsurface(["abAB"], "a")
    sample.append((holes_[0], non_hole))
    audit = sgph.holes_overlap_audit(sample)
    return {
        "ok": not catalog_bad and audit["ok"] and audit["checked"] >= pairs,
        "catalog_entries": len(CATALOG),
        "catalog_mismatches": catalog_bad,
        "audit": audit,
    }


def tree_graph(depth: int = 4, branching: int = 3):
    adj = {0: []}
    frontier = [0]
    nxt_id = 1
    for _ in range(depth):
        new = []
        for v in frontier:
            for _ in range(branching):
                adj[v].append(nxt_id)
                adj[nxt_id] = [v]
                new.append(nxt_id)
                nxt_id += 1
        frontier = new
    return adj


def cycle_graph(n: int):
    return {i: [(i - 1) % n, (i + 1) % n] for i in range(n)}


def brute_delta(adj) -> float:
    ball = sgph.TruncatedBall.from_graph(adj, next(iter(adj)))
    d = ball.all_pairs()
    import itertools

    return max(sgph._four_point(d, *q) for q in itertools.combinations(ball.vertices, 4))


@_timed
def delta(word_bound: int = 16, radius: int = 3, mcg_length: int = 5, samples: int = 20000, seed: int = 0):
    """Four-point delta self-tests (tree, 6-cycle) and a probe on a curve ball."""
    tree = sgph.estimate_delta(sgph.TruncatedBall.from_graph(tree_graph(), 0), samples, seed)
    cyc_adj = cycle_graph(6)
    cyc = sgph.estimate_delta(sgph.TruncatedBall.from_graph(cyc_adj, 0), samples, seed)
    brute = brute_delta(cyc_adj)
    ball = sgph.build_ball("abAB", word_bound, radius, mcg_length)
    r1 = sgph.estimate_delta(ball, samples, seed)
    r2 = sgph.estimate_delta(ball, samples, seed)
    ecc = max(ball.distance.values())
    return {
        "ok": tree["delta"] == 0 and cyc["delta"] == brute and r1 == r2 and bool(r1["per_shell"]),
        "tree_delta": tree["delta"],
        "cycle6_delta": cyc["delta"],
        "cycle6_brute": brute,
        "ball": {"vertices": len(ball.vertices), "edges": len(ball.edges), "eccentricity": ecc, **ball.params},
        "report": r1,
        "deterministic": r1 == r2,
    }


SUITES = {
    "farey-parity": farey_parity,
    "completions": completions,
    "slope-determinant": slope_determinant,
    "figure3": figure3,
    "lemma-naturality": lemma_naturality,
    "claim-onesep": claim_onesep,
    "twist-relations": twist_relations,
    "holes": holes,
    "delta": delta,
}
