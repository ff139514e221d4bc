"""Complete clean markings of the genus-2 surface, elementary moves and phi.

A marking is three (base, transversal) pairs.  The bases cut S into two pairs
of pants; each transversal crosses its own base minimally (once when the two
fill a one-holed torus, twice when they fill a four-holed sphere) and misses
the other two bases.  ``phi`` sends a marking to a separating curve: a
separating base if there is one, otherwise whichever of t_k and its Farey
triangle completion o_k is separating.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable

from . import surfgroup as sg
from .farey import INFINITY, Slope, farey_geodesic, triangle_completions
from .subsurfaces import TopoType, chart_for, classify_subsurface, surgery_candidates, _descend, _inside
from .surfgroup import Curve


class MarkingError(ValueError):
    pass


class NotPants(MarkingError):
    """Base curves are not three disjoint, pairwise non-isotopic curves."""


class NotTransverse(MarkingError):
    """A transversal does not cross its base minimally."""


class NotClean(MarkingError):
    """A transversal crosses one of the other base curves."""


class SearchExhausted(RuntimeError):
    """No clean transversal minimizing twisting was found inside the window."""


class NotElementary(ValueError):
    """The two markings do not differ by a single move."""


def _curve(x) -> Curve:
    return x if isinstance(x, Curve) else Curve.from_word(x)


def _same(u: Curve, v: Curve) -> bool:
    return u.key == v.key


@dataclass(frozen=True)
class Marking:
    pairs: tuple  # ((base, transversal), ...) as Curves

    @property
    def bases(self):
        return tuple(b for b, _ in self.pairs)

    @property
    def transversals(self):
        return tuple(t for _, t in self.pairs)

    def others(self, k: int):
        return tuple(b for j, b in enumerate(self.bases) if j != k)

    def key(self):
        """Order-independent isotopy key."""
        return tuple(sorted((b.key, t.key) for b, t in self.pairs))

    def words(self):
        return [[b.word, t.word] for b, t in self.pairs]

    def to_json(self) -> dict:
        return {"pairs": self.words()}

    @classmethod
    def from_json(cls, data) -> "Marking":
        pairs = data["pairs"] if isinstance(data, dict) else data
        return validate_marking(pairs)

    def map(self, fn) -> "Marking":
        """Apply a word map (e.g. a mapping class) to all six curves."""
        return Marking(tuple((_curve(fn(b.word)).normalized(), _curve(fn(t.word)).normalized()) for b, t in self.pairs))


def same_marking(m1: Marking, m2: Marking) -> bool:
    return m1.key() == m2.key()


def component_type(bases, k: int) -> TopoType:
    """Type of the component of S minus the other two bases containing base k."""
    others = [b for j, b in enumerate(bases) if j != k]
    return classify_subsurface(others, bases[k]).topo_type


def _required_intersection(topo: TopoType) -> int:
    return 1 if topo is TopoType.S11 else 2


def validate_marking(pairs) -> Marking:
    pairs = [(_curve(b), _curve(t)) for b, t in pairs]
    if len(pairs) != 3:
        raise NotPants(f"expected 3 pairs, got {len(pairs)}")
    bases = [b for b, _ in pairs]
    for i in range(3):
        for j in range(i + 1, 3):
            if _same(bases[i], bases[j]):
                raise NotPants(f"bases {i} and {j} are isotopic")
            if sg.intersection_number(bases[i].word, bases[j].word):
                raise NotPants(f"bases {i} and {j} intersect")
    for k, (b, t) in enumerate(pairs):
        for j, other in enumerate(bases):
            if j != k and sg.intersection_number(t.word, other.word):
                raise NotClean(f"transversal {k} crosses base {j}")
        need = _required_intersection(component_type(bases, k))
        got = sg.intersection_number(t.word, b.word)
        if got != need:
            raise NotTransverse(f"transversal {k} meets its base {got} times, expected {need}")
    return Marking(tuple(pairs))


# -- standard configurations ---------------------------------------------------

# bases of the no-separating-base picture: three disjoint chain curves
STANDARD_BASES = ("a", "c", "ac")
# separating base abAB with one nonseparating base on each side
SEPARATING_PAIRS = (("abAB", "ac"), ("a", "b"), ("c", "d"))


def _meridian_chart(bases, k):
    i, j = [x for x in range(3) if x != k]
    return chart_for(bases[i], bases[j], meridian=bases[k])


def standard_marking() -> Marking:
    """Bases a, c, ac (none separating); each transversal is the separating 0/1 curve of its chart."""
    bases = [Curve.from_word(w) for w in STANDARD_BASES]
    pairs = [(bases[k], _meridian_chart(bases, k).slope_to_curve(Slope(0, 1))) for k in range(3)]
    return validate_marking(pairs)


def separating_marking() -> Marking:
    return validate_marking(SEPARATING_PAIRS)


def random_mapping_word(rng: random.Random, max_len: int = 8):
    n = rng.randint(1, max_len)
    return [(sg.ChainTwist(rng.randint(1, 5)), rng.choice((-1, 1))) for _ in range(n)]


def random_marking(rng: random.Random, family: str = "nonsep", max_len: int = 8) -> Marking:
    """Image of a standard marking under a random chain-twist word."""
    base = standard_marking() if family == "nonsep" else separating_marking()
    moves = random_mapping_word(rng, max_len)
    return base.map(lambda w: sg.apply_twist_word(moves, w))


# -- elementary moves -----------------------------------------------------------


def twist_move(m: Marking, i: int, direction: int = 1) -> Marking:
    """Twist transversal i about its base: full twist in a one-holed torus,
    half twist in a four-holed sphere."""
    if direction not in (1, -1):
        raise ValueError("direction must be +1 or -1")
    base, t = m.pairs[i]
    if component_type(m.bases, i) is TopoType.S11:
        new_t = _curve(sg.twist(base, t.word, direction)).normalized()
    else:
        chart = _meridian_chart(m.bases, i)
        s = chart.curve_to_slope(t)  # n/1 since t is a neighbour of 1/0
        new_t = chart.slope_to_curve(Slope(s.p + direction, 1))
    pairs = list(m.pairs)
    pairs[i] = (base, new_t)
    return Marking(tuple(pairs))


def _clean_candidates(bases, j: int, old_t: Curve, window: int) -> list[Curve]:
    """Clean transversals for base j minimizing i(., old_t) over a twist window."""
    base = bases[j]
    others = [b for k, b in enumerate(bases) if k != j]
    topo = component_type(bases, j)
    if topo is TopoType.S04:
        chart = chart_for(others[0], others[1], meridian=base)
        proj = chart.project(old_t)
        centers = set()
        for p in proj:
            if p == INFINITY:
                centers.add(0)
            elif p.q == 1:
                centers.add(p.p)
            else:
                centers.add(farey_geodesic(INFINITY, p)[1].p)
        scored = {}
        for c in sorted(centers):
            for n in range(c - window, c + window + 1):
                if n not in scored:
                    cand = chart.slope_to_curve(Slope(n, 1))
                    scored[n] = (sg.intersection_number(cand.word, old_t.word), cand, abs(n - c) == window)
    else:
        sep = [b for b in others if b.separating]
        boundary = tuple(sep)
        seeds = {}
        if _inside(old_t, boundary) and sg.intersection_number(old_t.word, base.word) == 1:
            seeds[old_t.key] = old_t
        else:
            pool = [old_t] if _inside(old_t, boundary) else surgery_candidates(old_t, boundary)
            for x in pool:
                if not _inside(x, boundary) or sg.intersection_number(x.word, base.word) == 0:
                    continue
                y = _descend(base, x, 1, boundary)
                if y is not None:
                    seeds.setdefault(y.key, y)
        if not seeds:
            raise SearchExhausted(f"no transversal for base {j} found by surgery")
        scored = {}
        for s in seeds.values():
            for n in range(-window, window + 1):
                cand = _curve(sg.twist(base, s.word, n)).normalized()
                if cand.key not in scored:
                    scored[cand.key] = (sg.intersection_number(cand.word, old_t.word), cand, abs(n) == window)
    best = min(v[0] for v in scored.values())
    winners = [v for v in scored.values() if v[0] == best]
    if all(edge for _, _, edge in winners):
        raise SearchExhausted(f"minimum for base {j} sits on the window edge; raise the window")
    return sorted((c for _, c, _ in winners), key=lambda c: (len(c.word), c.word))


def flip_move(m: Marking, i: int, window: int = 3) -> list[Marking]:
    """Swap base and transversal of pair i, then re-clean the other transversals."""
    base_i, t_i = m.pairs[i]
    new_bases = list(m.bases)
    new_bases[i] = t_i
    options = []
    for j in range(3):
        if j == i:
            options.append([(t_i, base_i)])
            continue
        cands = _clean_candidates(new_bases, j, m.pairs[j][1], window)
        options.append([(new_bases[j], c) for c in cands])
    out = []
    seen = set()
    for p0 in options[0]:
        for p1 in options[1]:
            for p2 in options[2]:
                mk = validate_marking([p0, p1, p2])
                if mk.key() not in seen:
                    seen.add(mk.key())
                    out.append(mk)
    return out


# -- phi ------------------------------------------------------------------------


@dataclass(frozen=True)
class PhiChoice:
    source: str  # "separating-base", "t_k" or "o_k"
    k: int
    curve: Curve

    def to_json(self) -> dict:
        return {"source": self.source, "k": self.k, "curve": self.curve.word}


def completions(m: Marking, k: int) -> tuple[Curve, Curve]:
    """The two curves o_k completing (gamma_k, t_k) to a Farey triangle (mediant first)."""
    chart = _meridian_chart(m.bases, k)
    g = chart.curve_to_slope(m.bases[k])
    s = chart.curve_to_slope(m.transversals[k])
    return tuple(chart.slope_to_curve(x) for x in triangle_completions(g, s))


def _four_holed_indices(m: Marking):
    return [k for k in range(3) if component_type(m.bases, k) is TopoType.S04]


def phi_options(m: Marking) -> list[PhiChoice]:
    """Every separating curve phi may legitimately assign to m."""
    seps = [PhiChoice("separating-base", k, b) for k, b in enumerate(m.bases) if b.separating]
    if seps:
        return seps
    out = []
    for k in _four_holed_indices(m):
        if m.transversals[k].separating:
            out.append(PhiChoice("t_k", k, m.transversals[k]))
        for o in completions(m, k):
            if o.separating:
                out.append(PhiChoice("o_k", k, o))
    return out


def phi(m: Marking) -> PhiChoice:
    for k, b in enumerate(m.bases):
        if b.separating:
            return PhiChoice("separating-base", k, b)
    k = _four_holed_indices(m)[0]
    t = m.transversals[k]
    o1, o2 = completions(m, k)
    seps = [c.separating for c in (t, o1, o2)]
    if seps[0] and not seps[1]:
        return PhiChoice("t_k", k, t)
    if not seps[0] and seps[1]:
        return PhiChoice("o_k", k, o1)
    raise AssertionError(f"separating pattern {seps} of (t_k, o_k, o_k') breaks the one-separating rule")


def one_separating_report(m: Marking) -> dict:
    """Homology test of t_k and both completions for every four-holed k."""
    rows = []
    for k in _four_holed_indices(m):
        t = m.transversals[k]
        o1, o2 = completions(m, k)
        rows.append(
            {
                "k": k,
                "t_k": [t.word, t.separating],
                "o_k": [[o.word, o.separating] for o in (o1, o2)],
                "exactly_one": (t.separating != o1.separating) and (o1.separating == o2.separating),
            }
        )
    return {"marking": m.words(), "rows": rows, "ok": all(r["exactly_one"] for r in rows)}


class PhiSession:
    """Coherent choice: keep the previous answer while it remains admissible."""

    def __init__(self):
        self.last: PhiChoice | None = None

    def phi(self, m: Marking) -> PhiChoice:
        if self.last is not None:
            for opt in phi_options(m):
                if _same(opt.curve, self.last.curve):
                    self.last = opt
                    return opt
        self.last = phi(m)
        return self.last


def move_kind(m1: Marking, m2: Marking) -> tuple[str, int]:
    """('twist' | 'flip', index in m1) when m2 is one elementary move from m1."""
    b1 = [b.key for b in m1.bases]
    b2 = [b.key for b in m2.bases]
    t2 = {b.key: t for b, t in m2.pairs}
    if sorted(b1) == sorted(b2):
        diff = [k for k, (b, t) in enumerate(m1.pairs) if not _same(t, t2[b.key])]
        if len(diff) == 1:
            k = diff[0]
            cands = [twist_move(m1, k, d).transversals[k] for d in (1, -1)]
            if component_type(m1.bases, k) is TopoType.S04:
                b = m1.bases[k]
                cands += [_curve(sg.twist(b, m1.transversals[k].word, d)) for d in (1, -1)]
            if any(_same(c, t2[m1.bases[k].key]) for c in cands):
                return "twist", k
        raise NotElementary("same bases but not a single twist")
    gone = [k for k, key in enumerate(b1) if key not in b2]
    if len(gone) == 1:
        k = gone[0]
        b, t = m1.pairs[k]
        for b_new, t_new in m2.pairs:
            if _same(b_new, t) and _same(t_new, b):
                return "flip", k
    raise NotElementary("markings differ by more than one move")


def _neighbour_candidates(m1: Marking, m2: Marking, p1: Curve):
    pool = {}
    for m in (m1, m2):
        for c in m.bases + m.transversals:
            if c.separating:
                pool[c.key] = c
        if not any(b.separating for b in m.bases):
            for k in _four_holed_indices(m):
                for o in completions(m, k):
                    if o.separating:
                        pool[o.key] = o
        for core in m.bases + m.transversals:
            for n in (1, -1, 2, -2):
                c = _curve(sg.twist(core, p1.word, n))
                pool.setdefault(c.key, c)
    return pool.values()


def phi_stability_check(m1: Marking, m2: Marking, session: PhiSession | None = None) -> dict:
    kind, k = move_kind(m1, m2)
    if session is not None:
        c1, c2 = session.phi(m1), session.phi(m2)
    else:
        c1, c2 = phi(m1), phi(m2)
    inter = sg.intersection_number(c1.curve.word, c2.curve.word)
    if _same(c1.curve, c2.curve):
        relation, dist = "equal", 0
    elif inter == 4:
        relation, dist = "adjacent", 1
    else:
        relation, dist = "unresolved", None
        for x in _neighbour_candidates(m1, m2, c1.curve):
            if (
                x.separating
                and sg.intersection_number(x.word, c1.curve.word) == 4
                and sg.intersection_number(x.word, c2.curve.word) == 4
            ):
                relation, dist = "distance-2", 2
                break
    return {
        "move": kind,
        "index": k,
        "phi": [c1.to_json(), c2.to_json()],
        "intersection": inter,
        "relation": relation,
        "distance": dist,
    }


def random_move(rng: random.Random, m: Marking, window: int = 3) -> Marking:
    i = rng.randrange(3)
    if rng.random() < 0.5:
        return twist_move(m, i, rng.choice((1, -1)))
    outs = flip_move(m, i, window)
    return outs[rng.randrange(len(outs))]
