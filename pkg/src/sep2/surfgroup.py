"""Words, curves and Dehn twists on the closed genus-2 surface.

pi_1 is presented as <a, b, c, d | abABcdCD>; uppercase letters are inverses.
Combinatorial operations (free and Dehn reduction, half-relator conjugacy
closure, homology) work on plain strings.  Geometric quantities (simplicity,
intersection numbers, conjugacy keys, twist automorphisms) come from the
closed geodesic of each class, see :mod:`sep2._geometry`.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass
from functools import lru_cache

import mpmath

from . import _geometry as geo

LETTERS = "abcdABCD"
RELATOR = "abABcdCD"

# the five curves of the standard chain: i(c_k, c_{k+1}) = 1, all others 0
CHAIN_WORDS = ("a", "b", "ac", "d", "c")


class EmptyWord(ValueError):
    """The word reduces to the identity."""


class NonPrimitive(ValueError):
    """The word is a proper power."""


class NotSimple(ValueError):
    """The class has no embedded representative."""


def inverse(word: str) -> str:
    return word[::-1].swapcase()


def _check_letters(word: str) -> None:
    bad = set(word) - set(LETTERS)
    if bad:
        raise ValueError(f"letters {sorted(bad)} not in alphabet {LETTERS}")


def free_reduce(word: str) -> str:
    out: list[str] = []
    for ch in word:
        if out and out[-1] == ch.swapcase():
            out.pop()
        else:
            out.append(ch)
    return "".join(out)


def cyclic_reduce(word: str) -> str:
    word = free_reduce(word)
    i, j = 0, len(word)
    while j - i > 1 and word[i] == word[j - 1].swapcase():
        i += 1
        j -= 1
    return word[i:j]


def least_rotation(word: str) -> str:
    if not word:
        return word
    return min(word[i:] + word[:i] for i in range(len(word)))


def _relator_pieces():
    rotations = []
    for r in (RELATOR, inverse(RELATOR)):
        rotations.extend(r[i:] + r[:i] for i in range(len(r)))
    long_pieces: dict[str, str] = {}
    halves: dict[str, str] = {}
    for rot in rotations:
        for k in range(4, 9):
            piece, rest = rot[:k], rot[k:]
            if k == 4:
                halves[piece] = inverse(rest)
            else:
                long_pieces[piece] = inverse(rest)
    return long_pieces, halves


_LONG, _HALF = _relator_pieces()


def _dehn_step(word: str) -> str | None:
    n = len(word)
    doubled = word + word
    for k in range(min(8, n), 4, -1):
        for i in range(n):
            piece = doubled[i : i + k]
            if piece in _LONG:
                return _LONG[piece] + doubled[i + k : i + n]
    return None


def reduce(word: str) -> str:
    """Freely, cyclically and Dehn-reduced representative of the class of ``word``.

    Raises EmptyWord when the class is trivial.
    """
    _check_letters(word)
    w = cyclic_reduce(word)
    while w:
        nxt = _dehn_step(w)
        if nxt is None:
            return w
        w = cyclic_reduce(nxt)
    raise EmptyWord(f"{word!r} represents the identity")


def canonical(word: str) -> str:
    """Least cyclic rotation of the reduced word."""
    return least_rotation(reduce(word))


def _half_relator_moves(word: str):
    n = len(word)
    if n < 4:
        return
    doubled = word + word
    for i in range(n):
        piece = doubled[i : i + 4]
        if piece in _HALF:
            moved = _HALF[piece] + doubled[i + 4 : i + n]
            try:
                yield canonical(moved)
            except EmptyWord:
                continue


def conjugacy_orbit(word: str, limit: int = 20000) -> set[str]:
    """Closure of ``canonical(word)`` under rotations and half-relator swaps."""
    start = canonical(word)
    seen = {start}
    queue = deque([start])
    while queue:
        w = queue.popleft()
        for nxt in _half_relator_moves(w):
            if nxt not in seen:
                seen.add(nxt)
                if len(seen) > limit:
                    raise RuntimeError(f"conjugacy orbit of {word!r} exceeds {limit} words")
                queue.append(nxt)
    return seen


def is_conjugate(u: str, v: str) -> bool:
    """True iff u and v are freely homotopic (same conjugacy class)."""
    try:
        cu = canonical(u)
    except EmptyWord:
        cu = ""
    try:
        cv = canonical(v)
    except EmptyWord:
        cv = ""
    if not cu or not cv:
        return cu == cv
    if cu == cv:
        return True
    if homology_class(cu) != homology_class(cv):
        return False
    return not conjugacy_orbit(cu).isdisjoint(conjugacy_orbit(cv))


def homology_class(word: str) -> tuple[int, int, int, int]:
    return tuple(word.count(x) - word.count(x.upper()) for x in "abcd")


def algebraic_intersection(h1, h2) -> int:
    """Symplectic pairing with <a, b> = <c, d> = 1."""
    return h1[0] * h2[1] - h1[1] * h2[0] + h1[2] * h2[3] - h1[3] * h2[2]


def is_proper_power(word: str) -> bool:
    w = reduce(word)
    n = len(w)
    for p in range(1, n):
        if n % p == 0 and w == w[p:] + w[:p]:
            return True
    return False


@lru_cache(maxsize=65536)
def _geodesic_cached(word: str) -> geo.Geodesic:
    return geo.trace_geodesic(word)


def geodesic(word: str) -> geo.Geodesic:
    """Closed geodesic (of the primitive root) of the class of ``word``."""
    return _geodesic_cached(canonical(word))


def conjugacy_key(word: str) -> str:
    """Exact normal form of the oriented conjugacy class of the primitive root."""
    return least_rotation(geodesic(word).cutting)


def curve_key(word: str) -> str:
    """Normal form of the unoriented free homotopy class of the primitive root."""
    cut = geodesic(word).cutting
    return min(least_rotation(cut), least_rotation(inverse(cut)))


def self_intersection(word: str) -> int:
    g = geodesic(word)
    if g.power != 1 or is_proper_power(word):
        raise NonPrimitive(f"{word!r} is a proper power")
    pos, _ = geo.ordered_positions(g)
    return geo.self_crossings(pos)


def _intersect_words(u: str, v: str) -> int:
    gu, gv = geodesic(u), geodesic(v)
    if curve_key(u) == curve_key(v):
        return 2 * geo.self_crossings(geo.ordered_positions(gu)[0]) * gu.power * gv.power
    pu, pv = geo.ordered_positions(gu, gv)
    return geo.count_crossings(pu, pv) * gu.power * gv.power


@dataclass(frozen=True, eq=False)
class Curve:
    """Essential simple closed curve; equality is free homotopy of unoriented curves."""

    word: str
    homology: tuple
    separating: bool
    simple: bool = True

    @classmethod
    def from_word(cls, word: str) -> "Curve":
        w = canonical(word)
        if is_proper_power(w) or geodesic(w).power != 1:
            raise NonPrimitive(f"{word!r} is a proper power")
        if self_intersection(w) != 0:
            raise NotSimple(f"{word!r} is not simple")
        h = homology_class(w)
        return cls(w, h, h == (0, 0, 0, 0), True)

    @property
    def key(self) -> str:
        return curve_key(self.word)

    @property
    def geodesic(self) -> geo.Geodesic:
        return geodesic(self.word)

    def normalized(self) -> "Curve":
        """Same curve, written with the reduced cutting sequence of its geodesic."""
        w = canonical(self.key)
        if len(w) < len(self.word):
            return Curve(w, homology_class(w), self.separating, True)
        return self

    def __eq__(self, other):
        if not isinstance(other, Curve):
            return NotImplemented
        return self.word == other.word or self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __len__(self):
        return len(self.word)

    def __repr__(self):
        tag = "sep" if self.separating else "nonsep"
        return f"Curve({self.word!r}, {tag})"


def curve(word: str) -> Curve:
    return Curve.from_word(word)


def intersection_number(u, v) -> int:
    """Geometric intersection number of two closed curves (Curve or word)."""
    uw = u.word if isinstance(u, Curve) else u
    vw = v.word if isinstance(v, Curve) else v
    return _intersect_words(uw, vw)


def disjoint(u, v) -> bool:
    return intersection_number(u, v) == 0


# -- Dehn twists ------------------------------------------------------------

# boundary parameter (Klein, along each side) where generator loops cross
_LOOP_SIDE_PARAM = "0.4371"


def _segment_crossing(p, q, e, x):
    """Parameters (t, s) where p + t(q - p) meets e + s(x - e), or None."""
    d = q - p
    f = x - e
    den = geo._cross(d, f)
    if den == 0:
        return None
    rel = e - p
    t = geo._cross(rel, f) / den
    s = geo._cross(rel, d) / den
    if 0 < t < 1 and 0 < s < 1:
        return t, s
    return None


def _loop_segments(oc: geo.Octagon, letter: str):
    """The generator loop of ``letter`` as two Klein segments inside the octagon."""
    k = geo.LETTER_SIDE[letter]
    s = mpmath.mpf(_LOOP_SIDE_PARAM)
    m = oc.klein[k] + s * oc.side_vectors[k]
    g = oc.side_inverse[k]
    m_back = geo.poincare_to_klein(geo._mob(g, geo.klein_to_poincare(m)))
    zero = mpmath.mpc(0)
    return (zero, m), (m_back, zero)


class TwistMap:
    """Automorphism of pi_1 induced by the left Dehn twist about a simple curve."""

    def __init__(self, core: str):
        self.core = canonical(core)
        if self_intersection(self.core) != 0:
            raise NotSimple(f"cannot twist about non-simple {core!r}")
        self._images = {1: self._build(1), -1: self._build(-1)}

    def _build(self, direction: int) -> dict[str, str]:
        g = geodesic(self.core)
        oc = geo.octagon(g.dps)
        cut = g.cutting
        n = len(cut)
        loops = [cut[j:] + cut[:j] for j in range(n)]
        images = {}
        with mpmath.workdps(oc.dps):
            for letter in "aBcD":
                first, second = _loop_segments(oc, letter)
                pieces = []
                for half_index, (p, q) in enumerate((first, second)):
                    hits = []
                    for j, ch in enumerate(g.chords):
                        hit = _segment_crossing(p, q, ch.entry, ch.exit)
                        if hit is None:
                            continue
                        turn = geo._cross(q - p, ch.exit - ch.entry)
                        sign = 1 if turn > 0 else -1
                        hits.append((hit[0], j, sign * direction))
                    hits.sort(key=lambda h: h[0])
                    seq = "".join(loops[j] if eps > 0 else inverse(loops[j]) for _, j, eps in hits)
                    pieces.append(seq)
                    if half_index == 0:
                        pieces.append(letter)
                images[letter] = free_reduce("".join(pieces))
        full = {}
        for letter, img in images.items():
            full[letter] = img
            full[letter.swapcase()] = inverse(img)
        return full

    def image(self, word: str, power: int = 1) -> str:
        """Image of a word (as an element of pi_1) under the power-th twist."""
        if power == 0:
            return word
        table = self._images[1 if power > 0 else -1]
        w = word
        for _ in range(abs(power)):
            w = free_reduce("".join(table[ch] for ch in w))
        return w


@lru_cache(maxsize=4096)
def twist_map(core: str) -> TwistMap:
    return TwistMap(core)


def twist(core, word: str, power: int = 1) -> str:
    """Reduced image of a closed curve under the power-th Dehn twist about ``core``."""
    cw = core.word if isinstance(core, Curve) else core
    if power == 0:
        return reduce(word)
    return reduce(twist_map(canonical(cw)).image(reduce(word), power))


class ChainTwist(enum.IntEnum):
    """Dehn twists about the five standard chain curves."""

    T1 = 1
    T2 = 2
    T3 = 3
    T4 = 4
    T5 = 5

    @property
    def core(self) -> str:
        return CHAIN_WORDS[self.value - 1]


def apply_twist(g: ChainTwist | int | str, w: str, power: int = 1) -> str:
    if isinstance(g, str):
        g = ChainTwist[g]
    g = ChainTwist(g)
    return twist(g.core, w, power)


def apply_twist_word(moves, w: str) -> str:
    """Apply a sequence of (ChainTwist, power) moves, first move first."""
    for g, p in moves:
        w = apply_twist(g, w, p)
    return w


# -- crossing points and surgery ------------------------------------------------


@dataclass(frozen=True)
class Crossing:
    """A transverse intersection point of two geodesics u and v.

    ``u_at``/``v_at`` are (chord index, Klein parameter along that chord);
    ``sign`` is +1 when v crosses u from right to left.
    """

    u_at: tuple
    v_at: tuple
    sign: int


def crossing_points(u, v) -> list[Crossing]:
    """Intersection points of the geodesics of u and v, ordered along u."""
    uw = u.word if isinstance(u, Curve) else u
    vw = v.word if isinstance(v, Curve) else v
    gu, gv = geodesic(uw), geodesic(vw)
    if curve_key(uw) == curve_key(vw):
        return []
    pu, pv = geo.ordered_positions(gu, gv)
    lo = pu.min(axis=1)[:, None]
    hi = pu.max(axis=1)[:, None]
    in_x = (pv[:, 0][None, :] > lo) & (pv[:, 0][None, :] < hi)
    in_y = (pv[:, 1][None, :] > lo) & (pv[:, 1][None, :] < hi)
    pairs = list(zip(*((in_x != in_y).nonzero())))
    out = []
    with mpmath.workdps(max(gu.dps, gv.dps)):
        for ju, jv in pairs:
            cu, cv = gu.chords[ju], gv.chords[jv]
            du = cu.exit - cu.entry
            dv = cv.exit - cv.entry
            den = geo._cross(du, dv)
            rel = cv.entry - cu.entry
            tu = geo._cross(rel, dv) / den
            tv = geo._cross(rel, du) / den
            out.append(Crossing((int(ju), tu), (int(jv), tv), 1 if den > 0 else -1))
    out.sort(key=lambda c: (c.u_at[0], c.u_at[1]))
    return out


def path_word(cut: str, start: tuple, end: tuple) -> str:
    """Letters crossed travelling forward along a geodesic from start to end."""
    j1, t1 = start
    j2, t2 = end
    if j1 == j2 and t2 > t1:
        return ""
    if j2 > j1:
        return cut[j1:j2]
    return cut[j1:] + cut[:j2]


def loop_from(cut: str, at: tuple) -> str:
    """The full geodesic loop read from a point on chord ``at[0]``."""
    j = at[0]
    return cut[j:] + cut[:j]


def try_curve(word: str) -> Curve | None:
    """Curve for ``word`` if it is a non-trivial primitive simple class, else None."""
    try:
        return Curve.from_word(word)
    except (EmptyWord, NonPrimitive, NotSimple):
        return None


def smoothings(u: Curve, v: Curve) -> list[Curve]:
    """Curves obtained by resolving crossings of u and v.

    For two crossings X1, X2 adjacent along u, the arc of u from X1 to X2 is
    closed up with either arc of v (two-arc loops), and additionally all four
    arcs are chained when u and v meet exactly twice.  Only simple essential
    results are kept.
    """
    pts = crossing_points(u, v)
    if len(pts) < 2:
        return []
    cu = geodesic(u.word).cutting
    cv = geodesic(v.word).cutting
    words = []
    for k in range(len(pts)):
        x1, x2 = pts[k], pts[(k + 1) % len(pts)]
        along_u = path_word(cu, x1.u_at, x2.u_at)
        forward_v = path_word(cv, x2.v_at, x1.v_at)
        backward_v = inverse(path_word(cv, x1.v_at, x2.v_at))
        words += [along_u + forward_v, along_u + backward_v]
        if len(pts) == 2:
            other_u = inverse(path_word(cu, x2.u_at, x1.u_at))
            words += [along_u + forward_v + other_u + backward_v, along_u + backward_v + other_u + forward_v]
    found = {}
    for w in words:
        c = try_curve(w)
        if c is not None:
            found.setdefault(c.key, c)
    return sorted(found.values(), key=lambda c: (len(c.word), c.word))
