"""Farey graph arithmetic on Q u {1/0}."""

from __future__ import annotations

import enum
import math
from collections import deque
from dataclasses import dataclass
from typing import Iterator


class NotAdjacent(ValueError):
    """The two slopes are not joined by a Farey edge."""


@dataclass(frozen=True, order=True)
class Slope:
    """Reduced fraction p/q with q >= 0; infinity is exactly 1/0."""

    p: int
    q: int

    def __post_init__(self):
        p, q = int(self.p), int(self.q)
        if p == 0 and q == 0:
            raise ValueError("0/0 is not a slope")
        if q < 0 or (q == 0 and p < 0):
            p, q = -p, -q
        g = math.gcd(p, q)
        object.__setattr__(self, "p", p // g)
        object.__setattr__(self, "q", q // g)

    @classmethod
    def parse(cls, text: str) -> "Slope":
        text = text.strip()
        if text in ("inf", "oo", "infinity"):
            return INFINITY
        if "/" in text:
            p, q = text.split("/")
            return cls(int(p), int(q))
        return cls(int(text), 1)

    @property
    def height(self) -> int:
        return max(abs(self.p), self.q)

    def __str__(self):
        return f"{self.p}/{self.q}"


INFINITY = Slope(1, 0)
ZERO = Slope(0, 1)


class ParityClass(enum.Enum):
    OO = "odd/odd"
    OE = "odd/even"
    EO = "even/odd"


def det(a: Slope, b: Slope) -> int:
    return a.p * b.q - a.q * b.p


def farey_adjacent(a: Slope, b: Slope) -> bool:
    return abs(det(a, b)) == 1


def _check_adjacent(a: Slope, b: Slope) -> None:
    if abs(det(a, b)) != 1:
        raise NotAdjacent(f"{a} and {b} are not Farey neighbours")


def mediant(a: Slope, b: Slope) -> Slope:
    """(p+r)/(q+s) on the stored representatives (q, s >= 0, infinity = 1/0)."""
    _check_adjacent(a, b)
    return Slope(a.p + b.p, a.q + b.q)


def farey_difference(a: Slope, b: Slope) -> Slope:
    """(p-r)/(q-s), normalized; equal denominators give 1/0."""
    _check_adjacent(a, b)
    return Slope(a.p - b.p, a.q - b.q)


def triangle_completions(a: Slope, b: Slope) -> tuple[Slope, Slope]:
    """The two slopes forming a Farey triangle with a and b (mediant first)."""
    return mediant(a, b), farey_difference(a, b)


def parity_class(a: Slope) -> ParityClass:
    if a.p % 2 and a.q % 2:
        return ParityClass.OO
    if a.p % 2:
        return ParityClass.OE
    return ParityClass.EO


def _to_infinity(a: Slope):
    """Matrix (s, -r, -q, p) in SL2(Z) sending a to 1/0."""
    p, q = a.p, a.q
    # extended Euclid: p*s - q*r = 1
    g, x, y = _egcd(p, q)
    # p*x + q*y = g = 1  ->  s = x, r = -y
    s, r = x, -y
    return (s, -r, -q, p)


def _egcd(a: int, b: int):
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        k, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - k * x1
        y0, y1 = y1, y0 - k * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def _act(m, p: int, q: int) -> tuple[int, int]:
    a, b, c, d = m
    return a * p + b * q, c * p + d * q


def _inverse(m):
    a, b, c, d = m
    return (d, -b, -c, a)


def _ladder(x: Slope) -> list[Slope]:
    """Vertices of the Farey triangles crossed by the vertical line from 1/0 to x."""
    if x.q <= 1:
        return [INFINITY, x] if x != INFINITY else [INFINITY]
    n = x.p // x.q
    left, right = Slope(n, 1), Slope(n + 1, 1)
    verts = [INFINITY, left, right]
    while True:
        med = Slope(left.p + right.p, left.q + right.q)
        verts.append(med)
        if med == x:
            return verts
        if x.p * med.q < med.p * x.q:
            right = med
        else:
            left = med


def farey_geodesic(a: Slope, b: Slope) -> list[Slope]:
    """A shortest Farey path from a to b (deterministic tie-breaking)."""
    if a == b:
        return [a]
    m = _to_infinity(a)
    target = Slope(*_act(m, b.p, b.q))
    verts = _ladder(target)
    key = {v: (v.q, abs(v.p), v.p) for v in verts}
    order = sorted(verts, key=key.get)
    parent = {INFINITY: None}
    queue = deque([INFINITY])
    while queue:
        v = queue.popleft()
        if v == target:
            break
        for w in order:
            if w not in parent and farey_adjacent(v, w):
                parent[w] = v
                queue.append(w)
    path = []
    v = target
    while v is not None:
        path.append(v)
        v = parent[v]
    path.reverse()
    back = _inverse(m)
    return [Slope(*_act(back, v.p, v.q)) for v in path]


def farey_distance(a: Slope, b: Slope) -> int:
    return len(farey_geodesic(a, b)) - 1


def set_distance(xs, ys) -> int:
    """Diameter of the union of two finite slope sets."""
    pts = list(dict.fromkeys(list(xs) + list(ys)))
    best = 0
    for i, u in enumerate(pts):
        for v in pts[i + 1 :]:
            best = max(best, farey_distance(u, v))
    return best


def enumerate_triangles(bound: int) -> Iterator[tuple[Slope, Slope, Slope]]:
    """Every Farey triangle whose vertices all have height <= bound, once each."""
    if bound < 1:
        raise ValueError("bound must be positive")
    root = (INFINITY, ZERO, Slope(1, 1))
    yield root
    # (edge endpoints, opposite vertex already used)
    stack = [(root[0], root[1], root[2]), (root[1], root[2], root[0]), (root[0], root[2], root[1])]
    while stack:
        x, y, used = stack.pop()
        c1, c2 = triangle_completions(x, y)
        new = c2 if c1 == used else c1
        if new.height > bound:
            continue
        yield (x, y, new)
        stack.append((x, new, y))
        stack.append((new, y, x))
