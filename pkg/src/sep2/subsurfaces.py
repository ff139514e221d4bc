"""Essential subsurfaces of the genus-2 surface and four-holed-sphere charts.

A chart identifies the curves of S minus two disjoint, jointly nonseparating
curves with Farey slopes: three anchors meeting pairwise twice get the slopes
1/0, 0/1 and 1/1, and every other slope is reached by Dehn twists about the
1/0 and 0/1 anchors.  Projections are computed by arc surgery on the points
where a curve crosses the chart's boundary.
"""

from __future__ import annotations

import enum
import threading
from dataclasses import dataclass, field
from functools import lru_cache

from . import surfgroup as sg
from .farey import INFINITY, ZERO, Slope, det
from .surfgroup import Curve


class BadConfiguration(ValueError):
    """The complement of the given curves is not a connected four-holed sphere."""


class NotInSubsurface(ValueError):
    pass


class DisjointFromSubsurface(ValueError):
    pass


class InessentialBoundary(ValueError):
    pass


class TopoType(enum.Enum):
    S04 = "S0,4"
    S11 = "S1,1"
    S12 = "S1,2"
    ANNULUS = "annulus"


_COMPLEXITY = {TopoType.S04: 1, TopoType.S11: 1, TopoType.S12: 2, TopoType.ANNULUS: -1}

# curves pushed into a subsurface to seed anchor searches
PROBE_WORDS = sg.CHAIN_WORDS + ("b", "d", "ab", "cd", "bd", "bc", "ad", "abAB", "aBcD", "abcd")


def _as_curve(x) -> Curve:
    return x if isinstance(x, Curve) else Curve.from_word(x)


def _same(u: Curve, v: Curve) -> bool:
    return u.key == v.key


@dataclass(frozen=True)
class SubsurfaceDescriptor:
    boundary: tuple
    witness: Curve
    complexity: int
    topo_type: TopoType
    is_hole: bool

    def contains(self, alpha) -> bool:
        """Is alpha an essential, non-peripheral curve of this subsurface?"""
        alpha = _as_curve(alpha)
        if self.topo_type is TopoType.ANNULUS:
            return _same(alpha, self.witness)
        for b in self.boundary:
            if _same(alpha, b) or sg.intersection_number(alpha.word, b.word) != 0:
                return False
        if self.topo_type is TopoType.S11:
            # two disjoint essential curves of a one-holed torus are isotopic
            return _same(alpha, self.witness) or sg.intersection_number(alpha.word, self.witness.word) > 0
        return True

    def to_json(self) -> dict:
        return {
            "boundary": [b.word for b in self.boundary],
            "witness": self.witness.word,
            "complexity": self.complexity,
            "topo_type": self.topo_type.value,
            "is_hole": self.is_hole,
        }


def _dedupe(curves):
    out = []
    for c in curves:
        if not any(_same(c, d) for d in out):
            out.append(c)
    return out


def classify_subsurface(boundary, witness) -> SubsurfaceDescriptor:
    """Identify the component of S minus ``boundary`` that contains ``witness``.

    A curve listed twice is read as the two sides of an annulus about it, so
    its complement (not the annulus) is described unless the witness is the
    curve itself.
    """
    given = [_as_curve(b) for b in boundary]
    witness = _as_curve(witness)
    if not given:
        raise InessentialBoundary("empty boundary")
    for c in given:
        if sum(_same(c, d) for d in given) > 2:
            raise InessentialBoundary(f"{c.word} listed more than twice")
    curves = _dedupe(given)
    for i, u in enumerate(curves):
        for v in curves[i + 1 :]:
            if sg.intersection_number(u.word, v.word):
                raise InessentialBoundary(f"boundary curves {u.word}, {v.word} intersect")
    for b in curves:
        if _same(witness, b):
            return SubsurfaceDescriptor(tuple(curves), witness, -1, TopoType.ANNULUS, False)
        if sg.intersection_number(witness.word, b.word):
            raise InessentialBoundary(f"witness {witness.word} crosses boundary {b.word}")
    seps = [c for c in curves if c.separating]
    nonseps = [c for c in curves if not c.separating]
    if len(curves) >= 3 or len(seps) > 1:
        # complement is a union of pairs of pants: nothing essential but annuli
        raise InessentialBoundary("complement has no essential non-annular component")
    if seps:
        topo = TopoType.S11
    elif len(nonseps) == 1:
        topo = TopoType.S12
    else:
        h1, h2 = (tuple(x % 2 for x in c.homology) for c in nonseps)
        if h1 == h2:
            raise InessentialBoundary("homologous boundary pair does not bound an essential subsurface")
        topo = TopoType.S04
    xi = _COMPLEXITY[topo]
    return SubsurfaceDescriptor(tuple(curves), witness, xi, topo, xi >= 1 and not seps)


# -- four-holed sphere charts -------------------------------------------------------


def _boundary_crossings(alpha: Curve, boundary):
    """Crossings of alpha with the boundary curves, in order along alpha.

    Each entry is (alpha position, boundary index, boundary position, side after),
    where side is +1 when alpha leaves to the right of the boundary curve.
    """
    pts = []
    for k, b in enumerate(boundary):
        for x in sg.crossing_points(alpha, b):
            pts.append((x.u_at, k, x.v_at, x.sign))
    pts.sort(key=lambda p: (p[0][0], p[0][1]))
    return pts


def surgery_candidates(alpha: Curve, boundary) -> list[Curve]:
    """All closed-up arc surgeries of alpha along the given boundary multicurve.

    Candidates are returned as simple essential curves without any test of
    whether they avoid the boundary; callers filter.
    """
    pts = _boundary_crossings(alpha, boundary)
    if not pts:
        return []
    cut = sg.geodesic(alpha.word).cutting
    bcuts = [sg.geodesic(b.word).cutting for b in boundary]
    found = {}
    n = len(pts)
    for i in range(n):
        x, y = pts[i], pts[(i + 1) % n]
        arc = sg.path_word(cut, x[0], y[0]) if n > 1 else sg.loop_from(cut, x[0])
        start = (x[1], x[3])
        end = (y[1], -y[3])
        words = []
        if start == end:
            bc = bcuts[x[1]]
            words.append(arc + sg.path_word(bc, y[2], x[2]))
            words.append(arc + sg.inverse(sg.path_word(bc, x[2], y[2])))
        else:
            l1 = sg.loop_from(bcuts[x[1]], x[2])
            l2 = sg.loop_from(bcuts[y[1]], y[2])
            back = sg.inverse(arc)
            for e1 in (l1, sg.inverse(l1)):
                for e2 in (l2, sg.inverse(l2)):
                    words.append(arc + e2 + back + e1)
        for w in words:
            c = sg.try_curve(w)
            if c is not None:
                found.setdefault(c.key, c)
    return sorted(found.values(), key=lambda c: (len(c.word), c.word))


def _inside(c: Curve, boundary) -> bool:
    return all(not _same(c, b) and sg.intersection_number(c.word, b.word) == 0 for b in boundary)


def _descend(anchor: Curve, x: Curve, target: int, boundary, limit: int = 64) -> Curve | None:
    """Surger x along anchor until it meets anchor exactly ``target`` times."""
    for _ in range(limit):
        k = sg.intersection_number(anchor.word, x.word)
        if k == target:
            return x
        best = None
        for z in sg.smoothings(x, anchor):
            if not _inside(z, boundary):
                continue
            kz = sg.intersection_number(anchor.word, z.word)
            if 0 < kz < k and (best is None or kz < best[0]):
                best = (kz, z)
        if best is None:
            return None
        x = best[1]
    return None


def _shortest(curves):
    return min(curves, key=lambda c: (len(c.word), c.word))


@dataclass
class FourHoledSphereChart:
    """Farey coordinates on S minus two disjoint nonseparating curves."""

    descriptor: SubsurfaceDescriptor
    anchors: dict
    _twist_sign: dict = field(default_factory=dict, repr=False)
    _table: dict = field(default_factory=dict, repr=False)
    _lock: threading.RLock = field(default_factory=threading.RLock, repr=False)

    @property
    def boundary(self):
        return self.descriptor.boundary

    def anchor(self, s: Slope) -> Curve:
        return self.anchors[s]

    # slope <-> curve ---------------------------------------------------------

    def contains(self, alpha) -> bool:
        return _inside(_as_curve(alpha), self.boundary)

    def curve_to_slope(self, alpha) -> Slope:
        alpha = _as_curve(alpha)
        if not self.contains(alpha):
            raise NotInSubsurface(f"{alpha.word} is not a curve of this four-holed sphere")
        i_inf = sg.intersection_number(alpha.word, self.anchors[INFINITY].word)
        i_zero = sg.intersection_number(alpha.word, self.anchors[ZERO].word)
        i_one = sg.intersection_number(alpha.word, self.anchors[Slope(1, 1)].word)
        q, p = i_inf // 2, i_zero // 2
        if p == 0 or q == 0:
            return Slope(p, q) if (p or q) else INFINITY
        if 2 * abs(p - q) == i_one:
            return Slope(p, q)
        if 2 * (p + q) == i_one:
            return Slope(-p, q)
        raise NotInSubsurface(f"intersections ({i_inf}, {i_zero}, {i_one}) are not those of a slope")

    def _twist(self, which: Slope, word: str, power: int) -> Curve:
        core = self.anchors[which].word
        return Curve.from_word(sg.twist(core, word, power * self._twist_sign[which])).normalized()

    def slope_to_curve(self, s: Slope) -> Curve:
        with self._lock:
            return self._lookup(s)

    def _lookup(self, s: Slope) -> Curve:
        chain = []
        cur = s
        while cur not in self._table:
            p, q = cur.p, cur.q
            if abs(p) > q:
                # tau_inf^e : p/q -> (p + 2eq)/q, pick e to shrink |p|
                e = -1 if p > 0 else 1
                chain.append((cur, INFINITY, e))
                cur = Slope(p + 2 * e * q, q)
            elif abs(p) < q:
                e = -1 if p > 0 else 1
                chain.append((cur, ZERO, e))
                cur = Slope(p, q + 2 * e * p)
            else:  # -1/1
                chain.append((cur, INFINITY, 1))
                cur = Slope(p + 2 * q, q)
        curve = self._table[cur]
        for slope, which, e in reversed(chain):
            curve = self._twist(which, curve.word, -e)
            self._table[slope] = curve
        return self._table[s]

    def project(self, alpha) -> set:
        """Slopes of the subsurface projection of alpha."""
        alpha = _as_curve(alpha)
        if self.contains(alpha):
            return {self.curve_to_slope(alpha)}
        if all(sg.intersection_number(alpha.word, b.word) == 0 for b in self.boundary):
            raise DisjointFromSubsurface(f"{alpha.word} misses the subsurface")
        out = set()
        for c in surgery_candidates(alpha, self.boundary):
            if self.contains(c):
                out.add(self.curve_to_slope(c))
        return out

    def to_json(self, slopes=()) -> dict:
        return {
            "descriptor": self.descriptor.to_json(),
            "anchors": {str(s): c.word for s, c in self.anchors.items()},
            "table": {str(s): self.slope_to_curve(s).word for s in slopes},
        }


def complement_chart(gi, gj, meridian=None, longitude=None) -> FourHoledSphereChart:
    """Chart for S minus the disjoint nonseparating curves gi, gj.

    ``meridian`` optionally fixes the 1/0 anchor (it must lie in the
    complement); otherwise the shortest chain or probe curve inside is used.
    ``longitude`` (only together with ``meridian``) fixes the 0/1 anchor and
    must meet the meridian twice.
    """
    gi, gj = _as_curve(gi), _as_curve(gj)
    if _same(gi, gj):
        raise BadConfiguration("the two curves are isotopic")
    if gi.separating or gj.separating:
        raise BadConfiguration("boundary curves must be nonseparating")
    if sg.intersection_number(gi.word, gj.word):
        raise BadConfiguration("boundary curves intersect")
    if tuple(x % 2 for x in gi.homology) == tuple(x % 2 for x in gj.homology):
        raise BadConfiguration("homologous curves: complement is disconnected")
    boundary = (gi, gj)
    if longitude is not None:
        if meridian is None:
            raise ValueError("longitude requires a meridian")
        a_inf, a_zero = _as_curve(meridian), _as_curve(longitude)
        for c in (a_inf, a_zero):
            if not _inside(c, boundary):
                raise BadConfiguration(f"{c.word} is not inside the complement")
        if sg.intersection_number(a_inf.word, a_zero.word) != 2:
            raise BadConfiguration("meridian and longitude must meet twice")
        return _finish_chart(boundary, a_inf, a_zero)

    pool = {}
    for w in PROBE_WORDS:
        c = sg.try_curve(w)
        if c is None:
            continue
        cands = [c] if _inside(c, boundary) else [z for z in surgery_candidates(c, boundary) if _inside(z, boundary)]
        for z in cands:
            pool.setdefault(z.key, z)
    if not pool and meridian is None:
        raise BadConfiguration("no curve found in the complement")
    pool = sorted(pool.values(), key=lambda c: (len(c.word), c.word))

    if meridian is not None:
        a_inf = _as_curve(meridian)
        if not _inside(a_inf, boundary):
            raise BadConfiguration(f"meridian {a_inf.word} is not inside the complement")
    else:
        chain_inside = [c for c in pool if c.word in sg.CHAIN_WORDS]
        a_inf = chain_inside[0] if chain_inside else pool[0]

    meets = [(sg.intersection_number(a_inf.word, c.word), c) for c in pool]
    meets = [(k, c) for k, c in meets if k > 0]
    if not meets:
        raise BadConfiguration("could not find a curve crossing the 1/0 anchor")
    twos = [c for k, c in meets if k == 2]
    if twos:
        a_zero = _shortest(twos)
    else:
        a_zero = None
        for k, c in sorted(meets, key=lambda kc: (kc[0], len(kc[1].word))):
            a_zero = _descend(a_inf, c, 2, boundary)
            if a_zero is not None:
                break
        if a_zero is None:
            raise BadConfiguration("surgery descent did not reach a Farey neighbour")
    return _finish_chart(boundary, a_inf, a_zero)


def _finish_chart(boundary, a_inf: Curve, a_zero: Curve) -> FourHoledSphereChart:
    ones = [
        z
        for z in sg.smoothings(a_inf, a_zero)
        if _inside(z, boundary)
        and sg.intersection_number(z.word, a_inf.word) == 2
        and sg.intersection_number(z.word, a_zero.word) == 2
    ]
    if not ones:
        raise BadConfiguration("anchor pair has no triangle completion")
    a_one = _shortest(ones)

    descriptor = classify_subsurface(list(boundary), a_inf)
    anchors = {INFINITY: a_inf.normalized(), ZERO: a_zero.normalized(), Slope(1, 1): a_one.normalized()}
    chart = FourHoledSphereChart(descriptor, anchors)
    chart._table.update(anchors)
    # orient the two twists so that they act as p/q -> (p+2q)/q and p/q -> p/(q+2p)
    chart._twist_sign = {INFINITY: 1, ZERO: 1}
    s = chart.curve_to_slope(Curve.from_word(sg.twist(a_inf.word, a_zero.word, 1)))
    chart._twist_sign[INFINITY] = 1 if s == Slope(2, 1) else -1
    s = chart.curve_to_slope(Curve.from_word(sg.twist(a_zero.word, a_inf.word, 1)))
    chart._twist_sign[ZERO] = 1 if s == Slope(1, 2) else -1
    return chart


@lru_cache(maxsize=512)
def _chart_by_words(gi: str, gj: str, meridian, longitude) -> FourHoledSphereChart:
    return complement_chart(gi, gj, meridian, longitude)


def chart_for(gi, gj, meridian=None, longitude=None) -> FourHoledSphereChart:
    """Memoized complement_chart keyed by the curves' free homotopy classes."""
    words = [None if x is None else sg.canonical(_as_curve(x).key) for x in (gi, gj, meridian, longitude)]
    return _chart_by_words(*words)


def determinant_violations(chart: FourHoledSphereChart, slopes) -> list:
    """Pairs (u, v, i, 2|det|) breaking the intersection law on the given slopes."""
    curves = {s: chart.slope_to_curve(s) for s in slopes}
    bad = []
    slopes = list(slopes)
    for i, u in enumerate(slopes):
        for v in slopes[i:]:
            k = sg.intersection_number(curves[u].word, curves[v].word)
            if k != 2 * abs(det(u, v)):
                bad.append((u, v, k, 2 * abs(det(u, v))))
    return bad
