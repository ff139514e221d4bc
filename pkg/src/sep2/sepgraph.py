"""Finite windows onto the separating curve graph of the genus-2 surface.

Vertices are separating curves; two are joined when they meet exactly four
times.  Every vertex has infinite valence, so a ball is truncated twice: by
the mapping-class word length used to generate curves from the centre and by
the word length of the curves kept.  Distances inside a ball are therefore
upper bounds for distances in the full graph.
"""

from __future__ import annotations

import itertools
import random
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from . import _geometry as geo
from . import surfgroup as sg
from .farey import farey_distance
from .subsurfaces import TopoType
from .surfgroup import Curve


class SameVertex(ValueError):
    pass


class TooSmall(ValueError):
    pass


class NotAHole(ValueError):
    pass


class NotSeparating(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class SepVertex:
    curve: Curve

    def __post_init__(self):
        if not self.curve.separating:
            raise NotSeparating(f"{self.curve.word} is not separating")

    @classmethod
    def of(cls, x) -> "SepVertex":
        if isinstance(x, SepVertex):
            return x
        return cls(x if isinstance(x, Curve) else Curve.from_word(x))

    @property
    def key(self) -> str:
        return self.curve.key

    @property
    def word(self) -> str:
        return self.curve.word

    def __eq__(self, other):
        return isinstance(other, SepVertex) and self.key == other.key

    def __hash__(self):
        return hash(self.key)


def is_adjacent(u, v) -> bool:
    u, v = SepVertex.of(u), SepVertex.of(v)
    if u == v:
        raise SameVertex(f"{u.word} and {v.word} are the same vertex")
    return sg.intersection_number(u.word, v.word) == 4


def _pair_intersections(curves) -> np.ndarray:
    """Symmetric matrix of intersection numbers of distinct curves."""
    geos = [sg.geodesic(c.word) for c in curves]
    n = len(curves)
    out = np.zeros((n, n), dtype=int)
    for i in range(n):
        for j in range(i + 1, n):
            gu, gv = geos[i], geos[j]
            pu, pv = geo.ordered_positions(gu, gv)
            k = geo.count_crossings(pu, pv) * gu.power * gv.power
            out[i, j] = out[j, i] = k
    return out


def _bfs(adj, source) -> dict:
    dist = {source: 0}
    queue = deque([source])
    while queue:
        x = queue.popleft()
        for y in adj[x]:
            if y not in dist:
                dist[y] = dist[x] + 1
                queue.append(y)
    return dist


@dataclass
class TruncatedBall:
    center: str
    vertices: list  # vertex labels (canonical words for curve balls)
    edges: list
    distance: dict  # label -> BFS distance from centre (an upper bound)
    params: dict = field(default_factory=dict)

    @classmethod
    def from_graph(cls, adjacency: dict, center, radius: int | None = None, params=None) -> "TruncatedBall":
        """Ball around ``center`` in an arbitrary graph (used for self-tests)."""
        dist = _bfs(adjacency, center)
        if radius is not None:
            dist = {v: d for v, d in dist.items() if d <= radius}
        verts = sorted(dist, key=lambda v: (dist[v], str(v)))
        keep = set(verts)
        edges = sorted({tuple(sorted((u, v), key=str)) for u in keep for v in adjacency[u] if v in keep}, key=str)
        return cls(center, verts, edges, dist, dict(params or {}))

    def adjacency(self) -> dict:
        adj = {v: [] for v in self.vertices}
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return adj

    def all_pairs(self) -> dict:
        adj = self.adjacency()
        return {v: _bfs(adj, v) for v in self.vertices}

    def to_json(self) -> dict:
        return {
            "center": str(self.center),
            "params": self.params,
            "distances_are": "UPPER BOUND",
            "vertices": [str(v) for v in self.vertices],
            "edges": [[str(u), str(v)] for u, v in self.edges],
            "distance": {str(v): d for v, d in self.distance.items()},
        }


_GENERATORS = [(g, p) for g in sg.ChainTwist for p in (1, -1)]


def orbit_curves(center, mcg_length: int, expand_bound: int | None = None) -> dict:
    """Curves g(center) for chain-twist words g of length <= mcg_length.

    Returns key -> Curve.  ``expand_bound`` optionally stops expanding curves
    whose word is longer (their images are still not generated).
    """
    c0 = SepVertex.of(center).curve.normalized()
    found = {c0.key: c0}
    frontier = [c0]
    for _ in range(mcg_length):
        nxt = []
        for c in frontier:
            if expand_bound is not None and len(c.word) > expand_bound:
                continue
            for g, p in _GENERATORS:
                img = Curve.from_word(sg.apply_twist(g, c.word, p)).normalized()
                if img.key not in found:
                    found[img.key] = img
                    nxt.append(img)
        frontier = sorted(nxt, key=lambda c: c.key)
    return found


def build_ball(center, word_bound: int, radius: int, mcg_length: int, expand_bound: int | None = None) -> TruncatedBall:
    """Separating curves of length <= word_bound in the chain-twist orbit of
    ``center``, joined when they meet four times, cut off at BFS ``radius``."""
    center = SepVertex.of(center)
    params = {"word_bound": word_bound, "radius": radius, "mcg_length": mcg_length, "expand_bound": expand_bound}
    if radius == 0:
        c = center.curve.normalized()
        return TruncatedBall(c.word, [c.word], [], {c.word: 0}, params)
    orbit = orbit_curves(center, mcg_length, expand_bound)
    c0 = center.curve.normalized()
    curves = [c for c in orbit.values() if len(c.word) <= word_bound or c.key == c0.key]
    curves.sort(key=lambda c: (len(c.word), c.key))
    inter = _pair_intersections(curves)
    labels = [c.word for c in curves]
    adj = {w: [] for w in labels}
    for i, j in zip(*np.nonzero(np.triu(inter == 4, 1))):
        adj[labels[i]].append(labels[j])
        adj[labels[j]].append(labels[i])
    params["orbit_size"] = len(orbit)
    params["min_intersection"] = int(inter[np.triu_indices(len(curves), 1)].min()) if len(curves) > 1 else None
    return TruncatedBall.from_graph(adj, c0.word, radius, params)


def _four_point(d, w, x, y, z) -> float:
    s = sorted((d[w][x] + d[y][z], d[w][y] + d[x][z], d[w][z] + d[x][y]), reverse=True)
    return (s[0] - s[1]) / 2


def estimate_delta(ball: TruncatedBall, samples: int = 20000, seed: int = 0) -> dict:
    """Four-point delta over sampled (or all, if fewer) quadruples of the ball.

    Quadruples are assigned to the shell of their farthest vertex from the
    centre; the report lists the maximum per shell and overall.
    """
    verts = list(ball.vertices)
    n = len(verts)
    if n < 4:
        raise TooSmall(f"ball has {n} vertices, need at least 4")
    d = ball.all_pairs()
    for v in verts:
        if len(d[v]) != n:
            raise ValueError("ball graph is disconnected")
    total = n * (n - 1) * (n - 2) * (n - 3) // 24
    rng = random.Random(seed)
    if total <= samples:
        quads = itertools.combinations(verts, 4)
        exhaustive = True
    else:
        quads = (rng.sample(verts, 4) for _ in range(samples))
        exhaustive = False
    shells: dict[int, float] = {}
    counts: dict[int, int] = {}
    best, witness = 0.0, None
    for q in quads:
        val = _four_point(d, *q)
        shell = max(ball.distance[v] for v in q)
        if val > shells.get(shell, -1):
            shells[shell] = val
        counts[shell] = counts.get(shell, 0) + 1
        if val > best or witness is None:
            best, witness = max(best, val), list(q)
    return {
        "delta": best,
        "witness": [str(v) for v in witness],
        "per_shell": {str(r): shells[r] for r in sorted(shells)},
        "quadruples_per_shell": {str(r): counts[r] for r in sorted(counts)},
        "quadruples": min(total, samples) if not exhaustive else total,
        "exhaustive": exhaustive,
        "seed": seed,
        "vertices": n,
        "edges": len(ball.edges),
        "truncation": dict(ball.params),
        "distances_are": "UPPER BOUND",
    }


def projection_distance(chart, u, v) -> int:
    """Farey distance between the projections (closest points of the two sets)."""
    pu, pv = chart.project(u), chart.project(v)
    return min(farey_distance(a, b) for a in pu for b in pv)


def projection_lower_bound(u, v, charts, threshold: int = 0, ball: TruncatedBall | None = None) -> dict:
    """Thresholded sum over the supplied holes of the projection distances."""
    u, v = SepVertex.of(u), SepVertex.of(v)
    terms = []
    for ch in charts:
        if not ch.descriptor.is_hole:
            raise NotAHole(f"chart with boundary {[b.word for b in ch.boundary]} is not a hole")
        dist = 0 if u == v else projection_distance(ch, u.curve, v.curve)
        terms.append(dist)
    total = sum(t for t in terms if t >= threshold)
    out = {"lower_bound": total, "terms": terms, "threshold": threshold, "upper_bound": None}
    if ball is not None:
        w = v.curve.normalized().word
        key_to_label = {Curve.from_word(x).key: x for x in ball.vertices}
        if v.key in key_to_label and u.key == Curve.from_word(ball.center).key:
            out["upper_bound"] = ball.distance.get(key_to_label[v.key])
        elif w in ball.distance:
            out["upper_bound"] = ball.distance[w]
    return out


# -- audits ------------------------------------------------------------------------


def adjacency_scan(curves) -> dict:
    """Intersection statistics over ordered pairs of distinct separating curves."""
    curves = [SepVertex.of(c).curve for c in curves]
    uniq = list({c.key: c for c in curves}.values())
    inter = _pair_intersections(uniq)
    n = len(uniq)
    off = inter[~np.eye(n, dtype=bool)] if n > 1 else np.array([], dtype=int)
    hist = {int(k): int(c) for k, c in zip(*np.unique(off, return_counts=True))}
    small = [
        [uniq[i].word, uniq[j].word, int(inter[i, j])]
        for i in range(n)
        for j in range(i + 1, n)
        if inter[i, j] < 4
    ]
    return {
        "vertices": n,
        "ordered_pairs": n * (n - 1),
        "min_intersection": int(off.min()) if len(off) else None,
        "histogram": hist,
        "below_four": small,
        "adjacent_ordered_pairs": int(np.count_nonzero(off == 4)),
    }


def _inside(desc, c: Curve) -> bool:
    return desc.contains(c)


def _overlap_certificate(h1, h2):
    """A reason the two holes are not disjoint, or None."""
    for b1 in h1.boundary:
        for b2 in h2.boundary:
            if sg.intersection_number(b1.word, b2.word) > 0:
                return ["boundaries-cross", b1.word, b2.word]
    pool = [h1.witness, h2.witness] + list(h1.boundary) + list(h2.boundary)
    for c in pool:
        if _inside(h1, c) and _inside(h2, c):
            return ["shared-curve", c.word]
    for c in h2.boundary:
        if _inside(h1, c):
            return ["boundary-inside", c.word]
    for c in h1.boundary:
        if _inside(h2, c):
            return ["boundary-inside", c.word]
    return None


# Complements of holes in the catalog: S minus an S0,4 or S1,2 hole is a
# union of annuli about its boundary, which contains no subsurface of
# complexity >= 1, so two holes can never be disjoint.
_CATALOG_COMPLEMENT_HAS_HOLE = {TopoType.S04: False, TopoType.S12: False}


def holes_overlap_audit(pairs) -> dict:
    checked = skipped = 0
    disjoint = []
    disagreements = []
    kinds: dict[str, int] = {}
    for h1, h2 in pairs:
        if not (h1.is_hole and h2.is_hole):
            skipped += 1
            continue
        checked += 1
        cert = _overlap_certificate(h1, h2)
        catalog_overlap = not (
            _CATALOG_COMPLEMENT_HAS_HOLE.get(h1.topo_type, True) or _CATALOG_COMPLEMENT_HAS_HOLE.get(h2.topo_type, True)
        )
        if cert is None:
            disjoint.append([h1.to_json(), h2.to_json()])
        else:
            kinds[cert[0]] = kinds.get(cert[0], 0) + 1
        if (cert is not None) != catalog_overlap:
            disagreements.append([h1.to_json(), h2.to_json()])
    return {
        "checked": checked,
        "skipped_non_holes": skipped,
        "disjoint_pairs": disjoint,
        "certificates": kinds,
        "catalog_disagreements": disagreements,
        "ok": not disjoint and not disagreements,
    }
