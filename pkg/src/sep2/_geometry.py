"""Hyperbolic realization of the genus-2 surface group.

The closed genus-2 surface is modelled as a convex hyperbolic octagon whose
sides are glued by the pattern ``a B A b c D C d`` (side ``k`` carries the
letter of the deck transformation taking the fundamental tile to its
neighbour across that side).  The octagon is a small, fixed, generic
perturbation of the regular one, so closed geodesics avoid the vertex and
cross each other away from the sides.

Every free homotopy class of closed curves has a unique closed geodesic.  We
trace it through the tiling and record the chords it cuts in the octagon.
Two geodesics meet once for every pair of chords whose endpoints interleave
along the octagon boundary, which gives exact geometric intersection numbers
for curves in minimal position.

All arithmetic is done with mpmath at a precision that grows with the word
length; the chord endpoints are then stored both as high precision Klein
coordinates and as float boundary positions.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass

import mpmath
import numpy as np

SIDE_LETTERS = "aBAbcDCd"
LETTER_SIDE = {ch: k for k, ch in enumerate(SIDE_LETTERS)}

# Perturbation of the regular octagon: (d_radius, d_angle) per vertex.  The
# radii of vertices 0, 2, 3, 5, 6 are then re-solved so that paired sides have
# equal length and the angles sum to 2*pi; the data here is exact, so the
# octagon is the same at every precision.
_PERTURB = (
    ("0.0031", "0.0063"),
    ("-0.0022", "-0.0049"),
    ("-0.0027", "0.0028"),
    ("0.0017", "0.0047"),
    ("0.0023", "-0.0039"),
    ("-0.0012", "0.0051"),
    ("-0.0037", "-0.0061"),
    ("0.0026", "0.0027"),
)
_SOLVED = (0, 2, 3, 5, 6)

PRECISION_TIERS = (80, 160, 320, 640, 1280, 2560)


class DegenerateGeometry(RuntimeError):
    """A geodesic met a vertex of the octagon or two chords share an endpoint."""


class GeodesicTrace(RuntimeError):
    """Tracing a geodesic through the tiling did not close up."""


def _cross(x, y):
    return x.real * y.imag - x.imag * y.real


def _mob(m, z):
    a, b, c, d = m
    return (a * z + b) / (c * z + d)


def _mul(m, n):
    a, b, c, d = m
    e, f, g, h = n
    return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)


def _inv(m):
    a, b, c, d = m
    return (d, -b, -c, a)


def _to_origin(v):
    # z -> (z - v) / (1 - conj(v) z), normalised to determinant 1
    s = mpmath.sqrt(1 - abs(v) ** 2)
    return (1 / s, -v / s, -mpmath.conj(v) / s, 1 / s)


def _frame(p, q):
    """Isometry sending p to 0 and q onto the positive real axis."""
    m = _to_origin(p)
    w = _mob(m, q)
    u = mpmath.exp(-1j * mpmath.arg(w) / 2)
    rot = (u, mpmath.mpc(0), mpmath.mpc(0), 1 / u)
    return _mul(rot, m)


def _hdist(u, v):
    return mpmath.acosh(1 + 2 * abs(u - v) ** 2 / ((1 - abs(u) ** 2) * (1 - abs(v) ** 2)))


def _interior_angle(vs, k):
    m = _to_origin(vs[k])
    prev = _mob(m, vs[k - 1])
    nxt = _mob(m, vs[(k + 1) % 8])
    return mpmath.arg(prev / nxt)


def poincare_to_klein(z):
    return 2 * z / (1 + abs(z) ** 2)


def klein_to_poincare(k):
    return k / (1 + mpmath.sqrt(1 - abs(k) ** 2))


class Octagon:
    """Fundamental octagon and side pairings at one working precision."""

    def __init__(self, dps: int, seed_vertices=None):
        self.dps = dps
        with mpmath.workdps(dps + 10):
            vs = self._solve(seed_vertices)
            self.vertices = vs
            self.klein = [poincare_to_klein(v) for v in vs]
            ta = self._pairing((vs[3], vs[2]), (vs[0], vs[1]))
            tb = self._pairing((vs[4], vs[3]), (vs[1], vs[2]))
            tc = self._pairing((vs[7], vs[6]), (vs[4], vs[5]))
            td = self._pairing((vs[0], vs[7]), (vs[5], vs[6]))
            # neighbour across side k is side_matrix[k] applied to the tile
            self.side_matrix = [ta, tb, _inv(ta), _inv(tb), tc, td, _inv(tc), _inv(td)]
            self.side_inverse = [_inv(m) for m in self.side_matrix]
            self.letter_matrix = {SIDE_LETTERS[k]: self.side_matrix[k] for k in range(8)}
            self.side_vectors = [self.klein[(k + 1) % 8] - self.klein[k] for k in range(8)]

    @staticmethod
    def _regular():
        r = mpmath.sqrt(mpmath.cos(mpmath.pi / 4))
        return [(r, mpmath.pi / 8 + k * mpmath.pi / 4) for k in range(8)]

    def _solve(self, seed):
        base = self._regular()
        radii = [base[k][0] + mpmath.mpf(_PERTURB[k][0]) for k in range(8)]
        angles = [base[k][1] + mpmath.mpf(_PERTURB[k][1]) for k in range(8)]

        def build(x):
            rr = list(radii)
            for k, v in zip(_SOLVED, x):
                rr[k] = v
            return [rr[k] * mpmath.expj(angles[k]) for k in range(8)]

        def equations(*x):
            vs = build(x)
            d = [_hdist(vs[k], vs[(k + 1) % 8]) for k in range(8)]
            total = sum(_interior_angle(vs, k) for k in range(8))
            return [d[0] - d[2], d[1] - d[3], d[4] - d[6], d[5] - d[7], total - 2 * mpmath.pi]

        if seed is None:
            x0 = [radii[k] for k in _SOLVED]
        else:
            x0 = [abs(seed[k]) for k in _SOLVED]
        x = mpmath.findroot(equations, x0)
        return build([x[i] for i in range(5)])

    @staticmethod
    def _pairing(src, dst):
        m1 = _frame(*src)
        m2 = _frame(*dst)
        return _mul(_inv(m2), m1)

    def word_matrix(self, word: str):
        m = (mpmath.mpc(1), mpmath.mpc(0), mpmath.mpc(0), mpmath.mpc(1))
        for ch in word:
            m = _mul(m, self.letter_matrix[ch])
        return m

    def contains(self, kz) -> bool:
        for k in range(8):
            if _cross(self.side_vectors[k], kz - self.klein[k]) < 0:
                return False
        return True

    def chord_hits(self, e1, e2):
        """Sides crossed by the Klein line through e1, e2 as (t, side, s) sorted by t."""
        d = e2 - e1
        hits = []
        for k in range(8):
            f = self.side_vectors[k]
            den = _cross(d, f)
            if den == 0:
                continue
            rel = self.klein[k] - e1
            s = _cross(rel, d) / den
            if s < 0 or s > 1:
                continue
            t = _cross(rel, f) / den
            hits.append((t, k, s))
        hits.sort(key=lambda h: h[0])
        return hits


_oct_lock = threading.Lock()
_octagons: dict[int, Octagon] = {}


def octagon(dps: int) -> Octagon:
    tier = next((t for t in PRECISION_TIERS if t >= dps), None)
    if tier is None:
        raise ValueError(f"precision {dps} beyond supported range")
    with _oct_lock:
        if tier not in _octagons:
            lower = [t for t in _octagons if t < tier]
            seed = _octagons[max(lower)].vertices if lower else None
            _octagons[tier] = Octagon(tier, seed)
        return _octagons[tier]


@dataclass(frozen=True)
class Chord:
    """One passage of a geodesic through the octagon (Klein coordinates)."""

    entry: object
    exit: object
    entry_pos: float
    exit_pos: float
    entry_side: int
    exit_side: int
    entry_exact: object = None
    exit_exact: object = None


@dataclass(frozen=True)
class Geodesic:
    """Closed geodesic of a primitive class; chord j exits with letter cutting[j]."""

    cutting: str
    chords: tuple
    power: int
    dps: int
    translation: object

    @property
    def positions(self) -> np.ndarray:
        return np.array([(c.entry_pos, c.exit_pos) for c in self.chords], dtype=float)

    @property
    def exact_positions(self) -> list:
        return [(c.entry_exact, c.exit_exact) for c in self.chords]


def _fixed_points(m):
    """(repelling, attracting) fixed points on the unit circle of a hyperbolic map."""
    a, b, c, d = m
    # c z^2 + (d - a) z - b = 0
    disc = mpmath.sqrt((d - a) ** 2 + 4 * b * c)
    z1 = (-(d - a) + disc) / (2 * c)
    z2 = (-(d - a) - disc) / (2 * c)
    # |derivative| = 1/|cz+d|^2 ; attracting point has |cz+d| > 1
    if abs(c * z1 + d) > abs(c * z2 + d):
        return z2, z1
    return z1, z2


def _position(side, s) -> float:
    return side + float(s)


def trace_geodesic(word: str, dps: int | None = None) -> Geodesic:
    """Trace the closed geodesic freely homotopic to ``word`` (non-empty)."""
    n = max(len(word), 4)
    if dps is None:
        dps = 60 + 4 * n
    oc = octagon(dps)
    with mpmath.workdps(oc.dps):
        m = oc.word_matrix(word)
        tr = m[0] + m[3]
        if abs(tr.real) <= 2 + mpmath.mpf(10) ** (-oc.dps // 3):
            raise DegenerateGeometry(f"word {word!r} is not hyperbolic")
        x_back, x_fwd = _fixed_points(m)
        e1, e2 = _pull_into_tile(oc, x_back, x_fwd)
        start = (e1, e2)
        tol = mpmath.mpf(10) ** (-(oc.dps // 2) + 2)
        vertex_eps = mpmath.mpf(10) ** (-(oc.dps // 4))
        chords = []
        letters = []
        limit = 6 * n + 40
        while True:
            hits = oc.chord_hits(e1, e2)
            if len(hits) < 2:
                raise GeodesicTrace(f"geodesic of {word!r} left the octagon")
            t_in, k_in, s_in = hits[0]
            t_out, k_out, s_out = hits[-1]
            for _, _, s in (hits[0], hits[-1]):
                if s < vertex_eps or s > 1 - vertex_eps:
                    raise DegenerateGeometry(f"geodesic of {word!r} passes a vertex")
            p_in = e1 + t_in * (e2 - e1)
            p_out = e1 + t_out * (e2 - e1)
            chords.append(
                Chord(
                    p_in, p_out, _position(k_in, s_in), _position(k_out, s_out), k_in, k_out, k_in + s_in, k_out + s_out
                )
            )
            letters.append(SIDE_LETTERS[k_out])
            g = oc.side_inverse[k_out]
            e1, e2 = _mob(g, e1), _mob(g, e2)
            if abs(e1 - start[0]) < tol and abs(e2 - start[1]) < tol:
                break
            if len(chords) > limit:
                raise GeodesicTrace(f"geodesic of {word!r} did not close after {limit} steps")
        cutting = "".join(letters)
        mp_root = oc.word_matrix(cutting)
        root_len = 2 * mpmath.acosh(abs((mp_root[0] + mp_root[3]).real) / 2)
        full_len = 2 * mpmath.acosh(abs(tr.real) / 2)
        power = int(mpmath.nint(full_len / root_len))
    if len(cutting) > n and 60 + 4 * len(cutting) > dps:
        return trace_geodesic(word, 60 + 4 * len(cutting))
    return Geodesic(cutting, tuple(chords), power, oc.dps, root_len)


def _pull_into_tile(oc: Octagon, x_back, x_fwd):
    """Translate the geodesic (x_back, x_fwd) so that it crosses the octagon."""
    e1, e2 = x_back, x_fwd
    target = (e1 + e2) / 2  # Klein point of the geodesic nearest the origin
    start = mpmath.mpc(0)
    steps = 0
    while not oc.contains(target):
        hits = oc.chord_hits(start, target)
        # the segment from start to target leaves the tile at its largest t <= 1
        if len(hits) < 2:
            raise GeodesicTrace("lost the segment while locating the geodesic")
        t, k, s = hits[-1]
        g = oc.side_inverse[k]
        e1, e2 = _mob(g, e1), _mob(g, e2)
        cross_pt = start + t * (target - start)
        target = poincare_to_klein(_mob(g, klein_to_poincare(target)))
        start = poincare_to_klein(_mob(g, klein_to_poincare(cross_pt)))
        steps += 1
        if steps > 10000:
            raise GeodesicTrace("could not locate geodesic")
    return e1, e2


def count_crossings(p: np.ndarray, q: np.ndarray) -> int:
    """Number of chord pairs (one from each array) whose endpoints interleave."""
    if len(p) == 0 or len(q) == 0:
        return 0
    lo = np.minimum(p[:, 0], p[:, 1])[:, None]
    hi = np.maximum(p[:, 0], p[:, 1])[:, None]
    x = q[:, 0][None, :]
    y = q[:, 1][None, :]
    inside_x = (x > lo) & (x < hi)
    inside_y = (y > lo) & (y < hi)
    return int(np.count_nonzero(inside_x != inside_y))


def check_separation(p: np.ndarray, q: np.ndarray, eps: float = 1e-11) -> None:
    allpos = np.sort(np.concatenate([p.ravel(), q.ravel()]))
    if len(allpos) > 1 and np.min(np.diff(allpos)) < eps:
        raise DegenerateGeometry("chord endpoints too close to order reliably")


def separated(p: np.ndarray, q: np.ndarray, eps: float = 1e-11) -> bool:
    allpos = np.sort(np.concatenate([p.ravel(), q.ravel()]))
    return len(allpos) < 2 or bool(np.min(np.diff(allpos)) >= eps)


def ranked_positions(*geodesics) -> list[np.ndarray]:
    """Endpoint arrays replaced by their ranks in the exact boundary order.

    Used when float positions are too close to compare; ties closer than the
    working precision of the coarsest geodesic raise DegenerateGeometry.
    """
    dps = min(g.dps for g in geodesics)
    tol = mpmath.mpf(10) ** (-(dps // 2))
    flat = []
    for gi, g in enumerate(geodesics):
        for j, (x, y) in enumerate(g.exact_positions):
            flat.append((x, gi, j, 0))
            flat.append((y, gi, j, 1))
    flat.sort(key=lambda e: e[0])
    for u, v in zip(flat, flat[1:]):
        if v[0] - u[0] < tol:
            raise DegenerateGeometry("chord endpoints coincide to working precision")
    out = [np.zeros((len(g.chords), 2)) for g in geodesics]
    for rank, (_, gi, j, end) in enumerate(flat):
        out[gi][j, end] = rank
    return out


def ordered_positions(gu, gv=None):
    """Position arrays safe for interleaving tests (float, or exact ranks)."""
    pu = gu.positions
    pv = gv.positions if gv is not None else pu[:0]
    if separated(pu, pv):
        return pu, (pv if gv is not None else pu)
    if gv is None:
        (r,) = ranked_positions(gu)
        return r, r
    return tuple(ranked_positions(gu, gv))


def self_crossings(p: np.ndarray) -> int:
    return count_crossings(p, p) // 2
