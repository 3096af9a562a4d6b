"""Intersection points of tight curves and cut-and-paste along them.

Everything here is read off the chords in P: an intersection point is a pair
of crossing chords, the loop of a curve based at a point is the rotation of
its exit sequence starting at the chord through the point, and an arc of one
curve between two points on another is a run of consecutive chords.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import word_engine as we
from .arrangement import _in_ccw_arc, _intersection_params
from .hyperbolic import det3, surface_group
from .surface_model import (
    Component,
    CombinatorialCurve,
    CurveError,
    _retrace,
    _same_class,
    chord_crossings,
    diagonal_edge,
    klein_point,
    raw_curve,
    tighten,
)


@dataclass(frozen=True)
class Point:
    """A transverse intersection of chord ``i`` of A with chord ``j`` of B."""

    i: int
    ti: object  # parameter along chord i, 0 at entry
    j: int
    tj: object
    a_left: bool  # B's forward direction points to the left of A's
    triangle: int  # fan triangle id containing the point


def _prec(*comps):
    return max(c.prec for c in comps)


def points(a: Component, b: Component, g: int) -> list:
    """All intersection points of two tight components, sorted along ``a``."""
    if _same_class(a, b):
        return []
    prec = _prec(a, b)
    a, b = _at_prec(a, prec), _at_prec(b, prec)
    G = surface_group(g, prec)
    out = []
    with G.local():
        pa = [(klein_point(g, prec, s.entry), klein_point(g, prec, s.exit)) for s in a.segments]
        pb = [(klein_point(g, prec, s.entry), klein_point(g, prec, s.exit)) for s in b.segments]
        for i, sa in enumerate(a.segments):
            lo, hi = sorted((sa.entry, sa.exit))
            for j, sb in enumerate(b.segments):
                e_in = lo < sb.entry < hi
                x_in = lo < sb.exit < hi
                if e_in == x_in:
                    continue
                ti, tj = _intersection_params(pa[i], pb[j])
                left = _in_ccw_arc(sb.exit, sa.exit, sa.entry)
                x = pa[i][0][0] + ti * (pa[i][1][0] - pa[i][0][0])
                y = pa[i][0][1] + ti * (pa[i][1][1] - pa[i][0][1])
                out.append(Point(i, ti, j, tj, left, _triangle_at(G, (1, x, y))))
    out.sort(key=lambda p: (p.i, p.ti))
    return out


def _at_prec(c: Component, prec: int) -> Component:
    return c if c.prec >= prec else _retrace(c.genus, c, prec)


def _triangle_at(G, p) -> int:
    kv = G.kverts
    m = 1
    for j in range(2, G.N - 1):
        if det3(p, kv[0], kv[j]) > 0:
            m = j
    return m - 1


# ------------------------------------------------------------ crossing runs


def _split(g: int, seg, tri: int):
    """Crossings of a chord before and after a point in fan triangle ``tri``."""
    cr = chord_crossings(g, seg)
    m = tri + 1
    before, after = [], []
    for e, s in cr[:-1]:
        j = e - 2 * g + 2
        if (s > 0 and j <= m) or (s < 0 and j >= m + 1):
            before.append((e, s))
        else:
            after.append((e, s))
    after.append(cr[-1])
    return before, after


def _loop_crossings(g: int, comp: Component, j: int, tri: int) -> list:
    segs = comp.segments
    before, after = _split(g, segs[j], tri)
    out = list(after)
    n = len(segs)
    for r in range(1, n):
        out += chord_crossings(g, segs[(j + r) % n])
    out += before
    return out


def _reverse(cr):
    return [(e, -s) for e, s in reversed(cr)]


def loop_word(comp: Component, j: int) -> tuple:
    """Word of the loop of ``comp`` based at a point of its chord ``j``."""
    ex = comp.exits
    G = surface_group(comp.genus, comp.prec)
    w: list[int] = []
    for r in range(len(ex)):
        w.extend(G.Hword[ex[(j + r) % len(ex)]])
    return we.free_reduce(w)


def _path_word(comp: Component, j1, t1, j2, t2) -> tuple:
    """Word of the path along ``comp`` from a point on chord j1 to one on j2."""
    ex = comp.exits
    n = len(ex)
    if j1 == j2 and t2 > t1:
        return ()
    G = surface_group(comp.genus, comp.prec)
    w: list[int] = []
    r = j1
    while True:
        w.extend(G.Hword[ex[r]])
        r = (r + 1) % n
        if r == j2:
            break
    return we.free_reduce(w)


# ------------------------------------------------------------ twists


def twist_trace(alpha: CombinatorialCurve, gamma: CombinatorialCurve, k: int) -> CombinatorialCurve:
    """The naive trace of T_gamma^k(alpha): at every crossing turn onto gamma
    and run around it |k| times.  Left turns for k > 0.  Not tight."""
    g = alpha.genus
    seqs = []
    for a in alpha.components:
        pts = []
        for b in gamma.components:
            for p in points(a, b, g):
                pts.append((p, b))
        pts.sort(key=lambda z: (z[0].i, z[0].ti))
        by_chord: dict = {}
        for p, b in pts:
            by_chord.setdefault(p.i, []).append((p, b))
        seq: list = []
        for i, seg in enumerate(a.segments):
            here = by_chord.get(i, [])
            if not here:
                seq += chord_crossings(g, seg)
                continue
            done = 0
            cr = chord_crossings(g, seg)
            diags = cr[:-1]
            for p, b in here:
                before, _ = _split(g, seg, p.triangle)
                seq += before[done:]
                done = len(before)
                loop = _loop_crossings(g, b, p.j, p.triangle)
                forward = p.a_left if k > 0 else not p.a_left
                if not forward:
                    loop = _reverse(loop)
                seq += loop * abs(k)
            seq += diags[done:] + [cr[-1]]
        seqs.append(seq)
    return raw_curve(g, seqs)


def twist(alpha: CombinatorialCurve, gamma: CombinatorialCurve, k: int = 1) -> CombinatorialCurve:
    if k == 0:
        return alpha
    if not gamma.tight or not alpha.tight:
        raise CurveError("twist needs tight curves")
    return tighten(twist_trace(alpha, gamma, k))


# ------------------------------------------------------------ band sums


def band_sum_word(delta: Component, beta: Component, g: int) -> tuple:
    pts = points(delta, beta, g)
    if len(pts) != 1:
        raise CurveError(f"band sum needs exactly one intersection point, found {len(pts)}")
    p = pts[0]
    u = loop_word(delta, p.i)
    v = loop_word(beta, p.j)
    return we.commutator(u, v)


# ------------------------------------------------------------ arcs and waves


@dataclass(frozen=True)
class Arc:
    """An arc of a component of lambda between consecutive points on m.

    ``closures`` are the two words of the arc closed up along either
    complementary arc of the m component.
    """

    lam_component: int
    index: int
    start: Point
    end: Point
    component_ends: tuple
    crossings: int
    closures: tuple


def arcs(lam: CombinatorialCurve, m: CombinatorialCurve) -> list:
    """Arcs of lambda cut along m, in order along each lambda component."""
    g = lam.genus
    out = []
    for li, a in enumerate(lam.components):
        pts = []
        for mi, b in enumerate(m.components):
            pts += [(p, mi) for p in points(a, b, g)]
        pts.sort(key=lambda z: (z[0].i, z[0].ti))
        n = len(pts)
        for r in range(n):
            (p1, m1), (p2, m2) = pts[r], pts[(r + 1) % n]
            lam_w = _path_word(a, p1.i, p1.ti, p2.i, p2.ti) if n > 1 else loop_word(a, p1.i)
            length = _arc_length(a, p1, p2, n)
            closures = ()
            if m1 == m2:
                mc = m.components[m1]
                fwd = _path_word(mc, p2.j, p2.tj, p1.j, p1.tj)
                back = we.inverse(_path_word(mc, p1.j, p1.tj, p2.j, p2.tj))
                closures = (we.cyclic_reduce(lam_w + fwd), we.cyclic_reduce(lam_w + back))
            out.append(Arc(li, r, p1, p2, (m1, m2), length, closures))
    return out


def _arc_length(comp: Component, p1: Point, p2: Point, n: int) -> int:
    if n > 1 and p1.i == p2.i and p2.ti > p1.ti:
        return 0
    nseg = len(comp.segments)
    return ((p2.i - p1.i) % nseg) or nseg
