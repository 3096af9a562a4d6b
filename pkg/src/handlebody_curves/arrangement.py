"""Chord arrangements in the fundamental polygon and the regions they cut out.

Chords come from traced geodesics: straight segments (Klein model) between
two boundary positions ``side + t`` of P.  Chords of one simple curve never
cross; chords of different curves may.  Faces of the arrangement are walked
combinatorially keeping the face on the left, then glued across paired
sides and around the single vertex of the surface.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class AmbiguousPosition(ArithmeticError):
    pass


@dataclass
class Region:
    faces: int
    open_edges: int
    has_vertex: bool

    @property
    def euler(self) -> int:
        return self.faces - self.open_edges + (1 if self.has_vertex else 0)


def ranks(values, min_gap=None):
    """Integer ranks of exact reals; raises when two are indistinguishable."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    r = [0] * len(values)
    for pos, i in enumerate(order):
        r[i] = pos
        if min_gap is not None and pos and abs(values[i] - values[order[pos - 1]]) < min_gap:
            raise AmbiguousPosition("two boundary points coincide at working precision")
    return r


def crossing_matrix(ch1, ch2, same=False):
    """Boolean matrix of interleaving chords; chords are (lo, hi) rank pairs."""
    if not ch1 or not ch2:
        return np.zeros((len(ch1), len(ch2)), dtype=bool)
    a = np.array(ch1, dtype=np.int64)
    b = np.array(ch2, dtype=np.int64)
    lo1, hi1 = a[:, 0:1], a[:, 1:2]
    lo2, hi2 = b[:, 0], b[:, 1]
    in1 = (lo1 < lo2) & (lo2 < hi1)
    in2 = (lo1 < hi2) & (hi2 < hi1)
    m = in1 ^ in2
    if same:
        np.fill_diagonal(m, False)
    return m


def _in_ccw_arc(p, start, end):
    """Is position p strictly inside the ccw arc from start to end (cyclic)?"""
    if start < end:
        return start < p < end
    return p > start or p < end


def regions(N: int, chords, point, pair, min_gap=None):
    """Regions of the closed surface cut along the union of the chords.

    ``chords``: list of (entry, exit) exact positions in [0, N).
    ``point(pos)``: Klein point (x, y) of a boundary position, exact reals.
    ``pair``: side pairing of P.
    Returns a list of Region records.
    """
    n = len(chords)
    # boundary nodes: corners then chord endpoints
    nodes = [(float(k), k, None, None) for k in range(N)]  # (sortkey, exact, chord, end)
    vals = [k for k in range(N)]
    for c, (e, x) in enumerate(chords):
        nodes.append((None, e, c, 0))
        nodes.append((None, x, c, 1))
        vals.append(e)
        vals.append(x)
    rk = ranks(vals, min_gap)
    order = sorted(range(len(nodes)), key=lambda i: rk[i])
    bpos = {i: j for j, i in enumerate(order)}  # node -> boundary index
    M = len(order)
    end_node = {}  # (chord, end) -> boundary index
    for i in range(N, len(nodes)):
        _, _, c, which = nodes[i]
        end_node[(c, which)] = bpos[i]
    corner_at = {bpos[k]: k for k in range(N)}

    # crossings and their order along each chord
    rel = [(rk[N + 2 * c], rk[N + 2 * c + 1]) for c in range(n)]
    lohi = [(min(a, b), max(a, b)) for a, b in rel]
    X = crossing_matrix(lohi, lohi, same=True)
    along: list[list[tuple]] = [[] for _ in range(n)]
    ii, jj = np.nonzero(np.triu(X))
    pts = [(point(e), point(x)) for e, x in chords] if len(ii) else []
    for c, d in zip(ii.tolist(), jj.tolist()):
        tc, td = _intersection_params(pts[c], pts[d])
        along[c].append((tc, d))
        along[d].append((td, c))
    node_on = {}  # (chord, other) -> index of node along chord (1-based; 0 and L+1 are ends)
    for c in range(n):
        along[c].sort(key=lambda z: z[0])
        for idx, (_, d) in enumerate(along[c]):
            node_on[(c, d)] = idx + 1

    def left_points_forward(c, direction, d):
        e, x = rel[c]
        start, end = (x, e) if direction > 0 else (e, x)
        return _in_ccw_arc(rel[d][1], start, end)

    def after_boundary(i):
        j = (i + 1) % M
        if j in corner_at:
            return ("B", j)
        c, which = _endpoint_owner(order[j], nodes)
        if which == 0:
            return ("C", c, 0, 1)
        return ("C", c, len(along[c]), -1)

    def after_chord(dart):
        _, c, piece, direction = dart
        node = piece + 1 if direction > 0 else piece
        L = len(along[c])
        if node == L + 1:
            return ("B", end_node[(c, 1)])
        if node == 0:
            return ("B", end_node[(c, 0)])
        d = along[c][node - 1][1]
        m = node_on[(d, c)]
        if left_points_forward(c, direction, d):
            return ("C", d, m, 1)
        return ("C", d, m - 1, -1)

    face_of: dict = {}
    faces = 0
    all_darts = [("B", i) for i in range(M)]
    for c in range(n):
        for p in range(len(along[c]) + 1):
            all_darts.append(("C", c, p, 1))
            all_darts.append(("C", c, p, -1))
    for d0 in all_darts:
        if d0 in face_of:
            continue
        d = d0
        while d not in face_of:
            face_of[d] = faces
            d = after_boundary(d[1]) if d[0] == "B" else after_chord(d)
        faces += 1

    parent = list(range(faces))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a, b):
        a, b = find(a), find(b)
        if a != b:
            parent[a] = b

    # boundary edges grouped by side, in increasing order
    by_side: list[list[int]] = [[] for _ in range(N)]
    for i in range(M):
        k = int(_exact_of(order[i], nodes)) if i in corner_at else None
        if k is not None:
            side = k
        by_side[side].append(i)
    vertex_faces = set()
    for k in range(N):
        vertex_faces.add(face_of[("B", by_side[k][0])])
        vertex_faces.add(face_of[("B", by_side[k][-1])])
    vf = list(vertex_faces)
    for f in vf[1:]:
        union(vf[0], f)
    edges_of = {}
    for k in range(N):
        kp = pair[k]
        if kp < k:
            continue
        A, B = by_side[k], by_side[kp]
        if len(A) != len(B):
            raise AmbiguousPosition("paired sides carry different crossing counts")
        for r in range(len(A)):
            fa, fb = face_of[("B", A[r])], face_of[("B", B[-1 - r])]
            union(fa, fb)
            edges_of.setdefault(fa, 0)
            edges_of[fa] += 1
    out: dict[int, Region] = {}
    for f in range(faces):
        root = find(f)
        out.setdefault(root, Region(0, 0, False))
        out[root].faces += 1
        out[root].open_edges += edges_of.get(f, 0)
    out[find(vf[0])].has_vertex = True
    return list(out.values())


def _endpoint_owner(node_index, nodes):
    _, _, c, which = nodes[node_index]
    return c, which


def _exact_of(node_index, nodes):
    return nodes[node_index][1]


def _intersection_params(c, d):
    (p1, p2), (q1, q2) = c, d
    rx, ry = p2[0] - p1[0], p2[1] - p1[1]
    sx, sy = q2[0] - q1[0], q2[1] - q1[1]
    den = rx * sy - ry * sx
    qpx, qpy = q1[0] - p1[0], q1[1] - p1[1]
    t = (qpx * sy - qpy * sx) / den
    u = (qpx * ry - qpy * rx) / den
    return t, u
