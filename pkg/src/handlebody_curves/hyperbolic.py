"""Hyperbolic realisation of the closed genus-g surface.

The surface group acts on the hyperboloid model through SO(2,1).  A
fundamental 4g-gon P is cut out by the vertex orbit ``q_k = prefix_k . v`` of a
generic base point ``v`` near the vertex of the regular polygon, so that side
``k`` of P realises the k-th letter of the relator.  Closed geodesics are traced
through P as a cyclic list of chords; chords are straight in the Klein model,
which is where all positions along sides are measured.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import gmpy2
from gmpy2 import mpfr

from . import word_engine as we


class NeedPrecision(ArithmeticError):
    """A numerical margin test failed; the caller retries at higher precision."""


class NotPrimitive(ValueError):
    pass


# ---------------------------------------------------------------- 3x3 helpers


def mat_mul(A, B):
    return tuple(
        tuple(A[i][0] * B[0][j] + A[i][1] * B[1][j] + A[i][2] * B[2][j] for j in range(3))
        for i in range(3)
    )


def mat_vec(A, v):
    return tuple(A[i][0] * v[0] + A[i][1] * v[1] + A[i][2] * v[2] for i in range(3))


def lorentz_inverse(A):
    # A^-1 = J A^T J for A in O(2,1)
    s = (1, -1, -1)
    return tuple(tuple(s[i] * s[j] * A[j][i] for j in range(3)) for i in range(3))


def mink(u, v):
    return u[0] * v[0] - u[1] * v[1] - u[2] * v[2]


def cross(u, v):
    return (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0])


def det3(a, b, c):
    return (
        a[0] * (b[1] * c[2] - b[2] * c[1])
        - a[1] * (b[0] * c[2] - b[2] * c[0])
        + a[2] * (b[0] * c[1] - b[1] * c[0])
    )


def klein(v):
    return (mpfr(1), v[1] / v[0], v[2] / v[0])


def _identity():
    one, zero = mpfr(1), mpfr(0)
    return ((one, zero, zero), (zero, one, zero), (zero, zero, one))


def _frame(p, q):
    """Columns (p, unit tangent towards q, normal) of a positive Lorentz frame."""
    c = mink(p, q)
    u = tuple(q[i] - c * p[i] for i in range(3))
    nu = gmpy2.sqrt(-mink(u, u))
    u = tuple(x / nu for x in u)
    cr = cross(p, u)
    n = (cr[0], -cr[1], -cr[2])
    nn = gmpy2.sqrt(-mink(n, n))
    n = tuple(x / nn for x in n)
    if det3(p, u, n) < 0:
        n = tuple(-x for x in n)
    return tuple(tuple((p, u, n)[j][i] for j in range(3)) for i in range(3))


def _frame_inverse(F):
    # columns are Lorentz-orthonormal with signs (+,-,-)
    s = (1, -1, -1)
    return tuple(tuple(s[i] * F[j][i] * s[j] for j in range(3)) for i in range(3))


def isometry_taking(p, q, p2, q2):
    """Orientation-preserving isometry with p -> p2 and q -> q2 (equal lengths)."""
    return mat_mul(_frame(p2, q2), _frame_inverse(_frame(p, q)))


def hyperboloid_point(x, y):
    d = gmpy2.sqrt(1 - x * x - y * y)
    return (1 / d, x / d, y / d)


# ---------------------------------------------------------------- the group


@dataclass(frozen=True)
class Segment:
    """One chord of a traced geodesic inside P.

    ``entry``/``exit`` are boundary positions ``side + t`` with ``t`` the
    Klein parameter along the side from ``q_side`` to ``q_side+1``.
    """

    entry_side: int
    entry: object
    exit_side: int
    exit: object


class SurfaceGroup:
    """Generators, the polygon P and its side pairings at a fixed precision."""

    def __init__(self, genus: int, prec: int):
        self.genus = genus
        self.prec = prec
        self.N = 4 * genus
        with self.local():
            self._build()

    def local(self):
        """A fresh context manager at this precision (contexts do not nest)."""
        return gmpy2.context(precision=self.prec)

    # relator letter at polygon side k
    def side_letter(self, k: int) -> int:
        return we.relator(self.genus)[k]

    def _build(self):
        g, N = self.genus, self.N
        pi = gmpy2.const_pi()
        cot = gmpy2.cot(pi / N)
        cosh_r = cot * cot
        sinh_r = gmpy2.sqrt(cosh_r * cosh_r - 1)
        reg = []
        for k in range(N):
            th = 2 * pi * k / N + pi / N
            reg.append((cosh_r, sinh_r * gmpy2.cos(th), sinh_r * gmpy2.sin(th)))
        gens: dict[int, tuple] = {}
        C = _identity()
        for i in range(g):
            k = 4 * i

            def pairing(s, t):
                return isometry_taking(reg[s % N], reg[(s + 1) % N], reg[(t + 1) % N], reg[t % N])

            Ci = lorentz_inverse(C)
            M02 = mat_mul(Ci, mat_mul(pairing(k, k + 2), C))
            M13 = mat_mul(Ci, mat_mul(pairing(k + 1, k + 3), C))
            M02i, M13i = lorentz_inverse(M02), lorentz_inverse(M13)
            a = mat_mul(M02i, mat_mul(M13i, M02))
            b = mat_mul(M02i, mat_mul(M13, mat_mul(M02, mat_mul(M13i, M02))))
            gens[2 * i + 1], gens[2 * i + 2] = a, b
            ai, bi = lorentz_inverse(a), lorentz_inverse(b)
            C = mat_mul(C, mat_mul(a, mat_mul(b, mat_mul(ai, bi))))
        for x in list(gens):
            gens[-x] = lorentz_inverse(gens[x])
        self.gens = gens
        self.regular_vertices = reg

        # generic base vertex near the regular one
        kx, ky = reg[0][1] / reg[0][0], reg[0][2] / reg[0][0]
        rad = gmpy2.sqrt(kx * kx + ky * ky)
        v = hyperboloid_point(kx * (1 - mpfr("0.0173") * (1 - rad)), ky * (1 - mpfr("0.0173") * (1 - rad)) + mpfr("0.00731") * (1 - rad))
        rel = we.relator(g)
        verts = [v]
        for k in range(N - 1):
            verts.append(None)
        prefix = _identity()
        for k in range(1, N):
            prefix = mat_mul(prefix, gens[rel[k - 1]])
            verts[k] = mat_vec(prefix, v)
        self.vertices = verts
        self.kverts = [klein(q) for q in verts]
        # side pairings: tile across side k is H[k] P
        pair = [0] * N
        H: list = [None] * N
        Hword: list = [None] * N
        for k in range(N):
            x = rel[k]
            if x < 0:
                continue
            kp = rel.index(-x)
            pair[k], pair[kp] = kp, k
            w = we.free_reduce(rel[:kp] + (-x,) + we.inverse(rel[:k]))
            Hword[kp] = w
            Hword[k] = we.inverse(w)
        for k in range(N):
            H[k] = self.word_matrix(Hword[k])
        self.pair = pair
        self.H = H
        self.Hinv = [lorentz_inverse(h) for h in H]
        self.Hword = Hword
        self.side_class = [0] * N
        for k in range(N):
            self.side_class[k] = abs(rel[k]) - 1
        self.side_sign = [1 if rel[k] > 0 else -1 for k in range(N)]

    def word_matrix(self, w):
        M = _identity()
        for x in w:
            M = mat_mul(M, self.gens[x])
        return M

    # ------------------------------------------------------------ checks

    def interior_angles(self):
        out = []
        with self.local():
            for k in range(self.N):
                p = self.vertices[k]
                a = self.vertices[k - 1]
                b = self.vertices[(k + 1) % self.N]

                def tangent(q):
                    c = mink(p, q)
                    u = tuple(q[i] - c * p[i] for i in range(3))
                    nu = gmpy2.sqrt(-mink(u, u))
                    return tuple(x / nu for x in u)

                ta, tb = tangent(a), tangent(b)
                out.append(gmpy2.acos(-mink(ta, tb)))
        return out

    def is_convex(self) -> bool:
        with self.local():
            kv = self.kverts
            for k in range(self.N):
                for j in range(self.N):
                    if j in (k, (k + 1) % self.N):
                        continue
                    if det3(kv[j], kv[k], kv[(k + 1) % self.N]) <= 0:
                        return False
        return True

    # ------------------------------------------------------------ tracing

    def _locate(self, x):
        """Group element G (as a matrix) with G x in P."""
        G = _identity()
        for _ in range(100000):
            best, bk = x[0], None
            for k in range(self.N):
                y = mat_vec(self.Hinv[k], x)
                if y[0] < best:
                    best, bk = y[0], k
            if bk is None:
                break
            x = mat_vec(self.Hinv[bk], x)
            G = mat_mul(self.Hinv[bk], G)
        for _ in range(1000):
            kv = self.kverts
            worst, wk = 0, None
            for k in range(self.N):
                d = det3(x, kv[k], kv[(k + 1) % self.N])
                if d < worst:
                    worst, wk = d, k
            if wk is None:
                return G
            x = mat_vec(self.Hinv[wk], x)
            G = mat_mul(self.Hinv[wk], G)
        raise NeedPrecision("point location did not settle")

    def trace(self, word):
        """Trace the closed geodesic of ``word`` through P.

        Returns (segments, exits): chords in order along the geodesic and the
        sides through which each chord leaves P.
        """
        with self.local():
            return self._trace(word)

    def _trace(self, word):
        W = self.word_matrix(word)
        tr = W[0][0] + W[1][1] + W[2][2]
        s = tr - 1
        if s <= 2 + mpfr(2) ** (-self.prec // 3):
            raise NotPrimitive("element is not hyperbolic")
        lam = (s + gmpy2.sqrt(s * s - 4)) / 2
        pp = _null_eigenvector(W, lam)
        pm = _null_eigenvector(lorentz_inverse(W), lam)
        x = tuple(pm[i] + pp[i] for i in range(3))
        G = self._locate(x)
        pm, pp = klein(mat_vec(G, pm)), klein(mat_vec(G, pp))
        start = (pm, pp)
        tol = mpfr(2) ** (-(self.prec // 3))
        eps = mpfr(2) ** (-(2 * self.prec // 5))
        kv = self.kverts
        N = self.N
        segs: list[Segment] = []
        exits: list[int] = []
        max_steps = 60 * (len(word) + 2)
        for _ in range(max_steps):
            sv = [det3(kv[k], pm, pp) for k in range(N)]
            cr = []
            for k in range(N):
                a, b = sv[k], sv[(k + 1) % N]
                if abs(a) < eps or abs(b) < eps:
                    raise NeedPrecision("geodesic too close to the vertex")
                if (a > 0) != (b > 0):
                    t = a / (a - b)
                    X = tuple(kv[k][i] + t * (kv[(k + 1) % N][i] - kv[k][i]) for i in range(3))
                    cr.append((mink(X, pm) / mink(X, pp), k, t))
            if len(cr) != 2:
                raise NeedPrecision("line does not meet P in a chord")
            cr.sort()
            (_, ks, ts), (_, ke, te) = cr
            segs.append(Segment(ks, ks + ts, ke, ke + te))
            exits.append(ke)
            hi = self.Hinv[ke]
            pm, pp = klein(mat_vec(hi, pm)), klein(mat_vec(hi, pp))
            if _close(pm, start[0], tol) and _close(pp, start[1], tol):
                break
        else:
            raise NeedPrecision("geodesic did not close")
        # primitivity: the traced loop must have the translation length of W
        Gm = self.word_matrix(self.exit_word(exits))
        tg = Gm[0][0] + Gm[1][1] + Gm[2][2]
        if abs(tg - tr) > tol * abs(tr):
            raise NotPrimitive("word is a proper power")
        return segs, exits

    def exit_word(self, exits):
        w: list[int] = []
        for k in exits:
            w.extend(self.Hword[k])
        return we.free_reduce(w)


def _null_eigenvector(W, lam):
    rows = [tuple(W[i][j] - (lam if i == j else 0) for j in range(3)) for i in range(3)]
    best = None
    for i, j in ((0, 1), (0, 2), (1, 2)):
        c = cross(rows[i], rows[j])
        n = abs(c[0]) + abs(c[1]) + abs(c[2])
        if best is None or n > best[0]:
            best = (n, c)
    v = best[1]
    if v[0] < 0:
        v = tuple(-x for x in v)
    return v


def _close(u, v, tol):
    return abs(u[1] - v[1]) < tol and abs(u[2] - v[2]) < tol


def precision_for(word_length: int) -> int:
    bits = 160 + 24 * word_length
    return ((bits + 63) // 64) * 64


@lru_cache(maxsize=64)
def surface_group(genus: int, prec: int) -> SurfaceGroup:
    return SurfaceGroup(genus, prec)


def trace_word(genus: int, word, prec: int | None = None):
    """Trace with automatic precision escalation."""
    p = prec or precision_for(len(word))
    for _ in range(6):
        G = surface_group(genus, p)
        try:
            segs, exits = G.trace(word)
            return G, segs, exits
        except NeedPrecision:
            p *= 2
    raise NeedPrecision(f"could not trace word of length {len(word)}")
