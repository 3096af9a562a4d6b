"""The standard closed surface, its one-vertex triangulation, and traced curves.

The triangulation is the fan of the fundamental 4g-gon P from the corner q0.
Edge ids: ``0 .. 2g-1`` are the paired side classes (id ``2i-2`` is the side
labelled ``a_i``, ``2i-1`` the side labelled ``b_i``), ``2g + j - 2`` is the
diagonal q0 q_j for ``j = 2 .. 4g-2``.

Edge orientations: a diagonal runs from q0 to q_j; a side class runs along
its positively labelled side of P from q_{k+1} to q_k.  A crossing is
positive when it goes from the right of the edge to its left.  Positive
diagonal crossings therefore step from triangle ``j-2`` to ``j-1`` and positive
side crossings leave P through the positively labelled side.

Tight curves are closed geodesics of a fixed hyperbolic metric, traced
through P as chords; they are automatically in minimal position with each
other, which is what makes intersection counts exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

import gmpy2
from gmpy2 import mpfr

from . import word_engine as we
from .arrangement import AmbiguousPosition, crossing_matrix, ranks, regions
from .hyperbolic import NeedPrecision, NotPrimitive, Segment, det3, trace_word


class CurveError(ValueError):
    pass


# ---------------------------------------------------------------- surface


@dataclass(frozen=True)
class Edge:
    id: int
    kind: str  # "side" or "diagonal"
    label: str
    sides: tuple  # polygon sides carrying this edge (two for a side class)


@dataclass(frozen=True)
class Triangle:
    id: int
    corners: tuple  # polygon corner indices, counterclockwise
    edges: tuple  # edge id of slots (corner0-corner1, corner1-corner2, corner2-corner0)
    signs: tuple  # +1 when the edge orientation agrees with the ccw boundary


@dataclass(frozen=True)
class TriangulatedSurface:
    genus: int
    triangles: tuple
    edges: tuple
    generator_edges: dict = field(compare=False)

    @property
    def N(self) -> int:
        return 4 * self.genus

    @property
    def vertex_count(self) -> int:
        return 1

    def euler_characteristic(self) -> int:
        return self.vertex_count - len(self.edges) + len(self.triangles)

    def relator_from_edges(self) -> we.Word:
        """Read the relator off the polygon boundary via the generator edges."""
        by_edge = {e: lab for lab, e in self.generator_edges.items()}
        rel = []
        for k in range(self.N):
            e = side_edge(self.genus, k)
            lab = by_edge[e]
            x = we.letter(lab)
            rel.append(x if _side_sign(self.genus, k) > 0 else -x)
        return tuple(rel)


def _side_sign(g: int, k: int) -> int:
    return 1 if we.relator(g)[k] > 0 else -1


def side_edge(g: int, k: int) -> int:
    return abs(we.relator(g)[k]) - 1


def diagonal_edge(g: int, j: int) -> int:
    return 2 * g + j - 2


@lru_cache(maxsize=None)
def build_standard_surface(g: int) -> TriangulatedSurface:
    if not isinstance(g, int) or g < 2:
        raise CurveError("genus must be an integer >= 2")
    N = 4 * g
    rel = we.relator(g)
    edges = []
    for c in range(2 * g):
        x = c + 1
        ks = tuple(k for k in range(N) if abs(rel[k]) == x)
        edges.append(Edge(c, "side", we.letter_name(x), ks))
    for j in range(2, N - 1):
        edges.append(Edge(diagonal_edge(g, j), "diagonal", f"d{j}", ()))
    tris = []
    for j in range(1, N - 1):
        left = diagonal_edge(g, j) if j > 1 else side_edge(g, 0)
        right = diagonal_edge(g, j + 1) if j < N - 2 else side_edge(g, N - 1)
        # slot orientation agreement with ccw boundary of the triangle
        s_left = 1 if j > 1 else -_side_sign(g, 0)
        s_mid = -_side_sign(g, j)
        s_right = -1 if j < N - 2 else -_side_sign(g, N - 1)
        tris.append(Triangle(j - 1, (0, j, j + 1), (left, side_edge(g, j), right), (s_left, s_mid, s_right)))
    gens = {we.letter_name(c + 1): c for c in range(2 * g)}
    S = TriangulatedSurface(g, tuple(tris), tuple(edges), gens)
    assert S.euler_characteristic() == 2 - 2 * g
    return S


def _triangle_of_side(N: int, k: int) -> int:
    if k == 0:
        return 0
    if k == N - 1:
        return N - 3
    return k - 1


# ---------------------------------------------------------------- components


@dataclass(frozen=True)
class Component:
    """One traced component.

    ``crossings`` is the cyclic list of signed edge crossings ``(edge, sign)``.
    Tight components also carry the geodesic chords and the exact word.
    """

    crossings: tuple
    word: tuple = ()
    segments: tuple = field(default=(), compare=False, repr=False)
    exits: tuple = field(default=(), compare=False, repr=False)
    prec: int = field(default=0, compare=False, repr=False)
    genus: int = field(default=0, compare=False, repr=False)

    @property
    def tight(self) -> bool:
        return bool(self.segments)


def chord_crossings(g: int, seg: Segment) -> list:
    """Signed edge crossings of one chord, ending with its exit side."""
    N = 4 * g
    x, y = seg.entry, seg.exit
    out = []
    if x < y:
        js = [j for j in range(2, N - 1) if x < j < y]
        out += [(diagonal_edge(g, j), 1) for j in js]
    else:
        js = [j for j in range(N - 2, 1, -1) if y < j < x]
        out += [(diagonal_edge(g, j), -1) for j in js]
    k = seg.exit_side
    out.append((side_edge(g, k), _side_sign(g, k)))
    return out


def _component_from_word(g: int, word: Sequence[int]) -> Component:
    w = we.cyclic_reduce(word)
    if not w:
        raise CurveError("inessential component")
    try:
        G, segs, exits = trace_word(g, w)
    except NotPrimitive as e:
        raise CurveError(f"not a simple closed curve: {e}") from None
    # deterministic start: chord with the smallest entry position
    i0 = min(range(len(segs)), key=lambda i: segs[i].entry)
    segs = segs[i0:] + segs[:i0]
    exits = exits[i0:] + exits[:i0]
    cr = []
    for s in segs:
        cr += chord_crossings(g, s)
    word_out = we.cyclic_reduce(G.exit_word(exits))
    return Component(tuple(cr), word_out, tuple(segs), tuple(exits), G.prec, g)


def _chords_simple(segs: Sequence[Segment], prec: int) -> bool:
    vals = []
    for s in segs:
        vals += [s.entry, s.exit]
    try:
        rk = ranks(vals, mpfr(2) ** (-(prec // 3)))
    except AmbiguousPosition:
        return False
    lohi = [tuple(sorted((rk[2 * i], rk[2 * i + 1]))) for i in range(len(segs))]
    return not crossing_matrix(lohi, lohi, same=True).any()


# ---------------------------------------------------------------- curves


@dataclass(frozen=True)
class CombinatorialCurve:
    """A multicurve on the standard surface.

    Components are kept sorted by their canonical coordinates when tight.
    """

    genus: int
    components: tuple

    @property
    def surface(self) -> TriangulatedSurface:
        return build_standard_surface(self.genus)

    @property
    def tight(self) -> bool:
        return all(c.tight for c in self.components)

    @property
    def is_connected(self) -> bool:
        return len(self.components) == 1

    @property
    def words(self) -> list:
        return [curve_word_of_component(self.genus, c) for c in self.components]

    @property
    def crossing_number(self) -> int:
        return sum(len(c.crossings) for c in self.components)

    @cached_property
    def key(self) -> tuple:
        return canonical_form(self).edge_weights

    @property
    def steps(self) -> list:
        """Per component, the cyclic (triangle, corner) steps of the strand."""
        return [_steps(self.genus, c.crossings) for c in self.components]

    def component(self, i: int) -> "CombinatorialCurve":
        return CombinatorialCurve(self.genus, (self.components[i],))

    def __hash__(self):
        return hash((self.genus, self.key if self.tight else self.components))

    def __eq__(self, other):
        if not isinstance(other, CombinatorialCurve) or other.genus != self.genus:
            return NotImplemented
        if self.tight and other.tight:
            return self.key == other.key and sorted(map(_comp_key, self.components)) == sorted(
                map(_comp_key, other.components)
            )
        return self.components == other.components

    def __repr__(self):
        ws = ["(" + we.format_word(w) + ")" for w in self.words] if self.tight else [str(len(self.components))]
        return f"CombinatorialCurve(g={self.genus}, {' + '.join(ws)})"


def _comp_key(c: Component) -> tuple:
    counts: dict = {}
    for e, _ in c.crossings:
        counts[e] = counts.get(e, 0) + 1
    return tuple(sorted(counts.items()))


def curve_word_of_component(g: int, c: Component) -> tuple:
    if c.tight:
        return c.word
    return we.cyclic_reduce(_raw_word(g, c.crossings))


def _after(g: int, e: int, s: int) -> tuple:
    """(triangle before, triangle after, side exited or None) of a crossing."""
    N = 4 * g
    if e >= 2 * g:
        j = e - 2 * g + 2
        return (j - 2, j - 1, None) if s > 0 else (j - 1, j - 2, None)
    ks = [k for k in range(N) if side_edge(g, k) == e]
    rep = next(k for k in ks if _side_sign(g, k) > 0)
    other = next(k for k in ks if k != rep)
    out_side, in_side = (rep, other) if s > 0 else (other, rep)
    return (_triangle_of_side(N, out_side), _triangle_of_side(N, in_side), out_side)


def _raw_word(g: int, crossings: Sequence[tuple]) -> list:
    from .hyperbolic import surface_group

    G = surface_group(g, 64)
    w: list[int] = []
    for e, s in crossings:
        _, _, k = _after(g, e, s)
        if k is not None:
            w.extend(G.Hword[k])
    return w


def _check_path(g: int, crossings: Sequence[tuple]) -> None:
    n = len(crossings)
    if n == 0:
        raise CurveError("component crosses no edge")
    E = 6 * g - 3
    for e, s in crossings:
        if not (0 <= e < E) or s not in (1, -1):
            raise CurveError(f"bad crossing {(e, s)}")
    for i in range(n):
        _, t_after, _ = _after(g, *crossings[i])
        t_before, _, _ = _after(g, *crossings[(i + 1) % n])
        if t_after != t_before:
            raise CurveError(f"malformed trace: crossing {i + 1} does not leave the triangle entered at crossing {i}")


def _steps(g: int, crossings: Sequence[tuple]) -> list:
    S = build_standard_surface(g)
    n = len(crossings)
    out = []
    for i in range(n):
        e_in, s_in = crossings[i]
        e_out, s_out = crossings[(i + 1) % n]
        _, t, _ = _after(g, e_in, s_in)
        a = _slot(S, t, e_in)
        b = _slot(S, t, e_out)
        out.append((t, _shared_corner(a, b)))
    return out


def _slot(S, t, e):
    # a side class never appears twice in one fan triangle
    return S.triangles[t].edges.index(e)


def _shared_corner(a: int, b: int) -> int:
    # slot i joins corners i and i+1
    return ({a, (a + 1) % 3} & {b, (b + 1) % 3}).pop() if a != b else a


# ---------------------------------------------------------------- constructors


def from_words(g: int, words: Iterable[Sequence[int]], check_disjoint: bool = True) -> CombinatorialCurve:
    comps = []
    for w in words:
        for x in w:
            if not 1 <= abs(x) <= 2 * g:
                raise CurveError(f"letter outside genus {g}")
        if we.is_trivial_in_surface_group(w, g):
            continue
        comps.append(_component_from_word(g, w))
    if not comps:
        raise CurveError("curve has no essential component")
    for c in comps:
        if not _chords_simple(c.segments, c.prec):
            raise CurveError("component is not simple")
    c = _sorted_curve(g, comps)
    if check_disjoint and len(comps) > 1:
        for i in range(len(comps)):
            for j in range(i + 1, len(comps)):
                if _pair_intersection(comps[i], comps[j]) != 0:
                    raise CurveError("components intersect")
    return c


def from_word(g: int, word) -> CombinatorialCurve:
    if isinstance(word, str):
        word = we.parse_word(word, g)
    return from_words(g, [word])


def _sorted_curve(g, comps) -> CombinatorialCurve:
    comps = sorted(comps, key=lambda c: (_weights(g, [c]), c.word))
    return CombinatorialCurve(g, tuple(comps))


def standard_curve(S: TriangulatedSurface | int, label: str) -> CombinatorialCurve:
    g = S if isinstance(S, int) else S.genus
    try:
        x = we.letter(label)
    except Exception:
        raise CurveError(f"unknown generator label {label!r}") from None
    if x < 0 or not 1 <= x <= 2 * g or label.lower() != label or label[0] not in "ab":
        raise CurveError(f"unknown generator label {label!r}")
    return from_word(g, (x,))


def raw_curve(g: int, sequences: Iterable[Sequence[tuple]]) -> CombinatorialCurve:
    """A traced but untightened multicurve from signed edge crossings."""
    comps = []
    for seq in sequences:
        seq = tuple((int(e), int(s)) for e, s in seq)
        _check_path(g, seq)
        comps.append(Component(seq))
    if not comps:
        raise CurveError("empty curve")
    return CombinatorialCurve(g, tuple(comps))


def parse_signed_edges(line: str) -> list:
    out = []
    for tok in line.replace(" ", "").split(","):
        if not tok:
            continue
        v = int(tok)
        if tok.lstrip("+-") == "0":
            s = -1 if tok.startswith("-") else 1
            out.append((0, s))
        else:
            out.append((abs(v), 1 if v > 0 else -1))
    return out


def tighten(c: CombinatorialCurve, budget: int | None = None) -> CombinatorialCurve:
    """Remove bigons, straighten, and drop null components.

    Consecutive opposite crossings of one edge are cancelled first within a
    step budget of ``10 n^2``; the result is then straightened to the unique
    geodesic representative, which has no bigons with any edge.
    """
    if c.tight:
        return c
    g = c.genus
    words = []
    for comp in c.components:
        seq = list(comp.crossings)
        n0 = len(seq)
        cap = budget if budget is not None else 10 * n0 * n0
        steps = 0
        changed = True
        while changed and seq:
            changed = False
            i = 0
            while len(seq) > 1 and i < len(seq):
                j = (i + 1) % len(seq)
                if seq[i][0] == seq[j][0] and seq[i][1] == -seq[j][1]:
                    steps += 1
                    if steps > cap:
                        raise CurveError("tightening step budget exceeded")
                    for idx in sorted({i, j}, reverse=True):
                        del seq[idx]
                    changed = True
                    i = max(i - 1, 0)
                else:
                    i += 1
        w = we.cyclic_reduce(_raw_word(g, seq))
        if not seq or we.is_trivial_in_surface_group(w, g):
            continue
        words.append(w)
    if not words:
        raise CurveError("every component is null-homotopic")
    return from_words(g, words)


def load_curve(path: str, g: int) -> CombinatorialCurve:
    """Curve file: one component per line, signed edge ids separated by commas.

    Lines starting with ``word`` give a component as a word instead.
    """
    seqs, words = [], []
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if line.startswith("word"):
                words.append(we.parse_word(line[4:].strip(" :"), g))
            else:
                seqs.append(parse_signed_edges(line))
    if seqs:
        raw_c = raw_curve(g, seqs)
        words += [curve_word_of_component(g, comp) for comp in raw_c.components if comp.crossings]
        words = [w for w in words if not we.is_trivial_in_surface_group(w, g)]
    if not words:
        raise CurveError(f"{path}: no essential component")
    return from_words(g, words)


def format_curve(c: CombinatorialCurve) -> str:
    lines = []
    for comp in c.components:
        lines.append(",".join(f"{'-' if s < 0 else ''}{e}" for e, s in comp.crossings))
    return "\n".join(lines) + "\n"


def save_curve(c: CombinatorialCurve, path: str) -> None:
    with open(path, "w") as fh:
        fh.write(format_curve(c))


# ---------------------------------------------------------------- invariants


@dataclass(frozen=True)
class NormalCoordinates:
    edge_weights: tuple

    def corner_counts(self, g: int) -> list:
        S = build_standard_surface(g)
        out = []
        for T in S.triangles:
            x, y, z = (self.edge_weights[e] for e in T.edges)
            out.append(((x + z - y) / 2, (x + y - z) / 2, (y + z - x) / 2))
        return out

    def is_valid(self, g: int) -> bool:
        S = build_standard_surface(g)
        for T in S.triangles:
            x, y, z = (self.edge_weights[e] for e in T.edges)
            if (x + y + z) % 2 or x > y + z or y > x + z or z > x + y:
                return False
        return True


def _weights(g: int, comps) -> tuple:
    w = [0] * (6 * g - 3)
    for c in comps:
        for e, _ in c.crossings:
            w[e] += 1
    return tuple(w)


def canonical_form(c: CombinatorialCurve) -> NormalCoordinates:
    if not c.tight:
        raise CurveError("canonical_form needs a tight curve")
    return NormalCoordinates(_weights(c.genus, c.components))


def curve_to_word(c: CombinatorialCurve, S: TriangulatedSurface | None = None) -> list:
    return [we.canonical_rotation(w) for w in c.words]


def _same_class(a: Component, b: Component) -> bool:
    if _comp_key(a) != _comp_key(b):
        return False
    wa = we.canonical_rotation(a.word)
    return wa == we.canonical_rotation(b.word) or wa == we.canonical_rotation(we.inverse(b.word))


def _positions(comps: Sequence[Component]):
    vals, owner = [], []
    for ci, c in enumerate(comps):
        for si, s in enumerate(c.segments):
            vals += [s.entry, s.exit]
            owner.append((ci, si))
    return vals, owner


def _gap_for(comps) -> object:
    p = min(c.prec for c in comps)
    return mpfr(2) ** (-(p // 3))


def _pair_intersection(a: Component, b: Component) -> int:
    if _same_class(a, b):
        return 0
    vals = []
    for s in a.segments + b.segments:
        vals += [s.entry, s.exit]
    rk = ranks(vals, _gap_for([a, b]))
    na = len(a.segments)
    ch = [tuple(sorted((rk[2 * i], rk[2 * i + 1]))) for i in range(len(vals) // 2)]
    return int(crossing_matrix(ch[:na], ch[na:]).sum())


def geometric_intersection(c1: CombinatorialCurve, c2: CombinatorialCurve) -> int:
    if not (c1.tight and c2.tight):
        raise CurveError("geometric_intersection needs tight curves")
    total = 0
    for a in c1.components:
        for b in c2.components:
            total += _retry_ambiguous(_pair_intersection, a, b)
    return total


def _retry_ambiguous(fn, a, b, attempts: int = 3):
    """Run ``fn`` at a common precision, doubling it while positions are ambiguous."""
    p = max(a.prec, b.prec)
    for _ in range(attempts + 1):
        if a.prec < p:
            a = _retrace(a.genus, a, p)
        if b.prec < p:
            b = _retrace(b.genus, b, p)
        try:
            return fn(a, b)
        except AmbiguousPosition:
            p *= 2
    raise AmbiguousPosition("positions still ambiguous after raising precision")


def _retrace(g: int, c: Component, prec: int) -> Component:
    G, segs, exits = trace_word(g, c.word, prec)
    i0 = min(range(len(segs)), key=lambda i: segs[i].entry)
    segs = segs[i0:] + segs[:i0]
    exits = exits[i0:] + exits[:i0]
    return Component(c.crossings, c.word, tuple(segs), tuple(exits), G.prec, g)


def klein_point(g: int, prec: int, pos):
    """Klein coordinates (x, y) of a boundary position of P."""
    from .hyperbolic import surface_group

    G = surface_group(g, prec)
    N = 4 * g
    k = int(gmpy2.floor(pos)) % N
    t = pos - int(gmpy2.floor(pos))
    p, q = G.kverts[k], G.kverts[(k + 1) % N]
    return (p[1] + t * (q[1] - p[1]), p[2] + t * (q[2] - p[2]))


def complement_regions(*curves: CombinatorialCurve):
    """Regions of the surface cut along the union of tight curves."""
    from .hyperbolic import surface_group

    comps = [c for cv in curves for c in cv.components]
    g = curves[0].genus
    # parallel copies add annuli; keep one representative per class
    uniq: list[Component] = []
    for c in comps:
        if not any(_same_class(c, u) for u in uniq):
            uniq.append(c)
    prec = max(c.prec for c in uniq)
    G = surface_group(g, prec)
    chords = [(s.entry, s.exit) for c in uniq for s in c.segments]
    with G.local():
        return regions(G.N, chords, lambda pos: klein_point(g, prec, pos), G.pair, _gap_for(uniq))


def is_separating(c: CombinatorialCurve) -> bool:
    if not c.is_connected:
        raise CurveError("is_separating needs a connected curve")
    return len(complement_regions(c)) == 2


def fills(*curves: CombinatorialCurve) -> bool:
    """Every complementary region of the union is a disk."""
    return all(r.euler == 1 for r in complement_regions(*curves))


def from_normal_coordinates(g: int, weights: Sequence[int]) -> CombinatorialCurve:
    """Trace the normal multicurve with the given edge weights (untightened).

    Points on each edge are numbered along the edge orientation; in each
    triangle the corner arcs join the points nearest to their corner.
    """
    S = build_standard_surface(g)
    w = [int(x) for x in weights]
    if len(w) != len(S.edges) or not NormalCoordinates(tuple(w)).is_valid(g):
        raise CurveError("weights violate the triangle conditions")
    link: dict = {}  # (edge, index, triangle) -> (edge, index) across the triangle
    for T in S.triangles:
        x = [w[e] for e in T.edges]
        # corner s sits between slot s-1 and slot s
        corner = [(x[(s - 1) % 3] + x[s] - x[(s + 1) % 3]) // 2 for s in range(3)]

        def ccw(s, r):
            # r-th point of slot s counted counterclockwise from corner s
            e = T.edges[s]
            return (e, r if T.signs[s] > 0 else w[e] - 1 - r)

        for s in range(3):
            prev = (s - 1) % 3
            for r in range(corner[s]):
                p = ccw(s, r)
                q = ccw(prev, x[prev] - 1 - r)
                link[(p, T.id)] = q
                link[(q, T.id)] = p
    tri_of = {}  # (edge, sign of slot) -> triangle id
    for T in S.triangles:
        for s in range(3):
            tri_of[(T.edges[s], T.signs[s])] = T.id
    seen = set()
    seqs = []
    for e in range(len(w)):
        for r in range(w[e]):
            if (e, r) in seen:
                continue
            seq = []
            cur, sign = (e, r), 1
            while cur not in seen:
                seen.add(cur)
                seq.append((cur[0], sign))
                # positive crossing lands in the triangle on the left (slot sign +1)
                t = tri_of[(cur[0], sign)]
                nxt = link[(cur, t)]
                other = tri_of[(nxt[0], 1)] == t
                sign = -1 if other else 1
                cur = nxt
            seqs.append(seq)
    if not seqs:
        raise CurveError("zero weights")
    return raw_curve(g, seqs)
