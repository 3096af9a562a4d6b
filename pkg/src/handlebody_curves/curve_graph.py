"""Finite slices of the curve graph generated by twist recipes.

Distances are computed inside a slice, so they only bound the true curve
graph distance from above.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import numpy as np

from . import word_engine as we
from .splice import twist
from .surface_model import (
    CombinatorialCurve,
    CurveError,
    TriangulatedSurface,
    from_word,
    geometric_intersection,
    standard_curve,
)

FLOAT_GAP = 1e-9


def generators(g: int) -> list:
    """Named twist curves: the standard a_i, b_i and chain curves a_j a_{j+1}."""
    out = [(f"{x}{i}", standard_curve(g, f"{x}{i}")) for i in range(1, g + 1) for x in "ab"]
    out += [(f"c{j}", from_word(g, (2 * j - 1, 2 * j + 1))) for j in range(1, g)]
    return out


def extras(g: int) -> list:
    """Recorded extra seeds: the standard separating curves and chain curves."""
    out = [(f"s{k}", from_word(g, we.separating_word(k))) for k in range(1, g)]
    out += [(f"c{j}", from_word(g, (2 * j - 1, 2 * j + 1))) for j in range(1, g)]
    return out


@dataclass
class CurveGraphSlice:
    genus: int
    curves: list = field(default_factory=list)
    provenance: list = field(default_factory=list)  # (seed name, ((gen, power), ...))
    index: dict = field(default_factory=dict)
    _adj: Optional[list] = field(default=None, repr=False)

    def __len__(self):
        return len(self.curves)

    def add(self, c: CombinatorialCurve, recipe) -> bool:
        if c.key in self.index:
            return False
        self.index[c.key] = len(self.curves)
        self.curves.append(c)
        self.provenance.append(recipe)
        self._adj = None
        return True

    def find(self, c: CombinatorialCurve) -> int:
        try:
            return self.index[c.key]
        except KeyError:
            raise CurveError("curve is not a vertex of the slice") from None

    def recipe_text(self, i: int) -> str:
        seed, word = self.provenance[i]
        return seed + "".join(f" T{n}^{k}" for n, k in word)

    @property
    def adjacency(self) -> list:
        if self._adj is None:
            self._adj = _adjacency(self.curves)
        return self._adj


def enumerate_curves(S, budget: int, max_depth: int = 3, max_vertices: int = 2000) -> CurveGraphSlice:
    """Standard curves and extras, closed under generator twists of recipe
    length at most ``max_depth``, keeping curves with at most ``budget``
    edge crossings."""
    g = S.genus if isinstance(S, TriangulatedSurface) else int(S)
    sl = CurveGraphSlice(g)
    for i in range(1, g + 1):
        for x in "ab":
            sl.add(standard_curve(g, f"{x}{i}"), (f"{x}{i}", ()))
    for name, c in extras(g):
        if c.crossing_number <= budget:
            sl.add(c, (name, ()))
    gens = generators(g)
    frontier = list(range(len(sl)))
    for _ in range(max_depth):
        nxt = []
        for v in frontier:
            c = sl.curves[v]
            seed, word = sl.provenance[v]
            for name, t in gens:
                if geometric_intersection(c, t) == 0:
                    continue
                for k in (1, -1):
                    if word and word[-1] == (name, -k):
                        continue
                    d = twist(c, t, k)
                    if d.crossing_number > budget:
                        continue
                    if sl.add(d, (seed, word + ((name, k),))):
                        nxt.append(len(sl) - 1)
                        if len(sl) >= max_vertices:
                            return sl
        frontier = nxt
        if not frontier:
            break
    return sl


# ---------------------------------------------------------------- adjacency


def _float_chords(c: CombinatorialCurve) -> np.ndarray:
    rows = []
    for comp in c.components:
        for s in comp.segments:
            a, b = float(s.entry), float(s.exit)
            rows.append((min(a, b), max(a, b)))
    return np.array(rows, dtype=float)


def _float_disjoint(A: np.ndarray, B: np.ndarray):
    """True/False when floats decide disjointness; None when too close to call."""
    ends = np.concatenate([A.ravel(), B.ravel()])
    ends.sort()
    if len(ends) > 1 and np.min(np.diff(ends)) < FLOAT_GAP:
        return None
    lo1, hi1 = A[:, 0:1], A[:, 1:2]
    lo2, hi2 = B[:, 0], B[:, 1]
    m = ((lo1 < lo2) & (lo2 < hi1)) ^ ((lo1 < hi2) & (hi2 < hi1))
    return not bool(m.any())


def disjoint(c1: CombinatorialCurve, c2: CombinatorialCurve, chords=None) -> bool:
    if c1.key == c2.key:
        return False
    A = chords[0] if chords else _float_chords(c1)
    B = chords[1] if chords else _float_chords(c2)
    r = _float_disjoint(A, B)
    if r is None:
        return geometric_intersection(c1, c2) == 0
    return r


def _adjacency(curves: list) -> list:
    ch = [_float_chords(c) for c in curves]
    n = len(curves)
    adj = [[] for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if disjoint(curves[i], curves[j], (ch[i], ch[j])):
                adj[i].append(j)
                adj[j].append(i)
    return adj


# ---------------------------------------------------------------- distances


def _bfs(adj: list, sources) -> list:
    dist = [None] * len(adj)
    q = deque()
    for s in sources:
        dist[s] = 0
        q.append(s)
    while q:
        u = q.popleft()
        for v in adj[u]:
            if dist[v] is None:
                dist[v] = dist[u] + 1
                q.append(v)
    return dist


def distance(c1: CombinatorialCurve, c2: CombinatorialCurve, sl: CurveGraphSlice) -> Optional[int]:
    """BFS distance inside the slice (an upper bound on curve graph distance);
    None when unreachable."""
    i, j = sl.find(c1), sl.find(c2)
    return _bfs(sl.adjacency, [i])[j]


def geodesic(sl: CurveGraphSlice, i: int, j: int) -> Optional[list]:
    """A shortest path of vertex indices, smallest-index parent first."""
    adj = sl.adjacency
    dist = _bfs(adj, [j])
    if dist[i] is None:
        return None
    path = [i]
    while path[-1] != j:
        u = path[-1]
        path.append(min(v for v in adj[u] if dist[v] == dist[u] - 1))
    return path


def disk_set_enumerate(M: we.HandlebodyMarking, sl: CurveGraphSlice) -> list:
    """Indices of slice vertices that are meridians."""
    return [i for i, c in enumerate(sl.curves) if c.is_connected and we.word_is_meridian(c.words[0], M)]


@dataclass
class QuasiconvexityReport:
    rows: list  # (pair_id, i, j, d, max_dist_to_diskset)
    max_observed: int
    slice_size: int
    disk_set_size: int


def quasiconvexity_experiment(
    M: we.HandlebodyMarking,
    sl: CurveGraphSlice,
    trials: int = 50,
    seed: int = 0,
    pairs=None,
    csv_path: Optional[str] = None,
    svg_path: Optional[str] = None,
) -> QuasiconvexityReport:
    D = disk_set_enumerate(M, sl)
    if len(D) < 2 and not pairs:
        raise CurveError("no meridian pair in slice")
    to_D = _bfs(sl.adjacency, D)
    if pairs is None:
        allp = [(a, b) for x, a in enumerate(D) for b in D[x + 1 :]]
        rng = random.Random(seed)
        pairs = allp if len(allp) <= trials else rng.sample(allp, trials)
    rows = []
    for pid, (i, j) in enumerate(pairs):
        path = geodesic(sl, i, j)
        if path is None:
            rows.append((pid, i, j, None, None))
            continue
        rows.append((pid, i, j, len(path) - 1, max(to_D[v] for v in path)))
    observed = [r[4] for r in rows if r[4] is not None]
    rep = QuasiconvexityReport(rows, max(observed, default=0), len(sl), len(D))
    if csv_path:
        from .plotting import write_csv

        write_csv(csv_path, ["pair_id", "d(c1,c2)", "max_dist_to_diskset"], [(r[0], r[3], r[4]) for r in rows])
    if svg_path:
        from .plotting import svg_histogram

        svg_histogram(observed, svg_path, "geodesic distance to disk set (upper bound in slice)", "max_dist_to_diskset")
    return rep
