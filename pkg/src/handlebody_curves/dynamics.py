"""Mapping classes as twist words, projective intersection vectors, and the
limit experiments built on them.

Two routes act on curves.  The explicit route splices twists into traced
geodesics on the closed surface and is exact but costs a trace per image.
Long iterations go through flipper on the surface punctured at the vertex of
the triangulation: the fan triangulation is an ideal triangulation there, a
tight curve's edge weights are a normal curve, and twisting in the punctured
surface lifts twisting in the closed one.  Keys computed on that route are
marked-surface keys; they are only compared with each other.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

from . import word_engine as we
from .splice import twist
from .surface_model import (
    CombinatorialCurve,
    CurveError,
    build_standard_surface,
    canonical_form,
    from_normal_coordinates,
    from_word,
    geometric_intersection,
    standard_curve,
    tighten,
)

# ---------------------------------------------------------------- mapping classes


@dataclass(frozen=True)
class MappingClass:
    """A product of Dehn twists ``T_c^k`` applied in list order (first entry first)."""

    genus: int
    twists: tuple = ()
    label: str = field(default="", compare=False)
    support: Optional[tuple] = field(default=None, compare=False)

    def __post_init__(self):
        for c, k in self.twists:
            if c.genus != self.genus:
                raise CurveError("twist curve of another genus")
            if not c.tight:
                raise CurveError("twist curves must be tight")
            if k == 0:
                raise CurveError("zero twist power")

    @property
    def is_identity_word(self) -> bool:
        return not self.twists

    def inverse(self) -> "MappingClass":
        return MappingClass(self.genus, tuple((c, -k) for c, k in reversed(self.twists)), self.label + "^-1", self.support)

    def then(self, other: "MappingClass") -> "MappingClass":
        """Apply self, then other."""
        return MappingClass(self.genus, self.twists + other.twists, f"{other.label}.{self.label}")

    def power(self, n: int) -> "MappingClass":
        base = self if n >= 0 else self.inverse()
        return MappingClass(self.genus, base.twists * abs(n), f"{self.label}^{n}", self.support)

    def curves(self) -> list:
        return [c for c, _ in self.twists]

    def __call__(self, c: CombinatorialCurve) -> CombinatorialCurve:
        return apply_mapping_class(self, c)


def apply_twist(c: CombinatorialCurve, t: CombinatorialCurve, k: int = 1) -> CombinatorialCurve:
    if k == 0 or geometric_intersection(c, t) == 0:
        return c
    return twist(c, t, k)


def apply_mapping_class(f: MappingClass, c: CombinatorialCurve) -> CombinatorialCurve:
    for t, k in f.twists:
        c = apply_twist(c, t, k)
    return c


def twist_class(t: CombinatorialCurve, k: int = 1, label: str = "") -> MappingClass:
    return MappingClass(t.genus, ((t, k),), label or f"T^{k}")


def load_mapping_class(path: str, g: int) -> MappingClass:
    """Mapping-class file: one ``curve_file ^ power`` per line, applied top to bottom."""
    import os

    from .surface_model import load_curve

    base = os.path.dirname(os.path.abspath(path))
    twists = []
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "^" in line:
                name, _, p = line.partition("^")
                k = int(p.strip())
            else:
                name, k = line, 1
            name = name.strip()
            if name.startswith("word:"):
                c = from_word(g, name[5:].strip())
            else:
                c = load_curve(os.path.join(base, name), g)
            twists.append((c, k))
    return MappingClass(g, tuple(twists), os.path.basename(path))


# ---------------------------------------------------------------- flipper bridge


@lru_cache(maxsize=None)
def flipper_triangulation(g: int):
    import flipper

    S = build_standard_surface(g)
    tris = [[e if s > 0 else ~e for e, s in zip(T.edges, T.signs)] for T in S.triangles]
    return flipper.create_triangulation(tris)


def to_lamination(c: CombinatorialCurve):
    return flipper_triangulation(c.genus).lamination(list(canonical_form(c).edge_weights))


def lamination_weights(lam) -> tuple:
    return tuple(int(x) for x in lam)


def from_lamination(g: int, lam) -> CombinatorialCurve:
    return tighten(from_normal_coordinates(g, lamination_weights(lam)))


# flipper's positive twist is the opposite turn to ours
FLIPPER_TWIST_SIGN = -1


@lru_cache(maxsize=None)
def _torus_pair(g: int, key) -> tuple:
    """A pair meeting once whose neighbourhood is bounded by the separating
    curve with this key; found in a small slice."""
    from .curve_graph import enumerate_curves
    from .splice import band_sum_word

    sl = enumerate_curves(g, 120, max_depth=2)
    c = next(x for x in sl.curves if x.key == key) if key in sl.index else None
    if c is None:
        raise CurveError("separating twist curve outside the search slice")
    near = [x for x in sl.curves if x.is_connected and x.key != key and geometric_intersection(x, c) == 0]
    for i, x in enumerate(near):
        for y in near[i + 1 :]:
            if geometric_intersection(x, y) != 1:
                continue
            if from_word(g, band_sum_word(x.components[0], y.components[0], g)).key == key:
                return x, y
    raise CurveError("no one-holed torus pair found for a separating twist curve")


def _twist_encoding(c: CombinatorialCurve, k: int):
    lam = to_lamination(c)
    if lam.is_twistable():
        return lam.encode_twist(k=FLIPPER_TWIST_SIGN * k)
    # flipper only twists along curves it can shorten to weight two; a
    # separating curve bounds a one-holed torus and the chain relation
    # (T_x T_y)^6 = T_c expresses its twist there
    x, y = _torus_pair(c.genus, c.key)
    s = 1 if k > 0 else -1
    ex = to_lamination(x).encode_twist(k=FLIPPER_TWIST_SIGN * s)
    ey = to_lamination(y).encode_twist(k=FLIPPER_TWIST_SIGN * s)
    e = None
    for _ in range(6 * abs(k)):
        for step in (ey, ex):
            e = step if e is None else step * e
    return e


def flipper_encoding(f: MappingClass):
    h = None
    for c, k in f.twists:
        e = _twist_encoding(c, k)
        h = e if h is None else e * h
    return h


def flipper_twist(c: CombinatorialCurve, t: CombinatorialCurve, k: int) -> CombinatorialCurve:
    """Second route for T_t^k(c): flipper on the punctured surface, then
    forget the puncture and straighten."""
    lam = _twist_encoding(t, k)(to_lamination(c))
    return from_lamination(c.genus, lam)


# ---------------------------------------------------------------- PML keys


@lru_cache(maxsize=None)
def reference_system(g: int) -> tuple:
    """Generators, standard separating curves, and the chain curves a_j a_{j+1}.

    The generators and separating curves alone do not fill (the separating
    curve of genus 2 misses them all), so the chain curves are added.
    """
    refs = [standard_curve(g, f"{x}{i}") for i in range(1, g + 1) for x in "ab"]
    refs += [from_word(g, we.separating_word(k)) for k in range(1, g)]
    refs += [from_word(g, (2 * j - 1, 2 * j + 1)) for j in range(1, g)]
    return tuple(refs)


@lru_cache(maxsize=None)
def _reference_laminations(g: int) -> tuple:
    """References usable on the punctured surface.  flipper only measures
    against curves it can twist along, which rules out the separating ones;
    the chain curves still cross those regions, so the rest fill."""
    out = (to_lamination(r) for r in reference_system(g))
    return tuple(lam for lam in out if lam.is_twistable())


@dataclass(frozen=True)
class PMLVector:
    values: tuple

    @property
    def total(self) -> int:
        return sum(self.values)

    @property
    def projective_key(self) -> tuple:
        s = self.total
        if s == 0:
            raise CurveError("zero intersection vector")
        return tuple(Fraction(v, s) for v in self.values)

    def as_floats(self) -> list:
        return [float(x) for x in self.projective_key]


def pml_vector(c: CombinatorialCurve) -> PMLVector:
    v = PMLVector(tuple(geometric_intersection(c, r) for r in reference_system(c.genus)))
    if v.total == 0:
        raise CurveError("inessential curve has zero intersection vector")
    return v


def marked_pml_vector(g: int, lam) -> PMLVector:
    return PMLVector(tuple(int(r.geometric_intersection(lam)) for r in _reference_laminations(g)))


def projective_distance(v1: PMLVector, v2: PMLVector) -> Fraction:
    k1, k2 = v1.projective_key, v2.projective_key
    return sum((abs(x - y) for x, y in zip(k1, k2)), Fraction(0))


# ---------------------------------------------------------------- iteration


@dataclass
class LimitResult:
    limit_key: PMLVector
    iterations: int
    converged: bool
    stationary: bool
    distances: list  # consecutive projective distances
    laminations: list = field(default_factory=list, repr=False)


def iterate_to_limit(f: MappingClass, seed: CombinatorialCurve, tol=Fraction(1, 1000), max_iter: int = 64, keep=False) -> LimitResult:
    tol = Fraction(tol).limit_denominator(10**12) if not isinstance(tol, Fraction) else tol
    g = f.genus
    lam = to_lamination(seed)
    v = marked_pml_vector(g, lam)
    if f.is_identity_word:
        return LimitResult(v, 0, True, True, [])
    h = flipper_encoding(f)
    dists = []
    lams = [lam] if keep else []
    stationary = all(geometric_intersection(seed, c) == 0 for c in f.curves())
    for n in range(1, max_iter + 1):
        lam = h(lam)
        w = marked_pml_vector(g, lam)
        d = projective_distance(v, w)
        dists.append(d)
        if keep:
            lams.append(lam)
        v = w
        if d < tol:
            return LimitResult(v, n, True, stationary, dists, lams)
    return LimitResult(v, max_iter, False, stationary, dists, lams)


def growth_verified(f: MappingClass, c: CombinatorialCurve, n_max: int = 8) -> bool:
    """i(f^n(c), c) grows super-linearly for n <= n_max (marked-surface counts)."""
    g = f.genus
    h = flipper_encoding(f)
    base = to_lamination(c)
    lam = base
    seq = []
    for _ in range(n_max):
        lam = h(lam)
        seq.append(int(base.geometric_intersection(lam)))
    if seq[0] == 0:
        return False
    return all(b > a for a, b in zip(seq, seq[1:])) and seq[-1] > n_max * seq[0] * 2


def _weight(lam) -> int:
    return sum(lamination_weights(lam))


def _lamination_is_meridian(g: int, lam, M: we.HandlebodyMarking) -> bool:
    raw = from_normal_coordinates(g, lamination_weights(lam))
    if len(raw.components) != 1:
        return False
    return we.word_is_meridian(raw.words[0], M)


def _support_curves(f: MappingClass) -> list:
    return list(f.support) if f.support is not None else f.curves()


def _single_core(f: MappingClass) -> Optional[CombinatorialCurve]:
    keys = {c.key for c in f.curves()}
    return f.curves()[0] if len(keys) == 1 else None


def meridians_in_support(f: MappingClass, M: we.HandlebodyMarking, cands: Sequence[CombinatorialCurve]) -> list:
    """Meridians among the candidates and the support curves that lie in
    the support of f.

    The support of a twist word is a regular neighbourhood of its curves.
    A curve lies in it when it is a support curve, or meets a support curve
    and misses every candidate that misses all of them.  For a single twist
    curve the support is an annulus and only its core qualifies.
    """
    S = _support_curves(f)
    skeys = {c.key for c in S}
    pool = {c.key: c for c in list(S) + list(cands)}
    out = [c for c in S if c.is_connected and we.word_is_meridian(c.words[0], M)]
    if len(skeys) == 1:
        return out[:1]
    outside = [c for c in pool.values() if all(geometric_intersection(c, t) == 0 for t in S)]
    for m in cands:
        if m.key in skeys or not m.is_connected or not we.word_is_meridian(m.words[0], M):
            continue
        if not any(geometric_intersection(m, t) > 0 for t in S):
            continue
        if all(o.key == m.key or geometric_intersection(m, o) == 0 for o in outside):
            out.append(m)
    return out


def meridian_limit_experiment(
    f: MappingClass,
    M: we.HandlebodyMarking,
    tol=Fraction(1, 1000),
    max_iter: int = 64,
    budget: int = 5000,
    meridians: Optional[Sequence[CombinatorialCurve]] = None,
    orbit_len: int = 20,
) -> dict:
    """Is the attracting key of f a projective limit of meridians?

    The limit key is the core's key for a power of one twist, and otherwise
    the key of a support curve pushed forward ``max_iter`` times.  Meridians
    in the support are pushed forward ``orbit_len`` times; an orbit counts
    when every term small enough to trace (total weight within ``budget``)
    is again a meridian.  The best orbit's last distance gives the verdict.
    """
    tol = Fraction(tol).limit_denominator(10**12) if not isinstance(tol, Fraction) else tol
    g = f.genus
    cands = list(meridians) if meridians is not None else _default_meridians(M)
    report = {"verdict": "no_evidence", "reason": "", "rows": [], "witness": None, "limit_rows": []}
    inside = meridians_in_support(f, M, cands)
    if not inside:
        known = any(c.is_connected and we.word_is_meridian(c.words[0], M) for c in cands)
        report["reason"] = "no meridian in support" if known else "no meridian found"
        return report
    h = flipper_encoding(f)
    core = _single_core(f)
    if core is not None:
        target = marked_pml_vector(g, to_lamination(core))
    else:
        lam = to_lamination(_support_curves(f)[0])
        prev = marked_pml_vector(g, lam)
        for n in range(1, max_iter + 1):
            lam = h(lam)
            cur = marked_pml_vector(g, lam)
            report["limit_rows"].append((n, projective_distance(prev, cur)))
            prev = cur
        target = prev
    best = None
    for m in inside:
        lam = to_lamination(m)
        rows = []
        ok = True
        for n in range(1, orbit_len + 1):
            lam = h(lam)
            if _weight(lam) <= budget and not _lamination_is_meridian(g, lam, M):
                ok = False
                break
            rows.append((n, projective_distance(marked_pml_vector(g, lam), target)))
        if not ok:
            continue
        if best is None or rows[-1][1] < best[1][-1][1]:
            best = (m, rows)
        if rows[-1][1] < tol:
            break
    if best is None:
        report["reason"] = "every sampled meridian orbit leaves the disk set"
        return report
    m, rows = best
    report["rows"] = rows
    report["witness"] = m
    final = rows[-1][1]
    if final < tol:
        report["verdict"] = "yes"
    elif final < 10 * tol:
        report["verdict"] = "inconclusive"
    return report


def _default_meridians(M: we.HandlebodyMarking) -> list:
    from .curve_graph import enumerate_curves

    sl = enumerate_curves(M.genus, 400)
    return [c for c in sl.curves if c.is_connected and we.word_is_meridian(c.words[0], M)]


def fills(curves: Sequence[CombinatorialCurve], test: Sequence[CombinatorialCurve]) -> bool:
    """No test curve misses every one of ``curves`` (a finite filling check)."""
    from .curve_graph import disjoint

    keys = {c.key for c in curves}
    return not any(t.key not in keys and all(disjoint(t, c) for c in curves) for t in test)


def filling_meridian_pair(M: we.HandlebodyMarking, budget: int = 400, n_max: int = 8, max_crossings: int = 60):
    """Two nonseparating meridians filling S whose twist quotient
    T_a T_b^-1 shows growth."""
    from .curve_graph import enumerate_curves
    from .surface_model import is_separating

    sl = enumerate_curves(M.genus, budget)
    base = _default_meridians(M)
    pool = {c.key: c for c in base}
    # disk twists keep the disk set; one round supplies crossing pairs
    for x in base:
        if is_separating(x):
            continue
        for t in base:
            if geometric_intersection(x, t) > 0:
                for k in (1, -1):
                    y = twist(x, t, k)
                    if y.crossing_number <= max_crossings:
                        pool.setdefault(y.key, y)
    mer = [c for c in pool.values() if not is_separating(c)]
    mer.sort(key=lambda c: (c.crossing_number, c.key))
    for x, a in enumerate(mer):
        for b in mer[x + 1 :]:
            if geometric_intersection(a, b) == 0 or not fills((a, b), sl.curves):
                continue
            f = MappingClass(M.genus, ((b, -1), (a, 1)), "T_a T_b^-1")
            if growth_verified(f, mer[0] if mer[0].key not in (a.key, b.key) else a, n_max):
                return a, b, f
    raise CurveError("no filling meridian pair within budget")


# ---------------------------------------------------------------- promotion


def promote_hausdorff(
    target: CombinatorialCurve,
    mu: CombinatorialCurve,
    M: we.HandlebodyMarking,
    budget: int = 5000,
    n_terms: int = 8,
    alphas: Optional[Sequence[CombinatorialCurve]] = None,
    powers: Optional[Sequence[int]] = None,
) -> dict:
    """Meridians B(mu, T_target^k(alpha)) converging to the target's key.

    Twist powers double by default (1, 2, 4, ...); the distance to the
    target decays roughly like 1/k.

    ``alpha`` meets mu once and meets every target component; the band sum
    with a twist power of alpha misses nothing of the target transversely in
    the limit.  Only the nonseparating-mu branch is mechanised.
    """
    from .surgery import band_sum

    if not mu.is_connected or not we.word_is_meridian(mu.words[0], M):
        raise CurveError("mu must be a connected meridian")
    if geometric_intersection(mu, target) != 0:
        raise CurveError("mu must be disjoint from the target")
    from .surface_model import is_separating

    if is_separating(mu):
        raise CurveError("separating mu is not supported")
    g = mu.genus
    if alphas is None:
        from .curve_graph import enumerate_curves

        alphas = enumerate_curves(g, budget // 10 or 200).curves
    alpha = None
    for a in alphas:
        if geometric_intersection(a, mu) == 1 and all(
            geometric_intersection(a, target.component(i)) > 0 for i in range(len(target.components))
        ):
            alpha = a
            break
    if alpha is None:
        raise CurveError("no arc curve alpha found within budget")
    tv = pml_vector(target)
    seq = []
    ks = [2**j for j in range(n_terms)] if powers is None else list(powers)
    for k in ks:
        ak = alpha
        for i in range(len(target.components)):
            ak = apply_twist(ak, target.component(i), k)
        gk = band_sum(mu, ak, M)
        if gk.crossing_number > budget:
            break
        d = projective_distance(pml_vector(gk), tv)
        seq.append((k, gk, d))
    dists = [d for _, _, d in seq]
    monotone = all(b < a for a, b in zip(dists, dists[1:]))
    if not monotone:
        raise CurveError("promoted meridians do not approach the target monotonically")
    return {"alpha": alpha, "terms": seq, "monotone": monotone}


# ---------------------------------------------------------------- limit set


def limit_set_sample(M: we.HandlebodyMarking, n_samples: int, recipe_length: int, seed: int = 0, base=None, pool=None) -> list:
    """Keys of random meridian-twist images of a base meridian."""
    from .surgery import band_sum

    g = M.genus
    rng = random.Random(seed)
    if base is None:
        base = standard_curve(g, "a1") if M.is_standard else _default_meridians(M)[0]
    if pool is None:
        pool = [standard_curve(g, f"a{i}") for i in range(1, g + 1)] if M.is_standard else _default_meridians(M)[:4]
        if M.is_standard:
            pool.append(band_sum(pool[0], standard_curve(g, "b1"), M))
    out = []
    for _ in range(n_samples):
        c = base
        recipe = []
        for _ in range(recipe_length):
            t = rng.randrange(len(pool))
            k = rng.choice((-1, 1))
            recipe.append((t, k))
            c = apply_twist(c, pool[t], k)
        out.append({"recipe": recipe, "curve": c, "key": pml_vector(c)})
    return out


# ---------------------------------------------------------------- CBod toy


def cbod_orbit_experiment(f: MappingClass, M: we.HandlebodyMarking, budget: int = 5000, n_steps: int = 4, slice_curves=None) -> dict:
    """Toy bodies M_n = f^-n(M) seen through one fixed curve slice.

    A slice curve c is a meridian of M_n exactly when f^n(c) is a meridian
    of M.  Bodies are compared by inclusion of their slice disk sets.
    """
    from .curve_graph import enumerate_curves

    g = f.genus
    curves = list(slice_curves) if slice_curves is not None else enumerate_curves(g, min(budget, 300)).curves
    slices = []
    images = list(curves)
    for n in range(n_steps + 1):
        if n > 0:
            images = [apply_mapping_class(f, c) if c.crossing_number <= budget else c for c in images]
        s = frozenset(i for i, c in enumerate(images) if we.word_is_meridian(c.words[0], M))
        slices.append(s)
    k = len(slices)
    leq = [[slices[i] <= slices[j] for j in range(k)] for i in range(k)]
    # antisymmetry of containment up to equal slices
    antisym = all(not (leq[i][j] and leq[j][i]) or slices[i] == slices[j] for i in range(k) for j in range(k))
    recurrent = sorted({i for i in range(k) for j in range(i + 1, k) if slices[i] == slices[j]})
    minimal = [i for i in recurrent if not any(slices[j] < slices[i] for j in recurrent)]
    distinct = len(set(slices))
    constant = distinct == 1
    inside_M = [i for i in minimal if slices[i] <= slices[0]]
    return {
        "slices": slices,
        "sizes": [len(s) for s in slices],
        "constant": constant,
        "moving": all(slices[i] != slices[i + 1] for i in range(k - 1)),
        "recurrent": recurrent,
        "minimal_recurrent": minimal,
        "unique_minimal_inside_M": len({slices[i] for i in inside_M}) == 1 and bool(inside_M),
        "antisymmetric": antisym,
        "common_core": len(frozenset.intersection(*slices)),
        "curves": curves,
    }
