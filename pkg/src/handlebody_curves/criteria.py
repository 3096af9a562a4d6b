"""Product interval bundles, compression arcs, the meridians m(c), and the
two decision surrogates: a case detector for Hausdorff limits of meridians
and an extension checker for pure maps.

The product model H = Y x [-1,1] is handled through pi_1.  H is a handlebody
whose fundamental group is the free group F on generators of Y, and the
boundary is marked by an epimorphism phi: pi_1(dH) -> F.  Two sections
iota_-, iota_+ of phi send curves of Y to their copies on Y x {-1} and
Y x {+1}; both are based through the vertical annulus over the last
boundary component of Y, along the standard fiber.
"""

from __future__ import annotations

import os
import shlex
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

from . import word_engine as we
from .dynamics import MappingClass, apply_mapping_class, meridian_limit_experiment
from .surface_model import (
    CombinatorialCurve,
    CurveError,
    from_word,
    from_words,
    geometric_intersection,
    is_separating,
    load_curve,
)


def _sub(w: Sequence[int], images: dict) -> tuple:
    out: list = []
    for x in w:
        r = images[abs(x)]
        out += list(r) if x > 0 else list(we.inverse(r))
    return we.free_reduce(out)


def _try_curve(g: int, w) -> Optional[CombinatorialCurve]:
    try:
        return from_word(g, w)
    except (CurveError, we.WordError, ArithmeticError):
        return None


# ---------------------------------------------------------------- product model


@dataclass(frozen=True)
class ProductModel:
    """Y x [-1,1] for Y of genus gY with b boundary components.

    Free letters of Y: x_i = 2i-1, y_i = 2i (i <= gY), z_j = 2gY + j (j < b).
    Handles of dH: 1..gY carry Y_-, gY+1..gY+b-1 are tubes around the
    vertical annuli, the last gY carry Y_+ in reverse order.
    """

    gY: int
    b: int
    genus: int
    marking: we.HandlebodyMarking
    iota_minus: dict = field(compare=False)
    iota_plus: dict = field(compare=False)
    boundary_words: tuple = ()  # boundary curves of Y as free words
    z_letters: Optional[tuple] = None  # sub-bundle Z x I over <letters>; None means Z = Y
    z_boundary: tuple = ()

    @property
    def model_id(self) -> str:
        return f"{self.gY},{self.b}"

    @property
    def rank(self) -> int:
        return 2 * self.gY + self.b - 1

    def phi(self, w: Sequence[int]) -> tuple:
        return we.cyclic_reduce(we._apply_images(w, self.marking.images))

    def copy(self, c: Sequence[int], side: int) -> tuple:
        return _sub(c, self.iota_minus if side < 0 else self.iota_plus)

    def copy_curve(self, c: Sequence[int], side: int) -> CombinatorialCurve:
        return from_word(self.genus, self.copy(c, side))

    def sigma(self, curve: CombinatorialCurve) -> CombinatorialCurve:
        """The canonical involution on a curve lying in Y_- or Y_+."""
        w = curve.words[0]
        c = self.phi(w)
        for side in (-1, 1):
            k = _try_curve(self.genus, self.copy(c, side))
            if k is not None and k.key == curve.key:
                return self.copy_curve(c, -side)
        raise CurveError("curve does not lie in a horizontal copy of Y")

    def is_peripheral(self, c: Sequence[int]) -> bool:
        w = we.cyclic_reduce(c)
        if not w:
            return False
        for d in self.boundary_words:
            d = we.cyclic_reduce(d)
            for k in range(1, len(w) // max(1, len(d)) + 1):
                for base in (d, we.inverse(d)):
                    p = base * k
                    if len(p) == len(w) and we.canonical_rotation(p) == we.canonical_rotation(w):
                        return True
        return False

    def with_subbundle(self, letters: Sequence[int], boundary: Sequence[Sequence[int]]) -> "ProductModel":
        return ProductModel(
            self.gY, self.b, self.genus, self.marking, self.iota_minus, self.iota_plus, self.boundary_words,
            tuple(sorted(set(abs(x) for x in letters))), tuple(tuple(d) for d in boundary),
        )

    def z_boundary_words(self) -> tuple:
        return self.z_boundary if self.z_letters is not None else self.boundary_words


# Conjugating exponents of the + side tube loops by their own handle.  Found
# by exhaustive search over short conjugators; bases with three or more
# boundary components other than pants had no solution in that range.
_TUBE_POWERS = {(0, 3): (1, 0)}


@lru_cache(maxsize=None)
def build_product_model(gY: int, b: int) -> ProductModel:
    if b < 1 or gY < 0:
        raise CurveError("need gY >= 0 and b >= 1")
    if (gY, b) in ((0, 1), (0, 2)):
        raise CurveError("disk and annulus bases are not supported")
    g = 2 * gY + b - 1
    r = 2 * gY + b - 1
    phi: dict = {}
    im: dict = {}
    ip: dict = {}
    for i in range(1, gY + 1):
        h = g + 1 - i
        phi[2 * i - 1], phi[2 * i] = (2 * i - 1,), (2 * i,)
        phi[2 * h - 1], phi[2 * h] = (2 * i,), (2 * i - 1,)
        im[2 * i - 1], im[2 * i] = (2 * i - 1,), (2 * i,)
        ip[2 * i - 1], ip[2 * i] = (2 * h,), (2 * h - 1,)
    tubes = [gY + j for j in range(1, b)]
    if b > 2 and (gY, b) not in _TUBE_POWERS:
        raise CurveError(f"product model ({gY},{b}) is not supported by this construction")
    powers = _TUBE_POWERS.get((gY, b), (0,) * (b - 1))
    for j, h in enumerate(tubes, start=1):
        z = 2 * gY + j
        phi[2 * h - 1], phi[2 * h] = (z,), ()
        im[z] = (2 * h - 1,)
        w = (2 * h - 1,) * powers[j - 1]
        ip[z] = we.free_reduce(w + (2 * h, 2 * h - 1, -2 * h) + we.inverse(w))
    images = [phi[k] for k in range(1, 2 * g + 1)]
    M = we.HandlebodyMarking.from_images(g, images, label=f"Y({gY},{b}) x I")
    outer: list = []
    for i in range(1, gY + 1):
        outer += [2 * i - 1, 2 * i, -(2 * i - 1), -2 * i]
    outer += [2 * gY + j for j in range(1, b)]
    bds = tuple([(2 * gY + j,) for j in range(1, b)] + [tuple(outer)])
    model = ProductModel(gY, b, g, M, im, ip, bds)
    # copies of the boundary cobound vertical annuli; the outer one is the
    # basing annulus, so its copies agree as based loops
    for d in bds[:-1]:
        km, kp = _try_curve(g, model.copy(d, -1)), _try_curve(g, model.copy(d, 1))
        if km is None or kp is None or km.key != kp.key:
            raise CurveError(f"product model ({gY},{b}) is not supported by this construction")
    if not we.is_trivial_in_surface_group(model.copy(bds[-1], -1) + we.inverse(model.copy(bds[-1], 1)), g):
        raise CurveError(f"product model ({gY},{b}) is not supported by this construction")
    for x in range(1, r + 1):
        if _sub(_sub((x,), im), phi) != (x,) or _sub(_sub((x,), ip), phi) != (x,):
            raise AssertionError("iota is not a section of phi")
    return model


# ---------------------------------------------------------------- compression arcs


@dataclass(frozen=True)
class CompressionArc:
    """An arc of dH with ends on boundary components of the horizontal copies.

    ``start``/``end`` are (side, k): side -1 or +1 and k indexing the
    boundary words of Z.  ``word`` is the loop obtained by following the
    arc and returning along the standard fiber, based as the model is; the
    standard fiber itself has the empty word.
    """

    start: tuple
    end: tuple
    word: tuple = ()


def standard_fiber(model: ProductModel) -> CompressionArc:
    k = len(model.z_boundary_words()) - 1
    return CompressionArc((-1, k), (1, k), ())


@dataclass
class ArcVerdict:
    kind: str  # compression_arc | same_component_wave | neither
    beta: Optional[tuple] = None
    closed: Optional[tuple] = None


def compression_arc_check(model: ProductModel, alpha: CompressionArc, budget: int = 6) -> ArcVerdict:
    (s1, k1), (s2, k2) = alpha.start, alpha.end
    bds = model.z_boundary_words()
    if not (0 <= k1 < len(bds) and 0 <= k2 < len(bds)) or s1 not in (-1, 1) or s2 not in (-1, 1):
        raise CurveError("malformed arc endpoints")
    if (s1, k1) != (s2, k2):
        if s1 == s2:
            return ArcVerdict("neither")
        image = we.free_reduce(we._apply_images(alpha.word, model.marking.images))
        allowed = model.z_letters
        if allowed is None or all(abs(x) in allowed for x in image):
            return ArcVerdict("compression_arc")
        return ArcVerdict("neither")
    d = model.copy(bds[k1], s1)
    for n in sorted(range(-budget, budget + 1), key=abs):
        beta = d * n if n >= 0 else we.inverse(d) * (-n)
        w = we.cyclic_reduce(tuple(alpha.word) + tuple(beta))
        if not w or we.is_trivial_in_surface_group(w, model.genus):
            continue
        if not we.word_is_meridian(w, model.marking):
            continue
        if _try_curve(model.genus, w) is not None:
            return ArcVerdict("same_component_wave", beta, w)
    return ArcVerdict("neither")


def _conjugators(r: int, maxlen: int) -> list:
    import itertools

    letters = [x for k in range(1, r + 1) for x in (k, -k)]
    out = [()]
    for L in range(1, maxlen + 1):
        out += [u for u in itertools.product(letters, repeat=L) if we.free_reduce(u) == u]
    return out


def m_of_c(model: ProductModel, c, alpha: Optional[CompressionArc] = None, max_conj: int = 2) -> CombinatorialCurve:
    """The meridian c_- . alpha . c_+^-1 . alpha^-1 for a simple curve c of Y.

    Loops of Y based at different points of c give different arcs over c;
    the first basing (by conjugator length) that yields a simple curve is used.
    """
    if isinstance(c, str):
        c = we.parse_word(c)
    c = we.cyclic_reduce(tuple(c))
    if not c:
        raise CurveError("c is inessential")
    if max(abs(x) for x in c) > model.rank:
        raise CurveError("c uses letters outside pi_1(Y)")
    if model.is_peripheral(c):
        raise CurveError("c is peripheral in Y")
    if _try_curve(model.genus, model.copy(c, -1)) is None:
        raise CurveError("c is not a simple closed curve of Y")
    alpha = alpha or standard_fiber(model)
    if compression_arc_check(model, alpha).kind != "compression_arc":
        raise CurveError("alpha is not a compression arc")
    u = tuple(alpha.word)
    for v in _conjugators(model.rank, max_conj):
        cc = we.free_reduce(v + c + we.inverse(v))
        w = we.free_reduce(model.copy(cc, -1) + u + we.inverse(model.copy(cc, 1)) + we.inverse(u))
        if not w or we.is_trivial_in_surface_group(w, model.genus):
            continue
        m = _try_curve(model.genus, w)
        if m is None:
            continue
        if not we.word_is_meridian(m.words[0], model.marking):
            raise AssertionError("m(c) is not a meridian")
        return m
    raise CurveError("no basing of c gives a simple m(c) within the conjugator bound")


def region_signature(*curves: CombinatorialCurve) -> list:
    from .surface_model import complement_regions

    return sorted(r.euler for r in complement_regions(*curves))


# ---------------------------------------------------------------- hlimits detector


@dataclass
class Detection:
    verdict: str  # case1 | case2 | case3 | exceptional_star | none_found
    witness: object = None
    transcript: list = field(default_factory=list)


def _meridian_slice(M: we.HandlebodyMarking, budget: int, max_depth: int = 3) -> list:
    from .curve_graph import enumerate_curves

    sl = enumerate_curves(M.genus, budget, max_depth=max_depth)
    return [c for c in sl.curves if c.is_connected and we.word_is_meridian(c.words[0], M)]


def hlimits_case_detector(
    lam: CombinatorialCurve,
    M: we.HandlebodyMarking,
    models: Sequence[ProductModel] = (),
    budget: int = 60,
    approximants: Sequence[CombinatorialCurve] = (),
    meridians: Optional[Sequence[CombinatorialCurve]] = None,
) -> Detection:
    """Which case of the limit theorem a lamination falls in, at slice scale.

    ``lam`` is the finest approximant; ``approximants`` are coarser ones of
    the same lamination.  Checks run in the order (star), 1, 3, 2.
    """
    log: list = []
    mer = list(meridians) if meridians is not None else _meridian_slice(M, budget)
    log.append(f"meridians in slice: {len(mer)}")
    inter = {m.key: geometric_intersection(lam, m) for m in mer}
    if M.genus == 2:
        for mu in mer:
            if inter[mu.key] != 0 or not is_separating(mu):
                continue
            side = {}
            for d in mer:
                if d.key != mu.key and not is_separating(d) and geometric_intersection(d, mu) == 0:
                    side[d.key] = d
            log.append(f"separating meridian {we.format_word(mu.words[0])}: {len(side)} nonseparating meridians beside it")
            if len(side) == 2 and all(inter.get(k, geometric_intersection(lam, d)) > 0 for k, d in side.items()):
                return Detection("exceptional_star", (mu, tuple(side.values())), log)
    # lambda stands for a lamination; a meridian missing one approximant
    # only counts when it misses every supplied approximant too
    for m in mer:
        if inter[m.key] == 0 and all(geometric_intersection(a, m) == 0 for a in approximants):
            log.append(f"case 1 witness {we.format_word(m.words[0])}")
            return Detection("case1", m, log)
    if approximants:
        log.append(f"case 1: no slice meridian misses all {len(approximants) + 1} approximants")
    for model in models:
        if model.genus != M.genus:
            continue
        comps = [lam.component(i) for i in range(len(lam.components))]
        for i, li in enumerate(comps):
            c = model.phi(li.words[0])
            if not c or model.is_peripheral(c):
                continue
            km = _try_curve(model.genus, model.copy(c, -1))
            if km is None or km.key != li.key:
                continue
            for j, lj in enumerate(comps):
                kp = _try_curve(model.genus, model.copy(c, 1))
                if j == i or kp is None or kp.key != lj.key:
                    continue
                arc = standard_fiber(model)
                if compression_arc_check(model, arc).kind == "compression_arc":
                    log.append(f"case 3: components {i},{j} are paired copies in model {model.model_id}")
                    return Detection("case3", (model, i, j, arc), log)
    if approximants:
        ratios = []
        for lam_n in approximants:
            m0 = _cut_system_for(M)
            if m0 is None:
                break
            from .surgery import surgery_to_tight

            out = surgery_to_tight(lam_n, m0, M)
            final = out.meridian_sequence[-1]
            ratios.append(Fraction(geometric_intersection(lam_n, final), max(1, lam_n.crossing_number)))
        log.append("case 2 normalized intersections: " + ", ".join(str(r) for r in ratios))
        if len(ratios) >= 2 and all(b < a for a, b in zip(ratios, ratios[1:])):
            return Detection("case2", ratios, log)
    return Detection("none_found", None, log)


def _cut_system_for(M):
    from .surgery import build_cut_system

    try:
        return build_cut_system(M)
    except CurveError:
        return None


# ---------------------------------------------------------------- homology


def homology_class(c: CombinatorialCurve) -> tuple:
    return tuple(we.exponent_sums(c.words[0], c.genus))


def omega(u: Sequence[int], v: Sequence[int]) -> int:
    """Intersection pairing with our twist convention: T_c(x) = x + omega(c, x) c."""
    s = 0
    for i in range(0, len(u), 2):
        s += -u[i] * v[i + 1] + u[i + 1] * v[i]
    return s


def twist_homology(f: MappingClass, v: Sequence[int], power: int = 1) -> tuple:
    v = list(v)
    seq = [(homology_class(c), k) for c, k in f.twists]
    if power < 0:
        seq = [(h, -k) for h, k in reversed(seq)]
    for _ in range(abs(power)):
        for h, k in seq:
            t = omega(h, v) * k
            v = [x + t * y for x, y in zip(v, h)]
    return tuple(v)


# ---------------------------------------------------------------- pure maps


@dataclass
class Piece:
    support: tuple  # curves bounding or spanning the piece
    kind: str  # twist | pa
    curve: Optional[CombinatorialCurve] = None
    power: int = 0
    map: Optional[MappingClass] = None

    def mapping_class(self, g: int) -> MappingClass:
        if self.kind == "twist":
            return MappingClass(g, ((self.curve, self.power),), "twist", self.support)
        return MappingClass(g, self.map.twists, self.map.label, self.support)


@dataclass
class Pairing:
    i: int
    j: int
    model: ProductModel
    arc: CompressionArc


@dataclass
class PureMapSpec:
    genus: int
    pieces: list
    identity: Optional[object] = None  # SubsurfaceSpec for S_id
    pairings: list = field(default_factory=list)

    def check(self) -> None:
        """Curves of different pieces are disjoint; a piece's own curves
        may cross, since they fill it."""
        for x, p in enumerate(self.pieces):
            for q in self.pieces[x + 1 :]:
                for c in p.support:
                    for d in q.support:
                        if c.key != d.key and geometric_intersection(c, d) != 0:
                            raise CurveError("piece supports overlap")


def _curve_ref(ref: str, g: int, base: str) -> CombinatorialCurve:
    if ref.startswith("word:"):
        return from_word(g, ref[5:].strip())
    return load_curve(os.path.join(base, ref), g)


def _load_arc(path: str) -> CompressionArc:
    start = end = None
    word: tuple = ()
    with open(path) as fh:
        for raw in fh:
            t = raw.split("#", 1)[0].split()
            if not t:
                continue
            if t[0] in ("start", "end"):
                v = (-1 if t[1] == "-" else 1, int(t[2]))
                if t[0] == "start":
                    start = v
                else:
                    end = v
            elif t[0] == "word":
                word = we.parse_word(" ".join(t[1:]))
    if start is None or end is None:
        raise CurveError("arc file needs start and end lines")
    return CompressionArc(start, end, word)


def load_pure_spec(path: str) -> PureMapSpec:
    """Sectioned text: ``[piece i] support=... kind=twist curve=... power=k``,
    ``[piece i] support=... kind=pa map=<file>``, ``[identity] boundary=...
    fillers=...``, ``[pairing] i j model=gY,b arc=<file>``, ``genus g``.
    Curve references are file names or ``word:<letters>``; lists are
    comma separated."""
    from .dynamics import load_mapping_class
    from .surgery import SubsurfaceSpec

    base = os.path.dirname(os.path.abspath(path))
    g = None
    pieces: dict = {}
    identity = None
    pairings = []
    with open(path) as fh:
        lines = [ln.split("#", 1)[0].strip() for ln in fh]
    for ln in lines:
        if not ln:
            continue
        toks = shlex.split(ln)
        if toks[0] == "genus":
            g = int(toks[1])
            continue
        if g is None:
            raise CurveError("spec must start with a genus line")
        kv = dict(t.split("=", 1) for t in toks if "=" in t)
        plain = [t for t in toks if "=" not in t]
        refs = lambda key: tuple(_curve_ref(r, g, base) for r in kv.get(key, "").split(",") if r)
        if plain[0] == "[piece":
            idx = int(plain[1].rstrip("]"))
            kind = kv["kind"]
            if kind == "twist":
                c = _curve_ref(kv["curve"], g, base)
                pieces[idx] = Piece(refs("support") or (c,), "twist", c, int(kv.get("power", 1)))
            elif kind == "pa":
                f = load_mapping_class(os.path.join(base, kv["map"]), g)
                pieces[idx] = Piece(refs("support"), "pa", map=f)
            else:
                raise CurveError(f"unknown piece kind {kind}")
        elif plain[0] == "[identity]":
            identity = SubsurfaceSpec(from_words(g, [c.words[0] for c in refs("boundary")]), refs("fillers"))
        elif plain[0] == "[pairing]":
            gY, b = (int(x) for x in kv["model"].split(","))
            pairings.append(Pairing(int(plain[1]), int(plain[2]), build_product_model(gY, b), _load_arc(os.path.join(base, kv["arc"]))))
        else:
            raise CurveError(f"unknown section {plain[0]}")
    spec = PureMapSpec(g, [pieces[k] for k in sorted(pieces)], identity, pairings)
    spec.check()
    return spec


@dataclass
class ExtensionVerdict:
    verdict: str  # extends_case1 | extends_case2 | extends_case3 | no_evidence | inconclusive
    detail: tuple = ()
    exact: bool = True
    transcript: list = field(default_factory=list)

    def label(self) -> str:
        if self.verdict == "extends_case2":
            return f"extends_case2({self.detail[0]})"
        if self.verdict == "extends_case3":
            return f"extends_case3({self.detail[0]},{self.detail[1]})"
        return self.verdict


def _battery(model: ProductModel) -> list:
    r = model.rank
    cand = [(x,) for x in range(1, r + 1)] + [(1, 2), (1, -2), (1, 1, 2), (1, 3), (2, 3)]
    out = []
    for c in cand:
        if max(abs(x) for x in c) > r or model.is_peripheral(c):
            continue
        if _try_curve(model.genus, model.copy(c, -1)) is None:
            continue
        out.append(c)
        if len(out) == 2 * model.gY + model.b:
            break
    return out


def _power_agrees(model: ProductModel, fi: MappingClass, fj: MappingClass, p: int, battery, log, curve_budget: int) -> bool:
    """Does f_j^p agree with sigma f_i^p sigma^-1 on the battery?

    Homology decides rejection exactly.  Agreement on homology is confirmed
    on the curves themselves while they stay within the crossing budget.
    """
    g = model.genus
    for c in battery:
        vm = homology_class(model.copy_curve(c, -1))
        vp = homology_class(model.copy_curve(c, 1))
        left = twist_homology(fj, vp, p)
        img = twist_homology(fi, vm, p)
        # sigma on homology of Y_-: [iota_-(x)] -> [iota_+(x)]
        right = [0] * (2 * g)
        for x in range(1, model.rank + 1):
            coeff = _coefficient(model, img, x)
            hp = we.exponent_sums(model.copy((x,), 1), g)
            right = [r + coeff * h for r, h in zip(right, hp)]
        if tuple(left) != tuple(right):
            log.append(f"power {p}: homology differs on battery curve {we.format_word(c)}")
            return False
    for c in battery:
        x = model.copy_curve(c, -1)
        y = model.copy_curve(c, 1)
        xi, yj = x, y
        ok = True
        for _ in range(p):
            xi = apply_mapping_class(fi, xi)
            yj = apply_mapping_class(fj, yj)
            if xi.crossing_number > curve_budget or yj.crossing_number > curve_budget:
                ok = False
                break
        if not ok:
            log.append(f"power {p}: homology agrees; curves exceed budget, not compared")
            return True
        if model.sigma(xi).key != yj.key:
            log.append(f"power {p}: curves differ on battery curve {we.format_word(c)}")
            return False
    log.append(f"power {p}: agreement on battery")
    return True


def _coefficient(model: ProductModel, v: Sequence[int], x: int) -> int:
    """Coefficient of [iota_-(x)] in a class v supported on Y_-."""
    g = model.genus
    h = we.exponent_sums(model.copy((x,), -1), g)
    k = [i for i, t in enumerate(h) if t]
    if len(k) != 1:
        raise CurveError("battery homology needs generator copies on single handles")
    return v[k[0]] // h[k[0]]


def extension_checker(
    spec: PureMapSpec,
    M: we.HandlebodyMarking,
    budget: int = 60,
    tol=Fraction(1, 1000),
    power_bound: int = 12,
    curve_budget: int = 5000,
) -> ExtensionVerdict:
    log: list = []
    g = spec.genus
    if spec.identity is not None:
        mer = _meridian_slice(M, budget)
        for m in mer:
            if spec.identity.contains(m):
                log.append(f"case 1: meridian {we.format_word(m.words[0])} in S_id")
                return ExtensionVerdict("extends_case1", (m,), True, log)
        log.append("case 1: no meridian in S_id within budget")
    evidential = None
    for idx, p in enumerate(spec.pieces, start=1):
        if p.kind == "twist":
            if we.word_is_meridian(p.curve.words[0], M):
                log.append(f"case 2: piece {idx} twists about a meridian")
                return ExtensionVerdict("extends_case2", (idx,), True, log)
            log.append(f"case 2: piece {idx} twist curve is not a meridian")
        else:
            rep = meridian_limit_experiment(p.mapping_class(g), M, tol=tol)
            log.append(f"case 2: piece {idx} meridian limit experiment -> {rep['verdict']} {rep['reason']}".rstrip())
            if rep["verdict"] == "yes" and evidential is None:
                evidential = ExtensionVerdict("extends_case2", (idx,), False, log)
    for pr in spec.pairings:
        fi = spec.pieces[pr.i - 1].mapping_class(g)
        fj = spec.pieces[pr.j - 1].mapping_class(g)
        if compression_arc_check(pr.model, pr.arc).kind != "compression_arc":
            log.append(f"case 3: pairing {pr.i},{pr.j} arc is not a compression arc")
            continue
        if spec.identity is not None and not _arc_in_identity(pr, spec):
            log.append(f"case 3: pairing {pr.i},{pr.j} arc leaves S_id")
            continue
        battery = _battery(pr.model)
        for k in range(1, power_bound + 1):
            if _power_agrees(pr.model, fi, fj, k, battery, log, curve_budget):
                return ExtensionVerdict("extends_case3", (pr.i, pr.j, k), True, log)
        log.append(f"case 3: pairing {pr.i},{pr.j} fails the power test up to {power_bound}")
    if evidential is not None:
        return evidential
    return ExtensionVerdict("no_evidence", (), False, log)


def _arc_in_identity(pr: Pairing, spec: PureMapSpec) -> bool:
    """The standard fiber runs in a vertical annulus; it stays in S_id when
    that annulus's core misses every piece support."""
    model = pr.model
    k = pr.arc.start[1]
    core = model.copy_curve(model.z_boundary_words()[k], -1)
    return all(geometric_intersection(core, c) == 0 for p in spec.pieces for c in p.support)


# ---------------------------------------------------------------- paper fixtures


def fg_fixture(kind: str = "F") -> tuple:
    """The pure maps F and G on the boundary of (one-holed torus) x I.

    F is T_x T_y^-1 on Y_- and its sigma-conjugate on Y_+; G uses the square
    of the conjugate on Y_+.  Conjugating by the orientation-reversing sigma
    inverts twists.
    """
    model = build_product_model(1, 1)
    g = model.genus
    x, y = (1,), (2,)
    am, bm = model.copy_curve(x, -1), model.copy_curve(y, -1)
    ap, bp = model.copy_curve(x, 1), model.copy_curve(y, 1)
    sep = model.copy_curve(model.boundary_words[0], -1)
    f1 = MappingClass(g, ((bm, -1), (am, 1)), "f_-")
    f2 = MappingClass(g, ((bp, 1), (ap, -1)), "f_+")
    if kind == "G":
        f2 = f2.power(2)
    from .surgery import SubsurfaceSpec

    pieces = [Piece((am, bm), "pa", map=f1), Piece((ap, bp), "pa", map=f2)]
    spec = PureMapSpec(g, pieces, None, [Pairing(1, 2, model, standard_fiber(model))])
    return spec, model, sep


def twist_piece_fixture() -> tuple:
    """A single twist piece about the band sum of a1 and b1 in genus 2."""
    from .surface_model import standard_curve
    from .surgery import band_sum

    M = we.HandlebodyMarking.standard(2)
    m = band_sum(standard_curve(2, "a1"), standard_curve(2, "b1"), M)
    spec = PureMapSpec(2, [Piece((m,), "twist", curve=m, power=1)])
    return spec, M


def _anosov_word(n: int) -> tuple:
    """The n-th image of x under x -> xy, y -> yxy, an Anosov automorphism
    of the one-holed torus group."""
    img = {1: (1, 2), 2: (2, 1, 2)}
    w: tuple = (1,)
    for _ in range(n):
        w = _sub(w, img)
    return w


def hlimits_fixture(kind: str) -> tuple:
    """(lam, M, models, approximants) for the detector's reference cases.

    case1: b2 in the standard genus-2 handlebody.
    star: a separating meridian with b1 and b2, one on each side.
    case3: paired copies of Anosov images of x in the (1,1) product model;
    the coarser images stand in for the filling lamination they approach.
    """
    from .surface_model import standard_curve

    if kind == "case1":
        return standard_curve(2, "b2"), we.HandlebodyMarking.standard(2), (), ()
    if kind == "star":
        lam = from_words(2, [we.separating_word(1), (2,), (4,)])
        return lam, we.HandlebodyMarking.standard(2), (), ()
    if kind == "case3":
        model = build_product_model(1, 1)
        seq = [from_words(2, [model.copy(c, -1), model.copy(c, 1)]) for c in map(_anosov_word, (1, 2, 3))]
        return seq[-1], model.marking, (model,), tuple(seq[:-1])
    raise CurveError(f"unknown fixture {kind}")
