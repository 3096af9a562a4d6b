"""Waves, surgery along them, band sums, and the disk set classifier."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from . import word_engine as we
from .splice import Arc, arcs, band_sum_word
from .surface_model import (
    CombinatorialCurve,
    CurveError,
    canonical_form,
    from_words,
    geometric_intersection,
    is_separating,
    standard_curve,
)


def _check_meridians(m: CombinatorialCurve, M) -> None:
    for w in m.words:
        if not we.word_is_meridian(w, M):
            raise CurveError("m has a component that is not a meridian")


def _candidate_arcs(lam: CombinatorialCurve, m: CombinatorialCurve) -> list:
    out = []
    for a in arcs(lam, m):
        if a.component_ends[0] != a.component_ends[1]:
            continue
        if a.start == a.end:
            continue  # lambda meets m once: no arc with two ends
        out.append(a)
    out.sort(key=lambda a: (a.crossings, a.lam_component, a.index))
    return out


def find_wave(lam: CombinatorialCurve, m: CombinatorialCurve, M: we.HandlebodyMarking) -> Optional[Arc]:
    """Shortest interior-disjoint wave of lambda against m, or None."""
    if not (lam.tight and m.tight):
        raise CurveError("lambda and m must be tight")
    for a in _candidate_arcs(lam, m):
        if we.arc_is_wave(a, M):
            return a
    return None


def all_waves(lam: CombinatorialCurve, m: CombinatorialCurve, M: we.HandlebodyMarking) -> list:
    """Every interior-disjoint wave; an independent scan that also checks
    both closures of each arc."""
    out = []
    for a in arcs(lam, m):
        if a.component_ends[0] != a.component_ends[1] or a.start == a.end:
            continue
        t0 = we.is_trivial_in_quotient(a.closures[0], M)
        t1 = we.is_trivial_in_quotient(a.closures[1], M)
        if t0 != t1:
            raise CurveError("closures of one arc disagree; m is not a meridian")
        if t0:
            out.append(a)
    return out


def surgery_candidates(m: CombinatorialCurve, wave: Arc) -> list:
    """Both multicurves obtained by replacing the wave's m component with
    the wave closed up along either complementary arc."""
    g = m.genus
    i = wave.component_ends[0]
    rest = [m.components[j].word for j in range(len(m.components)) if j != i]
    out = []
    for w in wave.closures:
        if we.is_trivial_in_surface_group(w, g):
            raise CurveError("surgered curve is inessential; lambda and m not in minimal position")
        new = from_words(g, [w])
        keep = [r for r in rest if r != new.components[0].word]
        words = keep + [new.components[0].word]
        out.append(from_words(g, _dedupe(g, words)))
    return out


def _dedupe(g, words):
    seen, out = set(), []
    for w in words:
        k = from_words(g, [w]).key
        if k not in seen:
            seen.add(k)
            out.append(w)
    return out


def do_surgery(m: CombinatorialCurve, wave: Arc, lam: Optional[CombinatorialCurve] = None, M=None):
    """Surgery of m along a wave of lambda.

    Keeps the candidate meeting lambda least, ties to the smaller canonical
    form.  Returns (new multicurve, index of the kept closure).
    """
    cands = surgery_candidates(m, wave)
    if lam is None:
        return cands[0], 0
    scored = [(geometric_intersection(lam, c), canonical_form(c).edge_weights, k) for k, c in enumerate(cands)]
    best = min(scored)
    out = cands[best[2]]
    if M is not None:
        _check_meridians(out, M)
    return out, best[2]


@dataclass
class SurgeryOutcome:
    tight_system: Optional[CombinatorialCurve]
    meridian_sequence: list
    transcript: list
    intersections: list
    disjoint: bool = False
    exhausted: bool = False

    @property
    def kind(self) -> str:
        return "tight_system" if self.tight_system is not None else "meridian_sequence"


def surgery_to_tight(lam: CombinatorialCurve, m: CombinatorialCurve, M: we.HandlebodyMarking, budget: int = 5000) -> SurgeryOutcome:
    """Surger m along waves of lambda until none is left.

    ``budget`` caps both the number of steps and the crossing number of any
    produced curve.  Intersection with lambda drops at every step, so for a
    multicurve lambda running out of budget means something is wrong; that
    is reported as an exhausted outcome.
    """
    _check_meridians(m, M)
    seq = [m]
    n0 = geometric_intersection(lam, m)
    ints = [n0]
    transcript = []
    step = 0
    cur = m
    while True:
        wave = find_wave(lam, cur, M)
        if wave is None:
            return SurgeryOutcome(cur, seq, transcript, ints, disjoint=ints[-1] == 0)
        step += 1
        new, kept = do_surgery(cur, wave, lam, M)
        n = geometric_intersection(lam, new)
        transcript.append(
            f"step {step}: i(λ,m)={ints[-1]}, wave=({wave.lam_component},{wave.crossings}), kept=m{kept + 1}"
        )
        if n >= ints[-1]:
            raise CurveError(f"surgery did not reduce intersection ({ints[-1]} -> {n})")
        cur = new
        seq.append(cur)
        ints.append(n)
        if step >= budget or cur.crossing_number > budget:
            transcript.append(f"budget exhausted after {step} steps")
            return SurgeryOutcome(None, seq, transcript, ints, exhausted=True)


def band_sum(delta: CombinatorialCurve, beta: CombinatorialCurve, M: Optional[we.HandlebodyMarking] = None) -> CombinatorialCurve:
    """Boundary of a neighbourhood of delta and a curve meeting it once."""
    if not (delta.is_connected and beta.is_connected):
        raise CurveError("band sum needs connected curves")
    n = geometric_intersection(delta, beta)
    if n != 1:
        raise CurveError(f"band sum needs i(delta, beta) = 1, got {n}")
    w = band_sum_word(delta.components[0], beta.components[0], delta.genus)
    out = from_words(delta.genus, [w])
    if M is not None and not we.word_is_meridian(out.words[0], M):
        raise CurveError("band sum is not a meridian; delta is not a meridian")
    return out


def build_cut_system(M: we.HandlebodyMarking) -> CombinatorialCurve:
    if not M.is_standard:
        raise CurveError("cut systems are built for the standard marking; change marking first")
    g = M.genus
    return from_words(g, [standard_curve(g, f"a{i}").words[0] for i in range(1, g + 1)])


# ---------------------------------------------------------------- classifier


@dataclass(frozen=True)
class SubsurfaceSpec:
    """A subsurface given by its boundary multicurve and curves filling it.

    A curve lies in the subsurface when it misses the boundary, is not
    parallel to it, and meets (or is) one of the filling curves.
    """

    boundary: CombinatorialCurve
    fillers: tuple

    def contains(self, c: CombinatorialCurve) -> bool:
        if geometric_intersection(c, self.boundary) != 0:
            return False
        bkeys = {self.boundary.component(i).key for i in range(len(self.boundary.components))}
        if c.key in bkeys:
            return False
        return any(c.key == f.key or geometric_intersection(c, f) > 0 for f in self.fillers)


def is_band_sum_of(gamma: CombinatorialCurve, delta: CombinatorialCurve, companions: Sequence[CombinatorialCurve] = ()) -> bool:
    """Is gamma the boundary of a neighbourhood of delta and a curve meeting
    delta once?  Such gamma is separating, misses delta and cuts off a
    one-holed torus containing it.  In genus 2 both sides of a separating
    curve are one-holed tori, so those conditions decide it; otherwise a
    companion from ``companions`` must produce gamma."""
    if gamma.key == delta.key or not is_separating(gamma) or is_separating(delta):
        return False
    if geometric_intersection(gamma, delta) != 0:
        return False
    if gamma.genus == 2:
        return True
    for b in companions:
        if geometric_intersection(b, delta) == 1 and geometric_intersection(b, gamma) == 0:
            if band_sum(delta, b).key == gamma.key:
                return True
    return False


@dataclass
class Classification:
    verdict: str  # large | small | empty | inconclusive
    kind: Optional[str] = None  # one_separating | band_sums_of_delta
    witnesses: tuple = ()
    meridians: list = field(default_factory=list)
    filling_check: Optional[bool] = None
    notes: str = ""

    def label(self) -> str:
        return f"small({self.kind})" if self.verdict == "small" else self.verdict


def _kills_nothing(M: we.HandlebodyMarking, S: Optional[SubsurfaceSpec]) -> bool:
    if M.images is not None:
        return False
    words = M.killed_words()
    if not words:
        return True
    if S is None:
        return False
    g = M.genus
    return not any(S.contains(from_words(g, [w])) for w in words)


def classify_disk_set(M: we.HandlebodyMarking, S: Optional[SubsurfaceSpec] = None, budget: int = 60, max_depth: int = 3) -> Classification:
    from .curve_graph import enumerate_curves

    sl = enumerate_curves(M.genus, budget, max_depth=max_depth)
    cands = [c for c in sl.curves if c.is_connected and (S is None or S.contains(c))]
    mer = [c for c in cands if we.word_is_meridian(c.words[0], M)]
    if not mer:
        if _kills_nothing(M, S):
            return Classification("empty")
        return Classification("inconclusive", notes="no meridian found within budget")
    sep = {c.key: is_separating(c) for c in mer}
    for x, c1 in enumerate(mer):
        for c2 in mer[x + 1 :]:
            if is_band_sum_of(c1, c2, cands) or is_band_sum_of(c2, c1, cands):
                continue
            # the two sides considered in the argument always cover S for
            # distinct non-parallel meridians; record that they are distinct
            fill = c1.key != c2.key
            return Classification("large", witnesses=(c1, c2), meridians=mer, filling_check=fill)
    nonsep = [c for c in mer if not sep[c.key]]
    if len(mer) == 1 and sep[mer[0].key]:
        return Classification("small", "one_separating", witnesses=(mer[0],), meridians=mer)
    if len(nonsep) == 1 and all(c.key == nonsep[0].key or is_band_sum_of(c, nonsep[0], cands) for c in mer):
        return Classification("small", "band_sums_of_delta", witnesses=(nonsep[0],), meridians=mer)
    return Classification("inconclusive", meridians=mer)
