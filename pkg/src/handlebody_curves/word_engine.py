"""Exact fundamental-group semantics for curves on the closed genus-g surface.

Letters are nonzero integers.  Generator ``a_i`` is ``2*i - 1`` and ``b_i`` is
``2*i`` (1-based ``i``); a negative integer is the inverse letter.  Words are
tuples of letters and are read as cyclic words whenever they stand for free
homotopy classes.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

Word = tuple

_TOKEN = re.compile(r"([abABxX])(\d+)")


class WordError(ValueError):
    pass


def letter(name: str) -> int:
    m = _TOKEN.fullmatch(name)
    if not m:
        raise WordError(f"bad letter {name!r}")
    kind, idx = m.group(1), int(m.group(2))
    if idx < 1:
        raise WordError(f"bad letter {name!r}")
    base = 2 * idx - 1 if kind.lower() == "a" else 2 * idx
    return base if kind.islower() else -base


def letter_name(x: int) -> str:
    g = abs(x)
    idx = (g + 1) // 2
    name = ("a" if g % 2 else "b") + str(idx)
    return name if x > 0 else name.upper()


def parse_word(text: str, genus: Optional[int] = None) -> Word:
    """Parse ``"a1 B1 a2"`` (whitespace optional) into a word."""
    text = text.strip()
    if text in ("", "1", "e"):
        return ()
    stripped = re.sub(r"\s+", "", text)
    tokens = _TOKEN.findall(stripped)
    if "".join(k + i for k, i in tokens) != stripped:
        raise WordError(f"cannot parse word {text!r}")
    w = tuple(letter(k + i) for k, i in tokens)
    if genus is not None:
        check_genus(w, genus)
    return w


def format_word(w: Sequence[int]) -> str:
    return " ".join(letter_name(x) for x in w)


def check_genus(w: Sequence[int], genus: int) -> None:
    for x in w:
        if abs(x) > 2 * genus:
            raise WordError(f"letter {letter_name(x)} outside genus {genus}")


def inverse(w: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(w))


def free_reduce(w: Iterable[int]) -> Word:
    out: list[int] = []
    for x in w:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def cyclic_reduce(w: Iterable[int]) -> Word:
    w = free_reduce(w)
    i, j = 0, len(w) - 1
    while i < j and w[i] == -w[j]:
        i += 1
        j -= 1
    return w[i : j + 1]


def rotations(w: Sequence[int]) -> list[Word]:
    w = tuple(w)
    return [w[i:] + w[:i] for i in range(len(w))] or [()]


def canonical_rotation(w: Sequence[int]) -> Word:
    """Least rotation of a cyclic word; a cheap conjugacy-class key."""
    return min(rotations(w)) if w else ()


def commutator(x: Sequence[int], y: Sequence[int]) -> Word:
    return free_reduce(tuple(x) + tuple(y) + inverse(x) + inverse(y))


def relator(genus: int) -> Word:
    r: list[int] = []
    for i in range(1, genus + 1):
        a, b = 2 * i - 1, 2 * i
        r += [a, b, -a, -b]
    return tuple(r)


def separating_word(k: int) -> Word:
    """The standard separating curve ``s_k = [a1,b1]...[ak,bk]``."""
    return relator(k)


def exponent_sums(w: Iterable[int], genus: int) -> list[int]:
    out = [0] * (2 * genus)
    for x in w:
        out[abs(x) - 1] += 1 if x > 0 else -1
    return out


# ---------------------------------------------------------------- Dehn's algorithm


class _RelatorTable:
    """Cyclic permutations of ``r`` and ``r^-1`` keyed by their first letter.

    Each letter occurs exactly once in the surface relator, so for a given
    first letter there are exactly two candidate relator cycles.
    """

    def __init__(self, rel: Sequence[int]):
        self.n = len(rel)
        self.by_first: dict[int, list[Word]] = {}
        for cyc in (tuple(rel), inverse(rel)):
            for r in rotations(cyc):
                self.by_first.setdefault(r[0], []).append(r)


_TABLES: dict[Word, _RelatorTable] = {}


def _table(rel: Sequence[int]) -> _RelatorTable:
    key = tuple(rel)
    if key not in _TABLES:
        _TABLES[key] = _RelatorTable(key)
    return _TABLES[key]


def _dehn_step(w: list[int], table: _RelatorTable, cyclic: bool) -> bool:
    """Perform one Dehn replacement in place; False if none applies."""
    n = len(w)
    half = table.n // 2
    for i in range(n):
        for r in table.by_first.get(w[i], ()):
            k = 0
            limit = n if cyclic else n - i
            while k < limit and k < table.n and w[(i + k) % n] == r[k]:
                k += 1
            if k > half:
                if k == table.n and not cyclic:
                    repl: list[int] = []
                else:
                    repl = list(inverse(r[k:]))
                if cyclic and i + k > n:
                    # rotate so the match does not wrap
                    w[:] = w[i:] + w[:i]
                    i = 0
                w[i : i + k] = repl
                return True
    return False


def dehn_reduce(w: Sequence[int], rel: Sequence[int], cyclic: bool = False) -> Word:
    """Dehn's algorithm against the one-relator presentation ``<gens | rel>``.

    Valid as a solution of the word problem when ``rel`` satisfies C'(1/6),
    which holds for the surface relator in genus at least 2.
    """
    table = _table(rel)
    cur = list(cyclic_reduce(w) if cyclic else free_reduce(w))
    budget = len(cur) + 1
    while budget > 0 and cur:
        budget -= 1
        if not _dehn_step(cur, table, cyclic):
            break
        cur = list(cyclic_reduce(cur) if cyclic else free_reduce(cur))
    return tuple(cur)


def is_trivial_in_surface_group(w: Sequence[int], genus: int) -> bool:
    return len(dehn_reduce(w, relator(genus), cyclic=True)) == 0


def surface_reduce(w: Sequence[int], genus: int) -> Word:
    """Cyclically Dehn-reduced representative, rotated to a canonical start."""
    return canonical_rotation(dehn_reduce(w, relator(genus), cyclic=True))


# ---------------------------------------------------------------- markings

CATALOGUE_HELP = "a<i> kills a meridian generator, s<k> kills [a1,b1]...[ak,bk]"


@dataclass(frozen=True)
class _Factor:
    kind: str  # "free" | "abelian" | "surface"
    gens: tuple  # generator letters (positive ints) of the factor
    rel: Word = ()


@dataclass(frozen=True)
class HandlebodyMarking:
    """A compression body given by a catalogue of killed curves.

    ``killed`` holds names ``a<i>`` and ``s<k>``.  The standard handlebody
    kills every ``a_i``.  ``transport`` optionally carries the marking along a
    mapping class: a curve is a meridian of the transported body when its
    image under ``transport`` is a meridian of the catalogue body.
    """

    genus: int
    killed: tuple = ()
    transport: Optional[Callable] = field(default=None, compare=False, hash=False)
    label: str = field(default="", compare=False)
    images: Optional[tuple] = None

    def __post_init__(self):
        if self.genus < 2:
            raise WordError("genus must be at least 2")
        if self.images is not None:
            if self.killed:
                raise WordError("a marking is given either by killed curves or by images, not both")
            if len(self.images) != 2 * self.genus:
                raise WordError("need one image word per generator")
            if free_reduce(_apply_images(relator(self.genus), self.images)):
                raise WordError("images do not kill the surface relator")
            gens = {abs(x) for w in self.images for x in w}
            if gens != set(range(1, self.genus + 1)):
                raise WordError("images must use exactly the free generators x1..xg")
        for name in self.killed:
            m = re.fullmatch(r"([as])(\d+)", name)
            if not m:
                raise WordError(f"not a catalogue curve: {name!r} ({CATALOGUE_HELP})")
            i = int(m.group(2))
            top = self.genus if m.group(1) == "a" else self.genus - 1
            if not 1 <= i <= top:
                raise WordError(f"catalogue curve {name} outside genus {self.genus}")

    @classmethod
    def from_images(cls, genus: int, images, label: str = "") -> "HandlebodyMarking":
        """Handlebody given by an epimorphism onto the free group of rank g.

        ``images[k]`` is the image of generator letter ``k+1`` as a word in
        free letters ``1..g``.  Every such epimorphism is induced by a
        handlebody bounded by the surface, so meridians are exactly the
        essential simple curves in its kernel.
        """
        return cls(genus, (), None, label, tuple(tuple(w) for w in images))

    @classmethod
    def standard(cls, genus: int) -> "HandlebodyMarking":
        return cls(genus, tuple(f"a{i}" for i in range(1, genus + 1)), label="standard")

    @property
    def killed_a(self) -> frozenset:
        return frozenset(int(n[1:]) for n in self.killed if n[0] == "a")

    @property
    def cuts(self) -> tuple:
        return tuple(sorted({int(n[1:]) for n in self.killed if n[0] == "s"}))

    @property
    def is_standard(self) -> bool:
        return self.killed_a == frozenset(range(1, self.genus + 1)) and self.transport is None

    def killed_words(self) -> list[Word]:
        out = []
        for n in self.killed:
            i = int(n[1:])
            out.append((2 * i - 1,) if n[0] == "a" else separating_word(i))
        return out

    def with_transport(self, transport: Callable, label: str = "") -> "HandlebodyMarking":
        return HandlebodyMarking(self.genus, self.killed, transport, label, self.images)

    def untransported(self) -> "HandlebodyMarking":
        return HandlebodyMarking(self.genus, self.killed, None, self.label, self.images)

    def factors(self) -> list[_Factor]:
        bounds = [0, *self.cuts, self.genus]
        out: list[_Factor] = []
        for lo, hi in zip(bounds, bounds[1:]):
            rest = []
            for i in range(lo + 1, hi + 1):
                if i in self.killed_a:
                    out.append(_Factor("free", (2 * i,)))
                else:
                    rest.append(i)
            if len(rest) == 1:
                i = rest[0]
                out.append(_Factor("abelian", (2 * i - 1, 2 * i)))
            elif rest:
                rel: list[int] = []
                for i in rest:
                    rel += [2 * i - 1, 2 * i, -(2 * i - 1), -2 * i]
                gens = tuple(x for i in rest for x in (2 * i - 1, 2 * i))
                out.append(_Factor("surface", gens, tuple(rel)))
        return out

    def quotient_rank(self) -> int:
        """Rank of the free group when every factor is free, else -1."""
        if self.images is not None:
            return self.genus
        fs = self.factors()
        return len(fs) if all(f.kind == "free" for f in fs) else -1


def _factor_index(marking: HandlebodyMarking) -> tuple[list[_Factor], dict[int, int]]:
    fs = marking.factors()
    where = {}
    for j, f in enumerate(fs):
        for x in f.gens:
            where[x] = j
    return fs, where


def _syllable_reduce(f: _Factor, syl: Sequence[int], cyclic: bool) -> Word:
    if f.kind == "free":
        x = f.gens[0]
        e = sum(1 if y > 0 else -1 for y in syl)
        return (x,) * e if e >= 0 else (-x,) * (-e)
    if f.kind == "abelian":
        a, b = f.gens
        ea = sum((1 if y > 0 else -1) for y in syl if abs(y) == a)
        eb = sum((1 if y > 0 else -1) for y in syl if abs(y) == b)
        return (a,) * ea + (-a,) * (-ea) + (b,) * eb + (-b,) * (-eb)
    return dehn_reduce(syl, f.rel, cyclic=cyclic)


def _apply_images(w: Sequence[int], images) -> list:
    out: list[int] = []
    for x in w:
        im = images[abs(x) - 1]
        out.extend(im if x > 0 else inverse(im))
    return out


def _project(w: Sequence[int], marking: HandlebodyMarking) -> Word:
    killed = {2 * i - 1 for i in marking.killed_a}
    return tuple(x for x in w if abs(x) not in killed)


def quotient_normal_form(w: Sequence[int], marking: HandlebodyMarking) -> Word:
    """Cyclic syllable reduction of ``w`` in the compression-body group.

    Returns the empty word exactly when ``w`` is conjugate to the identity.
    Surviving letters keep their surface names; ``b_i`` with ``a_i`` killed
    stands for the free generator ``x_i``.
    """
    if marking.images is not None:
        return cyclic_reduce(_apply_images(w, marking.images))
    fs, where = _factor_index(marking)
    cur = cyclic_reduce(_project(w, marking))
    while cur:
        # split into maximal syllables (cyclically)
        n = len(cur)
        start = 0
        if len({where[abs(x)] for x in cur}) > 1:
            while where[abs(cur[start - 1])] == where[abs(cur[start])]:
                start += 1
        rot = cur[start:] + cur[:start]
        syls: list[tuple[int, list[int]]] = []
        for x in rot:
            j = where[abs(x)]
            if syls and syls[-1][0] == j:
                syls[-1][1].append(x)
            else:
                syls.append((j, [x]))
        single = len(syls) == 1
        changed = False
        rebuilt: list[int] = []
        for j, syl in syls:
            red = _syllable_reduce(fs[j], syl, cyclic=single)
            if len(red) != len(syl) or tuple(red) != tuple(syl):
                changed = True
            rebuilt.extend(red)
        nxt = cyclic_reduce(rebuilt)
        if not changed and len(nxt) == n:
            return nxt
        cur = nxt
    return ()


def quotient_word(w: Sequence[int], marking: HandlebodyMarking) -> Word:
    """Based image of ``w`` in the compression-body group.

    Free and abelian factors come out in normal form; surface factors are
    Dehn-reduced, which is enough to decide triviality.
    """
    if marking.images is not None:
        return free_reduce(_apply_images(w, marking.images))
    fs, where = _factor_index(marking)
    cur = free_reduce(_project(w, marking))
    while True:
        out: list[int] = []
        i = 0
        while i < len(cur):
            j = where[abs(cur[i])]
            k = i
            while k < len(cur) and where[abs(cur[k])] == j:
                k += 1
            out.extend(_syllable_reduce(fs[j], cur[i:k], cyclic=False))
            i = k
        nxt = free_reduce(out)
        if nxt == cur:
            return cur
        cur = nxt


def quotient_image(w: Sequence[int], marking: HandlebodyMarking) -> str:
    """Image in the quotient group as text; ``x_i`` names a free generator."""
    nf = quotient_normal_form(w, marking)
    if marking.images is not None:
        return " ".join(("x" if x > 0 else "X") + str(abs(x)) for x in nf)
    free_b = {2 * i for i in marking.killed_a}
    names = []
    for x in nf:
        if abs(x) in free_b:
            nm = "x" + str(abs(x) // 2)
            names.append(nm if x > 0 else nm.upper())
        else:
            names.append(letter_name(x))
    return " ".join(names)


def is_trivial_in_quotient(w: Sequence[int], marking: HandlebodyMarking) -> bool:
    return len(quotient_normal_form(w, marking)) == 0


def word_is_meridian(w: Sequence[int], marking: HandlebodyMarking) -> bool:
    """Essential on the surface and trivial in the catalogue body.

    Transport is not applied here since it needs the curve, not only the word.
    """
    return (not is_trivial_in_surface_group(w, marking.genus)) and is_trivial_in_quotient(w, marking)


def is_meridian(c, marking: HandlebodyMarking) -> bool:
    """Meridian test for a connected curve (anything exposing ``words``)."""
    words = c.words
    if len(words) != 1:
        raise WordError("is_meridian needs a connected curve")
    if marking.transport is not None:
        return is_meridian(marking.transport(c), marking.untransported())
    return word_is_meridian(words[0], marking)


def arc_is_wave(arc, marking: HandlebodyMarking) -> bool:
    """An arc of a curve with both ends on one meridian component is a wave
    when its closure along either complementary arc of that component is
    trivial in the body.  ``arc.closures`` holds the two closed words."""
    if getattr(arc, "component_ends", (0, 0))[0] != getattr(arc, "component_ends", (0, 0))[1]:
        raise WordError("wave endpoints on different components are not supported")
    return is_trivial_in_quotient(arc.closures[0], marking)
