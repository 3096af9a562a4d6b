import pytest
from hypothesis import given
from hypothesis import strategies as st

from handlebody_curves import word_engine as we
from handlebody_curves.surface_model import (
    CurveError,
    build_standard_surface,
    canonical_form,
    complement_regions,
    fills,
    from_normal_coordinates,
    from_word,
    from_words,
    geometric_intersection,
    is_separating,
    load_curve,
    save_curve,
    standard_curve,
    tighten,
)


@pytest.mark.parametrize("g", [2, 3, 4])
def test_triangulation_counts(g):
    S = build_standard_surface(g)
    assert len(S.edges) == 6 * g - 3
    assert len(S.triangles) == 4 * g - 2
    assert S.euler_characteristic() == 2 - 2 * g
    assert we.canonical_rotation(S.relator_from_edges()) == we.canonical_rotation(we.relator(g))


def test_standard_intersections():
    a1, b1, a2, b2 = (standard_curve(2, n) for n in ("a1", "b1", "a2", "b2"))
    assert geometric_intersection(a1, b1) == 1
    assert geometric_intersection(a1, a2) == 0
    assert geometric_intersection(a1, b2) == 0
    assert geometric_intersection(a1, a1) == 0


def test_inessential_and_nonsimple_words_rejected():
    for w in (we.relator(2), (), (1, 1)):
        with pytest.raises(CurveError):
            from_word(2, w)


def test_separating():
    assert is_separating(from_word(2, we.separating_word(1)))
    assert not is_separating(standard_curve(2, "b1"))
    assert not is_separating(standard_curve(2, "a1"))


def test_complement_of_a1():
    (r,) = complement_regions(standard_curve(2, "a1"))
    assert r.euler == -2


def test_filling_pair():
    assert not fills(standard_curve(2, "a1"), standard_curve(2, "b1"))


def test_normal_coordinates_round_trip():
    for n in ("a1", "b1", "a2", "b2"):
        c = standard_curve(2, n)
        back = tighten(from_normal_coordinates(2, canonical_form(c).edge_weights))
        assert back.key == c.key


def test_curve_file_round_trip(tmp_path):
    c = from_word(2, we.parse_word("a1 a2"))
    p = tmp_path / "c.curve"
    save_curve(c, str(p))
    assert load_curve(str(p), 2).key == c.key
    p.write_text("word b2 a2 B2 A2\n")
    assert load_curve(str(p), 2).key == from_word(2, we.separating_word(1)).key


def test_multicurve_components():
    m = from_words(2, [(1,), (3,)])
    assert len(m.components) == 2
    assert geometric_intersection(m, standard_curve(2, "b1")) == 1


SIMPLE = ["a1", "b1", "a2", "b2", "a1 a2", "a1 b1", "a1 B1", "b1 b2", "a1 b1 b1", "b2 a2 B2 A2", "a1 b1 a2", "a2 b2"]
simple = st.sampled_from(SIMPLE).map(lambda t: from_word(2, we.parse_word(t)))


@given(simple, simple)
def test_intersection_symmetric(c, d):
    assert geometric_intersection(c, d) == geometric_intersection(d, c)


@given(simple, st.integers(min_value=1, max_value=3))
def test_conjugate_words_give_same_curve(c, k):
    w = c.words[0]
    rot = w[k % len(w):] + w[: k % len(w)]
    assert from_word(2, rot).key == c.key
    assert from_word(2, we.inverse(w)).key == c.key


@given(simple)
def test_retracing_is_stable(c):
    again = tighten(from_normal_coordinates(2, canonical_form(c).edge_weights))
    assert again.key == c.key
    assert again.crossing_number == c.crossing_number


@given(simple, simple)
def test_intersection_parity_matches_homology(c, d):
    # algebraic intersection has the parity of the geometric one
    u, v = we.exponent_sums(c.words[0], 2), we.exponent_sums(d.words[0], 2)
    alg = sum(u[2 * i] * v[2 * i + 1] - u[2 * i + 1] * v[2 * i] for i in range(2))
    assert (geometric_intersection(c, d) - alg) % 2 == 0
    assert geometric_intersection(c, d) >= abs(alg)
