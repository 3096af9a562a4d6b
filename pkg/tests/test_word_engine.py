from hypothesis import given
from hypothesis import strategies as st

from handlebody_curves import word_engine as we

G = 2
letters = st.sampled_from([x for k in range(1, 2 * G + 1) for x in (k, -k)])
words = st.lists(letters, max_size=14).map(tuple)
STD = we.HandlebodyMarking.standard(G)


def test_parse_and_format_round_trip():
    w = we.parse_word("a1 B1 a2 b2")
    assert w == (1, -2, 3, 4)
    assert we.format_word(w) == "a1 B1 a2 b2"


def test_relator_is_trivial():
    assert we.is_trivial_in_surface_group(we.relator(G), G)
    assert we.is_trivial_in_surface_group(we.relator(3), 3)


def test_generators_are_nontrivial():
    for k in range(1, 2 * G + 1):
        assert not we.is_trivial_in_surface_group((k,), G)


def test_quotient_images():
    assert we.quotient_image((1,), STD) == ""
    assert we.quotient_image((2,), STD) == "x1"
    assert we.word_is_meridian(we.separating_word(1), STD)


def test_genus_one_marking_rejected():
    import pytest

    with pytest.raises(we.WordError):
        we.HandlebodyMarking.standard(1)


@given(words)
def test_free_reduce_is_idempotent(w):
    r = we.free_reduce(w)
    assert we.free_reduce(r) == r
    assert all(a != -b for a, b in zip(r, r[1:]))


@given(words)
def test_inverse_cancels(w):
    assert we.free_reduce(w + we.inverse(w)) == ()


MARKINGS = [STD, we.HandlebodyMarking(G, ("a1",)), we.HandlebodyMarking(G, ("s1",)), we.HandlebodyMarking(3, ("a1", "s1"))]


@given(words, words, st.sampled_from(MARKINGS))
def test_quotient_is_a_homomorphism(u, v, M):
    qu, qv = we.quotient_word(u, M), we.quotient_word(v, M)
    lhs = we.quotient_word(u + v, M)
    assert we.quotient_word(lhs + we.inverse(qu + qv), M) == ()


@given(words, st.sampled_from(MARKINGS))
def test_based_and_cyclic_images_agree_on_triviality(w, M):
    # a based image is trivial only if the conjugacy class is
    if we.quotient_word(w, M) == ():
        assert we.is_trivial_in_quotient(w, M)


@given(words)
def test_standard_quotient_matches_free_projection(w):
    # standard body: kill every a_i, b_i -> x_i, then free reduction
    proj = we.free_reduce(x for x in w if abs(x) % 2 == 0)
    assert we.quotient_word(w, STD) == proj


@given(words)
def test_conjugation_invariance(w):
    for x in (1, 2, -3):
        c = we.free_reduce((x,) + w + (-x,))
        assert we.is_trivial_in_quotient(c, STD) == we.is_trivial_in_quotient(w, STD)
        assert we.is_trivial_in_surface_group(c, G) == we.is_trivial_in_surface_group(w, G)


@given(words)
def test_relator_insertion_keeps_surface_class(w):
    k = len(w) // 2
    v = w[:k] + we.relator(G) + w[k:]
    assert we.is_trivial_in_surface_group(v, G) == we.is_trivial_in_surface_group(w, G)
