import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from handlebody_curves import word_engine as we
from handlebody_curves.curve_graph import enumerate_curves
from handlebody_curves.dynamics import (
    MappingClass,
    _twist_encoding,
    apply_mapping_class,
    cbod_orbit_experiment,
    from_lamination,
    iterate_to_limit,
    limit_set_sample,
    pml_vector,
    projective_distance,
    promote_hausdorff,
    to_lamination,
    twist_class,
)
from handlebody_curves.splice import twist
from handlebody_curves.surface_model import (
    CurveError,
    from_word,
    geometric_intersection,
    is_separating,
    standard_curve,
)

M = we.HandlebodyMarking.standard(2)
a1, b1, a2, b2 = (standard_curve(2, n) for n in ("a1", "b1", "a2", "b2"))
SEP = from_word(2, we.separating_word(1))


@pytest.mark.parametrize("k", [1, 2, 3, -1, -4])
def test_twist_intersection_formula(k):
    # i(T_c^k(a), b) = |k| i(a,c) i(c,b) when i(a,b) = 0
    assert geometric_intersection(twist(b1, a1, k), b1) == abs(k)
    assert geometric_intersection(twist(a1, b1, k), a1) == abs(k)


def test_twist_fixes_disjoint_curves():
    assert apply_mapping_class(twist_class(a1, 3), a2).key == a2.key


def test_mapping_class_inverse():
    f = MappingClass(2, ((a1, 1), (b1, -2), (b2, 1)))
    c = from_word(2, we.parse_word("a1 a2"))
    assert apply_mapping_class(f.inverse(), apply_mapping_class(f, c)).key == c.key
    with pytest.raises(CurveError):
        MappingClass(2, ((a1, 0),))


def test_pml_vector_and_distance():
    v = pml_vector(a1)
    assert v.total > 0
    assert projective_distance(v, v) == 0
    with pytest.raises(CurveError):
        projective_distance(v, type(v)((0,) * len(v.values)))


def test_iterate_identity_and_twist():
    r = iterate_to_limit(MappingClass(2), b1)
    assert r.converged and r.iterations == 0
    r = iterate_to_limit(twist_class(a1), b1, max_iter=64)
    # a twist's iterates converge projectively to its core
    assert r.distances[-1] < r.distances[0]
    assert projective_distance(r.limit_key, pml_vector(a1)) < Fraction(1, 10)


def test_iterate_limit_independent_of_seed():
    f = MappingClass(2, ((a1, 1), (b1, -1)))
    r1 = iterate_to_limit(f, b1, max_iter=40)
    r2 = iterate_to_limit(f, from_word(2, we.parse_word("a1 a2")), max_iter=40)
    assert r1.converged and r2.converged
    assert projective_distance(r1.limit_key, r2.limit_key) < Fraction(1, 100)


_cs = [c for c in enumerate_curves(2, 30).curves if not is_separating(c)]


@settings(max_examples=12)
@given(st.randoms(use_true_random=False), st.sampled_from([1, -1, 2, -3]))
def test_splice_twist_agrees_with_flipper(rnd, k):
    c, a, b = rnd.sample(_cs, 3)
    x = geometric_intersection(twist(a, c, k), b)
    img = from_lamination(2, _twist_encoding(c, k)(to_lamination(a)))
    y = int(to_lamination(b).geometric_intersection(to_lamination(img)))
    assert x == y


def test_separating_twist_via_chain_relation():
    # twisting along a separating curve acts trivially on curves it misses
    assert apply_mapping_class(twist_class(SEP), a1).key == a1.key
    img = from_lamination(2, _twist_encoding(SEP, 1)(to_lamination(b1)))
    assert img.key == b1.key
    c = from_word(2, we.parse_word("b1 b2"))
    t = twist(c, SEP, 1)
    img = from_lamination(2, _twist_encoding(SEP, 1)(to_lamination(c)))
    assert int(to_lamination(t).geometric_intersection(to_lamination(img))) == 0


def test_promote_strictly_decreasing():
    r = promote_hausdorff(b2, a1, M, n_terms=5)
    d = [t[2] for t in r["terms"]]
    assert all(y < x for x, y in zip(d, d[1:]))
    assert all(we.word_is_meridian(t[1].words[0], M) for t in r["terms"])


def test_limitset_deterministic():
    s1 = limit_set_sample(M, 5, 3, seed=7)
    s2 = limit_set_sample(M, 5, 3, seed=7)
    assert [x["key"] for x in s1] == [x["key"] for x in s2]
    assert all(we.word_is_meridian(x["curve"].words[0], M) for x in s1)


def test_cbod_constant_and_moving():
    curves = enumerate_curves(2, 40, max_depth=2).curves
    r = cbod_orbit_experiment(MappingClass(2, ((a1, 1), (a2, -1))), M, n_steps=3, slice_curves=curves)
    assert r["constant"] and r["unique_minimal_inside_M"] and r["antisymmetric"]
    r = cbod_orbit_experiment(twist_class(b1), M, n_steps=3, slice_curves=curves)
    assert r["moving"] and not r["constant"]
