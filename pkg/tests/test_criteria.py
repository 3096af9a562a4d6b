import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from handlebody_curves import word_engine as we
from handlebody_curves.criteria import (
    CompressionArc,
    build_product_model,
    compression_arc_check,
    extension_checker,
    fg_fixture,
    hlimits_case_detector,
    hlimits_fixture,
    homology_class,
    m_of_c,
    omega,
    standard_fiber,
    twist_homology,
    twist_piece_fixture,
)
from handlebody_curves.dynamics import MappingClass, apply_mapping_class
from handlebody_curves.surface_model import CurveError, from_word, geometric_intersection, standard_curve


@pytest.mark.parametrize("gY,b", [(1, 1), (0, 3), (1, 2), (2, 1), (2, 2)])
def test_product_model_genus(gY, b):
    model = build_product_model(gY, b)
    assert model.genus == 2 * gY + b - 1
    assert model.marking.quotient_rank() == model.genus
    # phi is a left inverse of both sections
    for x in range(1, model.rank + 1):
        for side in (-1, 1):
            assert model.phi(model.copy((x,), side)) == (x,)


@pytest.mark.parametrize("gY,b", [(1, 3), (0, 4)])
def test_unsupported_models(gY, b):
    with pytest.raises(CurveError):
        build_product_model(gY, b)


@pytest.mark.parametrize("c", ["a1", "b1", "a1 b1", "a1 B1"])
def test_sigma_pairs_copies(c):
    model = build_product_model(1, 1)
    w = we.parse_word(c)
    lo, hi = model.copy_curve(w, -1), model.copy_curve(w, 1)
    assert model.sigma(lo).key == hi.key
    assert model.sigma(hi).key == lo.key
    assert geometric_intersection(lo, hi) == 0


@pytest.mark.parametrize("gY,b,c", [(1, 1, "a1"), (1, 1, "a1 b1"), (1, 2, "b1"), (1, 2, "a1 a2")])
def test_m_of_c_is_a_meridian(gY, b, c):
    model = build_product_model(gY, b)
    m = m_of_c(model, c)
    assert we.word_is_meridian(m.words[0], model.marking)
    w = we.parse_word(c)
    assert geometric_intersection(m, model.copy_curve(w, -1)) == 0
    assert geometric_intersection(m, model.copy_curve(w, 1)) == 0


def test_m_of_c_rejects_peripheral():
    model = build_product_model(1, 1)
    with pytest.raises(CurveError):
        m_of_c(model, model.boundary_words[0])
    # every simple curve of a pair of pants is peripheral
    pants = build_product_model(0, 3)
    for c in ("a1", "b1", "a1 b1"):
        with pytest.raises(CurveError):
            m_of_c(pants, c)


def test_compression_arcs():
    m = build_product_model(1, 1)
    assert compression_arc_check(m, standard_fiber(m)).kind == "compression_arc"
    assert compression_arc_check(m, CompressionArc((-1, 0), (-1, 0), ())).kind in ("neither", "same_component_wave")
    z = build_product_model(1, 2).with_subbundle([1, 2], [(1, 2, -1, -2)])
    assert compression_arc_check(z, CompressionArc((-1, 0), (1, 0), we.parse_word("a2"))).kind == "neither"


def test_hlimits_case1():
    lam, M, models, approx = hlimits_fixture("case1")
    d = hlimits_case_detector(lam, M, models, approximants=approx)
    assert d.verdict == "case1"
    assert we.word_is_meridian(d.witness.words[0], M)
    assert geometric_intersection(d.witness, lam) == 0


def test_hlimits_star():
    lam, M, models, approx = hlimits_fixture("star")
    d = hlimits_case_detector(lam, M, models, approximants=approx)
    assert d.verdict == "exceptional_star"
    mu, side = d.witness
    assert geometric_intersection(mu, lam) == 0
    assert all(geometric_intersection(s, lam) > 0 for s in side)


def test_hlimits_case3():
    lam, M, models, approx = hlimits_fixture("case3")
    d = hlimits_case_detector(lam, M, models, approximants=approx)
    assert d.verdict == "case3"
    model, i, j, arc = d.witness
    assert model.sigma(lam.component(i)).key == lam.component(j).key


def test_extension_F_and_G():
    spec, model, _ = fg_fixture("F")
    v = extension_checker(spec, model.marking)
    assert v.label() == "extends_case3(1,2)"
    spec, model, _ = fg_fixture("G")
    v = extension_checker(spec, model.marking)
    assert v.verdict == "no_evidence"
    assert any("homology differs" in line for line in v.transcript)


def test_extension_twist_piece():
    spec, M = twist_piece_fixture()
    assert extension_checker(spec, M).label() == "extends_case2(1)"


NAMES = ["a1", "b1", "a2", "b2", "a1 a2", "a1 b1", "b1 b2"]
curve = st.sampled_from(NAMES).map(lambda t: from_word(2, we.parse_word(t)))


@settings(max_examples=25)
@given(curve, curve, st.sampled_from([1, -1, 2]))
def test_twist_homology_matches_curves(t, c, k):
    # homology of a curve is defined up to orientation
    f = MappingClass(2, ((t, k),))
    got = twist_homology(f, homology_class(c))
    img = homology_class(apply_mapping_class(f, c))
    assert got == img or got == tuple(-x for x in img)


@given(curve, curve)
def test_omega_antisymmetric_and_bounds_intersection(c, d):
    u, v = homology_class(c), homology_class(d)
    assert omega(u, v) == -omega(v, u)
    assert abs(omega(u, v)) <= geometric_intersection(c, d)
