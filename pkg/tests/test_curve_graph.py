import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from handlebody_curves import word_engine as we
from handlebody_curves.curve_graph import (
    disjoint,
    disk_set_enumerate,
    distance,
    enumerate_curves,
    geodesic,
    quasiconvexity_experiment,
)
from handlebody_curves.splice import twist
from handlebody_curves.surface_model import CurveError, from_word, geometric_intersection, standard_curve

M = we.HandlebodyMarking.standard(2)
SL = enumerate_curves(2, 40, max_depth=2)


def W(t):
    return from_word(2, we.parse_word(t))


def test_small_distances():
    a1, b1, a2 = (standard_curve(2, n) for n in ("a1", "b1", "a2"))
    assert distance(a1, a1, SL) == 0
    assert distance(a1, a2, SL) == 1
    assert distance(a1, b1, SL) == 2


def test_adjacency_matches_intersection():
    small = SL.curves[:40]
    for c, d in itertools.combinations(small, 2):
        assert disjoint(c, d) == (geometric_intersection(c, d) == 0)


def test_geodesic_is_a_path():
    i, j = SL.find(W("a1")), SL.find(W("b1"))
    p = geodesic(SL, i, j)
    assert p[0] == i and p[-1] == j and len(p) == 3
    for u, v in zip(p, p[1:]):
        assert geometric_intersection(SL.curves[u], SL.curves[v]) == 0


def test_unknown_curve():
    big = enumerate_curves(2, 10, max_depth=0)
    with pytest.raises(CurveError):
        big.find(W("a1 b1 b1"))


def test_disk_set_membership():
    keys = {SL.curves[i].key for i in disk_set_enumerate(M, SL)}
    for t in ("a1", "a2", "b2 a2 B2 A2"):
        assert W(t).key in keys
    for t in ("b1", "b2"):
        assert W(t).key not in keys


@settings(max_examples=20)
@given(st.sampled_from([SL.curves[i] for i in disk_set_enumerate(M, SL)]), st.sampled_from([1, -1, 2]))
def test_disk_set_closed_under_meridian_twist(m, k):
    d = twist(m, W("a1"), k)
    assert we.word_is_meridian(d.words[0], M)


vertex = st.integers(min_value=0, max_value=len(SL) - 1)


@settings(max_examples=30)
@given(vertex, vertex, vertex)
def test_triangle_inequality(i, j, k):
    c = SL.curves
    d = lambda x, y: distance(c[x], c[y], SL)
    assert d(i, k) <= d(i, j) + d(j, k)
    assert d(i, j) == d(j, i)


def test_quasiconvexity_small(tmp_path):
    rep = quasiconvexity_experiment(M, SL, trials=10, csv_path=str(tmp_path / "q.csv"), svg_path=str(tmp_path / "q.svg"))
    assert len(rep.rows) == 10
    assert rep.max_observed <= 2
    assert (tmp_path / "q.csv").read_text().startswith("pair_id,")
    assert "<svg" in (tmp_path / "q.svg").read_text()
