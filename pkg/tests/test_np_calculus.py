from fractions import Fraction
from itertools import accumulate

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from slopelab.errors import EmptyMultiset, IntervalMismatch
from slopelab.np_calculus import (
    NewtonPolygon,
    OrderResult,
    SlopeMultiset,
    conv_preceq,
    dominance,
    negate,
    np_from_multiset,
    scale,
)

F = Fraction

rationals = st.builds(Fraction, st.integers(-8, 8), st.integers(1, 5))
multisets = st.lists(rationals, min_size=1, max_size=6).map(SlopeMultiset)


def oracle_dominance(a, b):
    """Partial sums straight from the definition, no shared code."""
    a, b = sorted(a), sorted(b)
    if len(a) != len(b) or sum(a) != sum(b):
        return "DifferentFrame"
    pa, pb = list(accumulate(a)), list(accumulate(b))
    ge = all(x >= y for x, y in zip(pa, pb))
    le = all(x <= y for x, y in zip(pa, pb))
    if ge and le:
        return "Equal"
    return "DominatesOrEqual" if ge else "DominatedOrEqual" if le else "Incomparable"


def test_polygon_examples():
    assert np_from_multiset([0]).breakpoints == ((0, 0), (1, 0))
    assert np_from_multiset([-1, 0]).breakpoints == ((0, 0), (1, -1), (2, -1))
    assert np_from_multiset([F(1, 2), F(1, 2)]).breakpoints == ((0, 0), (2, 1))


def test_empty_multiset_rejected():
    with pytest.raises(EmptyMultiset):
        np_from_multiset([])


def test_dominance_examples():
    assert dominance([F(-1, 2), F(-1, 2)], [-1, 0]) is OrderResult.DOMINATES
    assert dominance([0, 1], [0, 1]) is OrderResult.EQUAL
    assert dominance([0, 3], [1, 1]) is OrderResult.DIFFERENT_FRAME
    assert str(OrderResult.DOMINATES) == "DominatesOrEqual"


def test_incomparable_pair():
    assert dominance([0, 0, 3], [-1, 2, 2]) is OrderResult.INCOMPARABLE


def test_scale_examples():
    assert scale(2, [0, F(1, 2)]) == SlopeMultiset([0, 1])
    assert negate([-1, 0]) == SlopeMultiset([0, 1])
    assert scale(3, [F(1, 3)] * 3) == SlopeMultiset([1, 1, 1])


def test_floats_rejected():
    with pytest.raises(TypeError):
        SlopeMultiset([0.5])


def test_conv_preceq_examples():
    f, g = np_from_multiset([0, 1]), np_from_multiset([F(1, 2), F(1, 2)])
    assert conv_preceq(f, g)
    assert not conv_preceq(g, f)
    assert conv_preceq(f, f)
    with pytest.raises(IntervalMismatch):
        conv_preceq(f, np_from_multiset([0, 0, 1]))


def test_polygon_validation():
    with pytest.raises(ValueError):
        NewtonPolygon([(0, 0), (1, 1), (2, 1)])  # concave
    with pytest.raises(ValueError):
        NewtonPolygon([(0, 0), (1, 1), (2, 2)])  # collinear interior point


def test_json_roundtrip():
    m = SlopeMultiset([F(-1, 2), 0, F(7, 3)])
    assert m.to_json() == ["-1/2", "0", "7/3"]
    assert SlopeMultiset.from_json(m.to_json()) == m
    assert SlopeMultiset.parse("-1/2, 0, 7/3") == m
    assert SlopeMultiset.parse('["-1/2", "0", "7/3"]') == m
    P = np_from_multiset(m)
    assert NewtonPolygon.from_json(P.to_json()) == P


@given(multisets)
def test_roundtrip(m):
    assert np_from_multiset(m).slopes() == m


@given(multisets, multisets)
def test_dominance_matches_oracle(a, b):
    assert dominance(a, b).value == oracle_dominance(a, b)


@st.composite
def same_frame(draw, k=3):
    """k multisets of one size and total: perturb a base by zero-sum moves."""
    n = draw(st.integers(1, 5))
    base = draw(st.lists(rationals, min_size=n, max_size=n))
    out = []
    for _ in range(k):
        xs = list(base)
        for _ in range(draw(st.integers(0, 3))):
            i, j = draw(st.integers(0, n - 1)), draw(st.integers(0, n - 1))
            d = draw(rationals)
            xs[i] += d
            xs[j] -= d
        out.append(SlopeMultiset(xs))
    return out


@given(same_frame())
def test_partial_order_laws(ms):
    a, b, c = ms
    assert dominance(a, a) is OrderResult.EQUAL
    ab, ba = dominance(a, b), dominance(b, a)
    if ab is OrderResult.DOMINATES:
        assert ba is OrderResult.DOMINATED
    if ab is OrderResult.EQUAL:
        assert a == b
    ge = {OrderResult.DOMINATES, OrderResult.EQUAL}
    if ab in ge and dominance(b, c) in ge:
        assert dominance(a, c) in ge


@given(multisets, st.builds(Fraction, st.integers(1, 6), st.integers(1, 4)))
def test_positive_scaling_scales_polygon(m, a):
    P, Q = np_from_multiset(m), np_from_multiset(scale(a, m))
    for t in range(len(m) + 1):
        assert Q(t) == a * P(t)


@given(multisets, st.builds(Fraction, st.integers(-6, -1), st.integers(1, 4)))
def test_negative_scaling_is_elementwise(m, a):
    assert scale(a, m) == SlopeMultiset(sorted(a * x for x in m))


@given(same_frame(k=2))
def test_preceq_agrees_with_dominance(ms):
    f, g = ms
    expected = dominance(g, f) in {OrderResult.DOMINATES, OrderResult.EQUAL}
    assert conv_preceq(np_from_multiset(f), np_from_multiset(g)) is expected


@settings(max_examples=50)
@given(multisets)
def test_polygon_convex_through_origin(m):
    P = np_from_multiset(m)
    assert P.breakpoints[0] == (0, 0)
    assert P.length == len(m)
    slopes = [s for s, _ in P.segments()]
    assert all(x < y for x, y in zip(slopes, slopes[1:]))
