from fractions import Fraction

import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from diagtrace.poly import (
    POWER_SUM_WEIGHTS,
    Family,
    MultiPoly,
    T,
    VarId,
    coefficient_of,
    d,
    factor_content,
    is_homogeneous,
    p,
    parse,
    substitute,
    weighted_degree,
    x,
    y,
)
from strategies import VARS, polys

V = MultiPoly.var


def test_add_examples():
    assert parse("x1 + x2") + parse("-x1") == V(x(2))
    f = parse("3*d1*x2^2 - 1/2*t")
    assert f + MultiPoly() == f
    assert V(d(1)) * V(x(1)) + V(d(1)) * V(x(1)) == parse("2*d1*x1")


def test_mul_examples():
    assert (V(x(1)) + V(x(2))) * (V(x(1)) - V(x(2))) == parse("x1^2 - x2^2")
    f = parse("d1*p3 - 7/3")
    assert f * MultiPoly.const(1) == f
    q1 = V(p(1))
    lhs = (q1 - V(d(1)) * V(T)) ** 2
    assert lhs == parse("p1^2 - 2*d1*p1*t + d1^2*t^2")


def test_substitute_examples():
    img = parse("d1*x1 + d2*x2")
    assert substitute(V(p(1)) ** 2, {p(1): img}) == parse("d1^2*x1^2 + 2*d1*d2*x1*x2 + d2^2*x2^2")
    f = parse("p1^2 - d1*p2 + t")
    assert substitute(f, {}) == f
    base = parse("p1^2 - d1*p2")
    assert not substitute(base, {p(1): parse("d1*x1"), p(2): parse("d1*x1^2")})


def test_substitution_is_simultaneous():
    f = parse("d1^2*d2")
    assert substitute(f, {d(1): V(d(2)), d(2): V(d(3))}) == parse("d2^2*d3")


def test_coefficient_of_examples():
    f = parse("3*t^2 + (d1 + p1)*t + 5")
    assert coefficient_of(f, T, 1) == parse("d1 + p1")
    assert not coefficient_of(f, T, f.degree_in(T) + 1)
    g = parse("(p1 - d1*t)*(p2 - d1*t^2)")
    assert coefficient_of(g, T, 3) == parse("d1^2")
    assert coefficient_of(g, T, 0) == parse("p1*p2")
    with pytest.raises(ValueError):
        coefficient_of(g, T, -1)


def test_weighted_degree_examples():
    assert weighted_degree(parse("p3*p1*t^2"), {p(3): 3, p(1): 1, T: 1}) == 6
    assert weighted_degree(parse("p3*p1*t^2*d1^5"), POWER_SUM_WEIGHTS) == 6
    assert is_homogeneous(parse("p2 + p1^2"))
    assert not is_homogeneous(parse("p2 + p1"))
    assert weighted_degree(MultiPoly(), POWER_SUM_WEIGHTS) == -1


def test_varid_invariants():
    with pytest.raises(ValueError):
        p(0)
    with pytest.raises(ValueError):
        VarId(Family.T, (1,))
    with pytest.raises(ValueError):
        VarId(Family.Y, (1,))
    assert sorted([y(1, 2), T, p(2), x(1), d(3), p(1)]) == [d(3), x(1), p(1), p(2), T, y(1, 2)]


def test_rational_coefficients_canonical():
    f = parse("2/4*x1 - 0*x2 + 3/1")
    assert f.terms() == [({x(1): 1}, mpq(1, 2)), ({}, mpq(3))]
    assert f.to_text() == "1/2*x1 + 3"
    assert parse("x1 - x1").to_text() == "0"
    with pytest.raises(TypeError):
        MultiPoly.const(0.5)


def test_canonical_text_order():
    f = parse("t + p1 + x2 + x1 + d2 + d1 + 1 + y1_1*c2")
    assert f.to_text() == "d1 + d2 + x1 + x2 + p1 + t + c2*y1_1 + 1"
    assert parse("d1*d2*(d1+d2)^2").to_text() == "d1^3*d2 + 2*d1^2*d2^2 + d1*d2^3"


def test_parse_errors():
    for bad in ["", "x1 +", "p0", "2/0", "z1", "(x1", "x1 x2"]:
        with pytest.raises(ValueError):
            parse(bad)


def test_factor_content():
    assert factor_content(parse("d1^3*d2 + 2*d1^2*d2^2 + d1*d2^3")) == "d1*d2*(d1^2 + 2*d1*d2 + d2^2)"
    assert factor_content(parse("-4*d1^2*d2 - 4*d1*d2^2")) == "-4*d1*d2*(d1 + d2)"


# -- properties ---------------------------------------------------------------


@settings(max_examples=1000, deadline=None)
@given(polys(), polys(), polys())
def test_ring_axioms(f, g, h):
    assert f + g == g + f
    assert f * g == g * f
    assert (f + g) + h == f + (g + h)
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert f - f == MultiPoly()


@settings(max_examples=1000, deadline=None)
@given(polys(), polys(), st.dictionaries(st.sampled_from(VARS), polys(max_terms=2), max_size=3))
def test_substitute_is_homomorphism(f, g, bindings):
    assert substitute(f + g, bindings) == substitute(f, bindings) + substitute(g, bindings)
    assert substitute(f * g, bindings) == substitute(f, bindings) * substitute(g, bindings)


@settings(max_examples=300, deadline=None)
@given(polys(max_terms=6))
def test_serialization_round_trip(f):
    text = f.to_text()
    g = parse(text)
    assert g == f
    assert g.to_text() == text


@settings(max_examples=300, deadline=None)
@given(st.lists(st.tuples(st.sampled_from(VARS), st.integers(1, 3)), min_size=1, max_size=3), polys(max_terms=3))
def test_mul_adds_weighted_degrees(mono, g):
    f = MultiPoly.const(1)
    for v, e in mono:
        f = f * V(v, e)
    if is_homogeneous(g) and g:
        prod = f * g
        assert is_homogeneous(prod)
        assert weighted_degree(prod, POWER_SUM_WEIGHTS) == weighted_degree(f, POWER_SUM_WEIGHTS) + weighted_degree(g, POWER_SUM_WEIGHTS)


@settings(max_examples=200, deadline=None)
@given(polys(), st.sampled_from(VARS))
def test_coefficients_reassemble(f, v):
    total = MultiPoly()
    for e in range(f.degree_in(v) + 1):
        total = total + coefficient_of(f, v, e) * V(v, e) if e else total + coefficient_of(f, v, e)
    assert total == f


def test_fraction_inputs():
    f = MultiPoly.from_terms([({x(1): 1}, Fraction(1, 3)), ({x(1): 1}, Fraction(2, 3))])
    assert f == V(x(1))
