from fractions import Fraction

from hypothesis import strategies as st

from diagtrace.poly import MultiPoly, T, d, p, x

VARS = [d(1), d(2), x(1), x(2), p(1), p(2), T]

coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=4).filter(lambda q: q != 0)
monomials = st.dictionaries(st.sampled_from(VARS), st.integers(1, 3), max_size=3)


@st.composite
def polys(draw, max_terms=4):
    items = draw(st.lists(st.tuples(monomials, coeffs), max_size=max_terms))
    return MultiPoly.from_terms((m, Fraction(q)) for m, q in items)
