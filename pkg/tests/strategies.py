"""Hypothesis strategies for small Laurent rational functions."""

from hypothesis import strategies as st

from geolin3.cas import RationalFunction as RF

coefficients = st.integers(-3, 3).filter(bool)
exponents = st.integers(-2, 2)


@st.composite
def laurent(draw, max_terms=3, allow_zero=True):
    n = draw(st.integers(0 if allow_zero else 1, max_terms))
    out = RF.const(0)
    for _ in range(n):
        out = out + RF.monomial({"x": draw(exponents), "y": draw(exponents)}, draw(coefficients))
    if not allow_zero and out.is_zero():
        out = RF.const(1)
    return out


@st.composite
def polynomial(draw, max_terms=3):
    n = draw(st.integers(1, max_terms))
    out = RF.const(draw(coefficients))
    for _ in range(n):
        out = out + RF.monomial({"x": draw(st.integers(0, 2)), "y": draw(st.integers(0, 2))},
                                draw(coefficients))
    return out
