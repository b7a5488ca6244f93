from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dyckmoments.poly import (
    Family,
    MissingSymbolError,
    MixedAlgebraError,
    Poly,
    SymbolId,
    a,
    alpha,
    b,
    evaluate_numeric,
    expectation_substitute,
    m,
)

SYMS = [a(0), a(1), a(2), b(0), b(1)]


@st.composite
def polys(draw, max_terms=4):
    total = Poly()
    for _ in range(draw(st.integers(0, max_terms))):
        c = Fraction(draw(st.integers(-5, 5)), draw(st.integers(1, 4)))
        term = Poly.const(c)
        for _ in range(draw(st.integers(0, 3))):
            term = term * draw(st.sampled_from(SYMS))
        total = total + term
    return total


@settings(max_examples=60, deadline=None)
@given(polys(), polys(), polys())
def test_ring_laws(p, q, r):
    assert p + q == q + p
    assert p * q == q * p
    assert (p + q) + r == p + (q + r)
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert p - p == Poly()
    assert p * 1 == p and p + 0 == p


@settings(max_examples=60, deadline=None)
@given(polys())
def test_text_and_json_round_trip(p):
    assert Poly.parse(str(p)) == p
    assert Poly.from_json(p.to_json()) == p


def test_canonical_string():
    p = a(0) ** 2 * a(1) * 3 - m(2)
    assert str(p) == "3*a0^2*a1 + -1*m2"
    assert str(Poly()) == "0"
    assert str(Poly.const(Fraction(1, 2))) == "1/2"


def test_m0_and_index_zero_helpers_are_one():
    assert m(0) == Poly.const(1)
    assert alpha(0) == Poly.const(1)


def test_expectation_substitute_independence():
    # a0^2 a1 b0^3 -> m2 m1 m3 ; distinct symbols with equal exponents multiply
    p = a(0) ** 2 * a(1) * b(0) ** 3 + a(0) * a(1)
    assert expectation_substitute(p) == m(1) * m(2) * m(3) + m(1) ** 2


def test_expectation_substitute_rejects_moment_symbols():
    with pytest.raises(MixedAlgebraError):
        expectation_substitute(m(1) + a(0))


def test_evaluate_exact_and_missing():
    p = a(0) * a(1) + Fraction(1, 2)
    assert evaluate_numeric(p, {"a0": 2, "a1": Fraction(1, 3)}) == Fraction(7, 6)
    with pytest.raises(MissingSymbolError):
        evaluate_numeric(p, {"a0": 2})


def test_evaluate_float_is_reproducible():
    p = sum((a(i) * Fraction(1, i + 1) for i in range(3)), Poly())
    vals = {SymbolId(Family.A, i): 0.1 * (i + 1) for i in range(3)}
    assert evaluate_numeric(p, vals) == evaluate_numeric(p, vals)


def test_substitute_and_degrees():
    p = m(1) ** 2 + m(2)
    assert p.is_homogeneous(lambda s: s.index)
    q = p.substitute({SymbolId(Family.M, 1): alpha(1), SymbolId(Family.M, 2): alpha(2) - alpha(1) ** 2})
    assert q == alpha(2)
