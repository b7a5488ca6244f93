from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dyckmoments.lattice import catalan
from dyckmoments.moments import (
    alpha,
    alpha_k,
    check_recurrences,
    expectation_bridge,
    moment_table,
    omega,
)
from dyckmoments.poly import Family, Poly, SymbolId, evaluate_numeric

from reference_tables import ALPHA_TABLE, OMEGA_TABLE


def test_tables():
    for n in range(6):
        assert alpha(n).value == ALPHA_TABLE[n]
        assert omega(n).value == OMEGA_TABLE[n]


def test_alpha_k_edges():
    assert alpha_k(0, 5).value == Poly.const(1)
    assert alpha_k(3, 0).value == Poly()
    for n in range(6):
        assert alpha_k(n, 1).value == alpha(n).value


def test_m0_never_appears():
    for n in range(7):
        for s in omega(n).value.symbols():
            assert s.index >= 1


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 8))
def test_weighted_homogeneity(n):
    for e in (alpha(n), omega(n)):
        if n:
            assert e.value.weighted_degrees(lambda s: s.index) == {n}


@pytest.mark.parametrize("n", range(11))
def test_all_ones(n):
    ones = lambda s: 1
    assert evaluate_numeric(alpha(n).value, ones) == catalan(n)
    assert evaluate_numeric(omega(n).value, ones) == comb(2 * n, n)


def test_recurrences():
    rep = check_recurrences(5)
    assert rep.passed, rep.mismatches[:3]


@pytest.mark.parametrize("n", range(6))
def test_bridge(n):
    assert expectation_bridge(n).passed


def test_table_formats():
    csv_text = moment_table(2, "csv")
    assert csv_text.splitlines()[0] == "sequence,n,poly"
    assert "omega_2,2,4*m1^2 + 2*m2" in csv_text
    assert moment_table(1, "json").startswith("[")
    with pytest.raises(ValueError):
        moment_table(1, "xml")
