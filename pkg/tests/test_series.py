import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dyckmoments.poly import Poly, a, b
from dyckmoments.series import (
    RELATIONS,
    LaurentSeries,
    OrderExceededError,
    ParityError,
    odd_series,
    power_coefficient,
    random_odd_series,
    reciprocal_z_minus,
    series_from,
    verify_relation,
)


def test_series_from_examples():
    A = series_from("A", 5)
    assert A[1] == Poly.const(1) and A[3] == a(0) and A[2] == Poly()
    assert series_from("W", 3)[3] == a(0) + b(0)
    g0 = series_from("g", 7, 0)
    assert g0.items() == [(0, Poly.const(1))]
    with pytest.raises(ValueError):
        series_from("A", 0)


def test_unknown_coefficients_are_refused():
    A = series_from("A", 5)
    with pytest.raises(OrderExceededError) as e:
        A[7]
    assert e.value.bound == 5


def test_product_order_rule():
    S = LaurentSeries({1: 1, 3: a(0)}, order=5)  # valuation 1
    T = LaurentSeries({0: 1, 2: b(0)}, order=4)  # valuation 0
    assert (S * T).order == min(5 + 0, 4 + 1)
    z = LaurentSeries.z()
    assert (S * z).order == 4


def test_degree_is_additive():
    S = LaurentSeries({1: 2, 3: a(0)}, order=9)
    T = LaurentSeries({-1: 1, 1: b(0)}, order=9)
    assert (S * T).degree() == S.degree() + T.degree()


def test_inverse_round_trip():
    S = LaurentSeries({-1: 1, 1: -a(0), 3: -b(1)}, order=11)
    inv = S.inverse()
    assert inv.order == 13
    assert (S * inv).differences(LaurentSeries.one(), 11) == []
    with pytest.raises(ValueError):
        LaurentSeries({0: a(0)}, order=3).inverse()


def test_reciprocal_examples():
    R0 = reciprocal_z_minus(LaurentSeries.zero())
    assert R0.items() == [(1, Poly.const(1))] and R0.is_exact()
    s0, s1 = a(0), a(1) + b(0)
    R = reciprocal_z_minus(odd_series([s0, s1]))
    assert R[3] == s0
    assert R[5] == s0**2 + s1
    with pytest.raises(ParityError):
        reciprocal_z_minus(LaurentSeries({2: a(0)}, order=4))


def test_power_coefficient_examples():
    S = random_odd_series(9, seed=3)
    assert power_coefficient(S, 0, 0) == Poly.const(1)
    assert power_coefficient(series_from("A", 5), 1, 3) == a(0)
    assert power_coefficient(S, 2, 2) == S[1] ** 2
    with pytest.raises(OrderExceededError):
        power_coefficient(S, 3, 40)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10_000))
def test_reciprocal_times_z_minus_s_is_one(seed):
    S = random_odd_series(9, seed=seed)
    R = reciprocal_z_minus(S)
    prod = R * (LaurentSeries.z() - S)
    assert prod.differences(LaurentSeries.one()) == []
    assert prod.order >= 9


@pytest.mark.parametrize("rel", [r for r in RELATIONS if r != "contfrac"])
def test_relations_hold(rel):
    rep = verify_relation(rel, 11)
    assert rep.passed, rep.mismatches[:3]
    assert rep.checked > 0


@pytest.mark.parametrize("depth", [1, 2, 3, 4])
def test_contfrac(depth):
    assert verify_relation("contfrac", 11, depth=depth).passed


def test_lemma_rk_with_random_series():
    rep = verify_relation("lemma_rk", 9, S=random_odd_series(9, seed=1))
    assert rep.passed and rep.info["S"] == "custom"


def test_differences_list_both_sides():
    W, A = series_from("W", 5), series_from("A", 5)
    diff = W.differences(A)
    assert [n for n, _, _ in diff] == [3, 5]
    assert diff[0][1] == a(0) + b(0) and diff[0][2] == a(0)


def test_json_round_trip():
    S = series_from("W", 7)
    obj = json.loads(S.to_json())
    assert obj["order"] == 7
    assert LaurentSeries.from_json_obj(obj) == S
    assert obj["coeffs"][0] == [1, "1"]


def test_parity_structure_of_standard_series():
    for S in (series_from("W", 9), series_from("A", 9, 2), series_from("B", 9, 1), series_from("f", 9)):
        assert all(n % 2 == 1 for n, _ in S.items())
    for k in range(4):
        assert all(n % 2 == k % 2 for n, _ in series_from("g", 9, k).items())


def test_scalar_and_fraction_ops():
    S = LaurentSeries({0: 1, 2: a(0)}, order=6)
    assert (S * Fraction(1, 2))[2] == a(0) / 2
    assert (S - S).items() == []
    assert (S + 1)[0] == Poly.const(2)
