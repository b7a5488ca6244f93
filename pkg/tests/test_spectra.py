from fractions import Fraction as F
from math import comb

import numpy as np
import pytest

from dyckmoments.lattice import CapExceededError, catalan
from dyckmoments.moments import alpha, omega
from dyckmoments.spectra import (
    DistributionError,
    DistributionSpec,
    JacobiSample,
    asymptotic_check,
    csv_rows,
    draw_offdiag,
    exact_expected,
    interior_row_check,
    mc_estimate,
    path_graph_trace,
    tau_consistency,
)

U = DistributionSpec.parse("uniform:0,1")
C1 = DistributionSpec.parse("constant:1")
TP = DistributionSpec.parse("two_point:1/2,1,2")


def test_parse_and_moments():
    assert U.moment(3) == F(1, 4)
    assert DistributionSpec.parse("uniform:2").moment(2) == F(4, 3)
    assert DistributionSpec.parse("exponential:2").moment(3) == F(6, 8)
    assert TP.moment(2) == F(5, 2)
    assert DistributionSpec.parse("constant:3").moment(4) == 81
    assert str(TP) == "two_point:1/2,1,2"


@pytest.mark.parametrize("text", ["uniform:-1", "two_point:1,1,2", "gauss:1", "constant:", "uniform:1,2"])
def test_bad_distributions(text):
    with pytest.raises(DistributionError):
        DistributionSpec.parse(text)


def test_exponential_cap():
    with pytest.raises(CapExceededError):
        DistributionSpec.parse("exponential:1").moment(21)


def test_samples_positive():
    rng = np.random.default_rng(0)
    for d in (U, C1, TP, DistributionSpec.parse("exponential:3")):
        assert np.all(d.sample(rng, 1000) > 0)


def test_exact_examples():
    assert exact_expected("entry11", 3, 4, U) == F(7, 12)
    assert exact_expected("trace", 6, 5, U) == 0
    for m in range(5):
        assert exact_expected("entry11", m + 1, 2 * m, C1) == catalan(m)


def test_entry11_constant_in_n():
    for m in range(4):
        want = TP.evaluate(alpha(m).value)
        assert {exact_expected("entry11", n, 2 * m, TP) for n in range(m + 1, m + 5)} == {want}


def test_trace_matches_integer_matrix_power():
    for n in range(1, 12):
        for k in (2, 4, 6):
            assert exact_expected("trace", n, k, C1) == path_graph_trace(n, k)


def test_interior_rows():
    rep = interior_row_check(5, 2, U)
    assert rep.passed
    assert U.evaluate(omega(2).value) == F(5, 3)
    assert interior_row_check(5, 2, C1).info["omega_m"] == comb(4, 2)
    with pytest.raises(ValueError):
        interior_row_check(4, 2, U)


def test_asymptotics_small():
    rep = asymptotic_check(1, C1, range(3, 15))
    assert rep.passed
    # constant(1), m=1: E Tr(H_n^2) = 2(n-1), so the deficit is exactly 2/n
    for row in rep.info["table"]:
        assert row["deficit"] == F(2, row["n"])


def test_mc_constant_has_zero_variance():
    r = mc_estimate("trace", 6, 4, C1, 50, seed=1)
    assert r.std_error == 0.0 and r.mean == float(exact_expected("trace", 6, 4, C1))


def test_mc_spectral_k0_is_total_mass():
    r = mc_estimate("spectral_moments", 9, 0, U, 64, seed=2)
    assert abs(r.mean - 1.0) < 1e-12


def test_mc_reproducible_across_workers_and_prefix_stable():
    a = mc_estimate("entry11", 5, 4, U, 9000, seed=7, workers=1)
    b = mc_estimate("entry11", 5, 4, U, 9000, seed=7, workers=3)
    assert a == b
    full = draw_offdiag(U, 5, 9000, seed=7)
    part = draw_offdiag(U, 5, 100, seed=7, start=4090)
    assert np.array_equal(full[4090:4190], part)


def test_mc_agrees_with_exact():
    r = mc_estimate("entry11", 6, 4, U, 20000, seed=11)
    assert abs(r.mean - 7 / 12) < 4 * r.std_error


def test_empirical_moments_equal_trace_over_n():
    r1 = mc_estimate("empirical_moments", 8, 4, U, 300, seed=5)
    r2 = mc_estimate("trace", 8, 4, U, 300, seed=5)
    assert abs(r1.mean - r2.mean / 8) < 1e-10


def test_tau_consistency_examples():
    s = JacobiSample(2, np.array([3.0]))
    for k in (0, 1, 2):
        assert tau_consistency(2, k, s).passed
    lam, q2 = s.eig()
    assert np.isclose(np.dot(q2, lam**2), 3.0)
    assert tau_consistency(1, 3, np.zeros(0)).passed


def test_tau_consistency_random():
    rng = np.random.default_rng(3)
    for _ in range(30):
        n = int(rng.integers(2, 31))
        rep = tau_consistency(n, int(rng.integers(0, 9)), U.sample(rng, n - 1))
        assert rep.passed, rep.mismatches


def test_jacobi_sample_validation():
    with pytest.raises(ValueError):
        JacobiSample(3, np.array([1.0, -1.0]))
    s = JacobiSample(3, np.array([2.0, 5.0]))
    assert np.allclose(np.sort(np.linalg.eigvals(s.H()).real), np.linalg.eigvalsh(s.J()))


def test_csv_rows():
    text = csv_rows([{"kind": "trace", "n": 3, "k": 2, "dist": "constant:1", "exact": 4}])
    assert text.splitlines() == ["kind,n,k,dist,exact,mc_mean,mc_stderr,N,seed", "trace,3,2,constant:1,4,,,,"]
