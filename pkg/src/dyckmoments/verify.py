"""The combined self-check run by ``dyckmoments verify-all N``."""

from __future__ import annotations

from fractions import Fraction
from math import comb

import numpy as np

from . import lattice, moments, series, spectra, trees
from .poly import Poly
from .report import Report

DISTS = ("constant:1", "uniform:0,1", "two_point:1/2,1,2")


def check_path_counts(nmax: int) -> Report:
    r = Report("path counts", info={"n_max": nmax})
    for n in range(nmax + 1):
        r.check(f"dyck n={n}", lattice.count_paths("dyck", n), lattice.catalan(n))
        r.check(f"generalized n={n}", lattice.count_paths("generalized", n), comb(2 * n, n))
    return r


def check_closed_forms(nmax: int) -> Report:
    r = Report("closed forms", info={"n_max": nmax})
    for n in range(nmax + 1):
        A = lattice.weight_polynomial("A", n)
        W = lattice.weight_polynomial("W", n)
        r.check(f"flajolet_A n={n}", lattice.closed_form("flajolet_A", n), A)
        r.check(f"touchard_A n={n}", lattice.closed_form("touchard_A", n), A)
        r.check(f"theorem_W n={n}", lattice.closed_form("theorem_W", n), W)
        r.check(f"nested_W n={n}", lattice.closed_form("nested_W", n), W)
        r.check(f"flajolet_B n={n}", lattice.closed_form("flajolet_B", n), lattice.weight_polynomial("B", n))
        ret = sum((lattice.closed_form("returns_A", n, k) for k in range(n + 1)), Poly())
        r.check(f"returns n={n}", ret, A)
    return r


def check_series(order: int, seed: int) -> list[Report]:
    out = []
    for rel in ("decoupling", "chain_A", "chain_B", "harmonic", "lemma_rk"):
        out.append(series.verify_relation(rel, order))
    for depth in range(1, 5):
        rep = series.verify_relation("contfrac", order, depth=depth)
        rep.name = f"contfrac depth {depth}"
        out.append(rep)
    out.append(series.verify_relation("lemma_Rk", order, seed=seed))
    return out


def check_trees(nmax: int) -> Report:
    r = Report("trees", info={"n_max": nmax})
    for n in range(1, nmax + 1):
        comps = lattice.compositions(n)
        s1 = sum((trees.phi(1, c) for c in comps), Fraction(0))
        s2 = sum((trees.phi(2, c) for c in comps), Fraction(0))
        if n >= 2:
            r.check(f"sum phi1 n={n}", s1, 0)
        r.check(f"sum phi2 n={n}", s2, 2 * n)
        for target in trees.TARGETS:
            r.check(f"{target} n={n}", trees.reconstruct(target, n), trees.invert_oracle(target, n))
        if n <= 5:
            for cls in (1, 2, 3, 4):
                for c in comps:
                    r.check(f"phi{cls}{c} factorized", trees.phi(cls, c), trees.phi_bruteforce(cls, c))
    return r


def check_spectra(mmax: int, seed: int, samples: int, workers: int) -> list[Report]:
    out = []
    r = Report("expected entry11", info={"m_max": mmax})
    for name in DISTS:
        d = spectra.DistributionSpec.parse(name)
        for m in range(mmax + 1):
            target = d.evaluate(moments.alpha(m).value)
            for n in (m + 1, 2 * m + 3):
                r.check(f"{name} m={m} n={n}", spectra.exact_expected("entry11", n, 2 * m, d), target)
            r.check(f"{name} odd k={2 * m + 1}", spectra.exact_expected("trace", m + 2, 2 * m + 1, d), 0)
    out.append(r)
    u = spectra.DistributionSpec.parse("uniform:0,1")
    for m in range(1, min(mmax, 3) + 1):
        out.append(spectra.interior_row_check(2 * m + 3, m, u))
    c1 = spectra.DistributionSpec.parse("constant:1")
    for m in range(1, min(mmax, 3) + 1):
        rep = spectra.asymptotic_check(m, c1, range(2 * m + 1, 4 * mmax + 1))
        rep.name = f"asymptotics m={m}"
        out.append(rep)

    mc = Report("monte carlo", info={"samples": samples, "seed": seed})
    res = spectra.mc_estimate("entry11", 7, 4, u, samples, seed=seed, workers=workers)
    exact = spectra.exact_expected("entry11", 7, 4, u)
    mc.info["entry11"] = res.to_json_obj()
    mc.check("entry11 n=7 k=4 within 4 SE", abs(res.mean - float(exact)) <= 4 * res.std_error, True)
    out.append(mc)

    tau = Report("tau consistency", info={"samples": 20, "seed": seed})
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, 1 << 20])))
    for s in range(20):
        n = int(rng.integers(1, 31))
        k = int(rng.integers(0, 9))
        off = u.sample(rng, (n - 1,))
        tau.merge(spectra.tau_consistency(n, k, off))
    out.append(tau)
    return out


def verify_all(N: int, seed: int = 0, samples: int = 20000, workers: int = 1) -> list[Report]:
    """Every module's self-checks at size N, in a fixed order."""
    if N < 1:
        raise ValueError("N must be at least 1")
    reports = [check_path_counts(min(2 * N, 12)), check_closed_forms(N)]
    reports += check_series(2 * N + 1, seed)
    reports.append(moments.check_recurrences(N))
    bridge = Report("expectation bridge")
    for n in range(N + 1):
        bridge.merge(moments.expectation_bridge(n))
    reports.append(bridge)
    reports.append(check_trees(N))
    reports += check_spectra(N, seed, samples, workers)
    return reports
