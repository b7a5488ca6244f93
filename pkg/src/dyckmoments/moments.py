"""Expected weight polynomials as polynomials in the moments m_1, m_2, ...

``alpha(n)`` is the expectation of the Dyck weight polynomial A_n,
``omega(n)`` that of the generalized weight polynomial W_n and
``alpha_k(n, k)`` that of the coefficient ``[A^k]_{k+2n}``.  All three are
computed from sums over compositions; the recurrences and series identities
they satisfy are checked separately by :func:`check_recurrences`.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from functools import lru_cache

from .lattice import binom, comp_pairs, compositions, rho1, rho2, weight_polynomial
from .poly import Family, Poly, SymbolId, expectation_substitute, m
from .report import Report

SEQUENCES = ("alpha", "omega", "alpha_k")


@dataclass(frozen=True)
class MomentExpr:
    value: Poly
    seq: str
    n: int
    k: int | None = None

    @property
    def label(self) -> str:
        if self.seq == "alpha_k":
            return f"alpha_{self.n}^({self.k})"
        return f"{self.seq}_{self.n}"

    def __str__(self) -> str:
        return str(self.value)


def _mono(c) -> Poly:
    """m(c) = prod_j m_{c_j}; the empty composition gives 1."""
    exps: dict = {}
    for part in c:
        s = SymbolId(Family.M, part)
        exps[s] = exps.get(s, 0) + 1
    return Poly.monomial(exps)


@lru_cache(maxsize=None)
def _alpha_k(n: int, k: int) -> Poly:
    if n == 0:
        return Poly.const(1)
    total = Poly()
    for c in compositions(n):
        w = binom(c[0] + k - 1, k - 1) * rho1(c)
        if w:
            total = total + _mono(c) * w
    return total


@lru_cache(maxsize=None)
def _omega(n: int) -> Poly:
    total = Poly()
    for p, q in comp_pairs(n):
        total = total + _mono(p) * _mono(q) * rho2((p, q))
    return total


def _nonneg(*xs: int) -> None:
    if any(x < 0 for x in xs):
        raise ValueError("indices must be non-negative")


def alpha(n: int) -> MomentExpr:
    _nonneg(n)
    return MomentExpr(_alpha_k(n, 1), "alpha", n)


def omega(n: int) -> MomentExpr:
    _nonneg(n)
    return MomentExpr(_omega(n), "omega", n)


def alpha_k(n: int, k: int) -> MomentExpr:
    _nonneg(n, k)
    return MomentExpr(_alpha_k(n, k), "alpha_k", n, k)


def moment_weight(s) -> int:
    """Weight j of the symbol m_j (and of alpha_j, omega_j)."""
    return s.index


# ---------------------------------------------------------------------------
# checks
# ---------------------------------------------------------------------------


def _rhs_alphas(n: int, k: int) -> Poly:
    total = Poly()
    for j in range(n + 1):
        c = binom(j + k - 1, k - 1)
        if c:
            total = total + m(j) * _alpha_k(n - j, j) * c
    return total


def _rhs_omega_simple(n: int) -> Poly:
    total = Poly()
    for j in range(n + 1):
        for l in range(n - j + 1):
            total = total + m(j) * _alpha_k(l, j) * _alpha_k(n - j - l, j + 1)
    return total


def _rhs_omega(n: int) -> Poly:
    total = Poly()
    for j in range(n + 1):
        for i in range(j + 1):
            for l in range(n - j + 1):
                total = total + (m(i) * m(j - i) * _alpha_k(l, i) * _alpha_k(n - j - l, j - i)) * binom(j, i)
    return total


def check_recurrences(N: int, series: bool = True) -> Report:
    """Recurrences linking alpha^(k), omega and the moments, for n, k <= N.

    The series identities among g_k and f are checked to order 2N+1.
    """
    if N < 1:
        raise ValueError("N must be at least 1")
    report = Report("recurrences", info={"N": N})
    sub = Report("alpha_k recurrence")
    for n in range(N + 1):
        for k in range(N + 1):
            sub.check(f"n={n},k={k}", _alpha_k(n, k), _rhs_alphas(n, k))
    report.merge(sub)
    sub = Report("omega via m_j alpha^(j) alpha^(j+1)")
    for n in range(N + 1):
        sub.check(f"n={n}", _omega(n), _rhs_omega_simple(n))
    report.merge(sub)
    sub = Report("omega via binomial double sum")
    for n in range(N + 1):
        sub.check(f"n={n}", _omega(n), _rhs_omega(n))
    report.merge(sub)
    if series:
        for r in check_series_identities(N):
            report.merge(r)
    return report


def check_series_identities(N: int) -> list[Report]:
    from .series import series_from, series_sum

    T = 2 * N + 1
    g = {}

    def gs(j):
        if j not in g:
            g[j] = series_from("g", T, j)
        return g[j]

    out = []
    rep = Report("g_k series identity")
    for k in range(N + 1):
        terms = (gs(j).mul_z_power(j + k) * (m(j) * binom(j + k - 1, k - 1)) for j in range(T + 2))
        rhs = series_sum(terms, T)
        lhs = gs(k)
        for e in range(T + 1):
            rep.check(f"k={k},z^-{e}", lhs[e], rhs[e])
    out.append(rep)

    f = series_from("f", T)
    rep = Report("f as sum of m_j g_j g_(j+1)")
    rhs = series_sum((gs(j) * gs(j + 1) * m(j) for j in range(T + 2)), T)
    for e in range(T + 1):
        rep.check(f"z^-{e}", f[e], rhs[e])
    out.append(rep)

    rep = Report("f as binomial double sum")

    def terms():
        for j in range(T + 2):
            acc = None
            for i in range(j + 1):
                t = (gs(i) * gs(j - i)).mul_z_power(j + 1) * (m(i) * m(j - i) * binom(j, i))
                acc = t if acc is None else acc + t
            yield acc

    rhs = series_sum(terms(), T)
    for e in range(T + 1):
        rep.check(f"z^-{e}", f[e], rhs[e])
    out.append(rep)
    return out


def expectation_bridge(n: int) -> Report:
    """alpha(n) and omega(n) against expectations of enumerated weight polynomials."""
    report = Report("expectation bridge", info={"n": n})
    report.check("alpha", alpha(n).value, expectation_substitute(weight_polynomial("A", n)))
    report.check("omega", omega(n).value, expectation_substitute(weight_polynomial("W", n)))
    return report


# ---------------------------------------------------------------------------
# tables
# ---------------------------------------------------------------------------


def moment_rows(nmax: int, k: int = 2, sequences=("alpha", "omega")) -> list[tuple]:
    rows = []
    for seq in sequences:
        for n in range(nmax + 1):
            if seq == "alpha":
                e = alpha(n)
            elif seq == "omega":
                e = omega(n)
            elif seq == "alpha_k":
                e = alpha_k(n, k)
            else:
                raise ValueError(f"unknown sequence {seq!r}")
            rows.append((e.label, n, str(e.value)))
    return rows


def moment_table(nmax: int, fmt: str = "csv", k: int = 2, sequences=("alpha", "omega")) -> str:
    rows = moment_rows(nmax, k, sequences)
    if fmt == "json":
        objs = [{"sequence": s, "n": n, "poly": p} for s, n, p in rows]
        return json.dumps(objs, sort_keys=True, separators=(",", ":"))
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["sequence", "n", "poly"])
        w.writerows(rows)
        return buf.getvalue()
    if fmt == "text":
        return "".join(f"{s} = {p}\n" for s, _, p in rows)
    raise ValueError(f"unknown format {fmt!r}")
