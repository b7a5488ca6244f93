"""Truncated formal Laurent series in 1/z with polynomial coefficients.

A :class:`LaurentSeries` stores ``[S]_n``, the coefficient of ``z^{-n}``.
Every series carries a truncation order ``N``: coefficients with ``n > N``
are unknown (not zero) and asking for them raises
:class:`OrderExceededError`.  ``N = math.inf`` marks a series whose
coefficients are all known, e.g. ``z`` itself or a finite sum.

Orders are tracked pessimistically.  For ``S`` with order ``N1`` and
valuation ``d1`` (no nonzero coefficient below ``z^{-d1}``) and ``T`` with
``N2, d2`` the product is known through ``min(N1 + d2, N2 + d1)``.
"""

from __future__ import annotations

import json
import math
import random
from fractions import Fraction
from typing import Callable, Iterable, Mapping

from .lattice import ENUM_CAP, binom, weight_polynomial
from .poly import Family, Poly
from .report import Report

INF = math.inf


class OrderExceededError(ValueError):
    """A coefficient beyond the provable truncation order was requested."""

    def __init__(self, index, bound):
        self.index = index
        self.bound = bound
        super().__init__(f"coefficient z^-{index} is beyond the provable order {bound}")


class ParityError(ValueError):
    pass


def _as_poly(c) -> Poly:
    return c if isinstance(c, Poly) else Poly.const(c)


class LaurentSeries:
    """Immutable truncated series ``sum_n c_n z^{-n}``."""

    __slots__ = ("_coeffs", "order", "valuation")

    def __init__(self, coeffs: Mapping[int, Poly | int | Fraction] | None = None,
                 order: float = INF, valuation: float | None = None):
        order = order if order == INF else int(order)
        kept = {}
        for n, c in (coeffs or {}).items():
            n = int(n)
            if n > order:
                continue
            c = _as_poly(c)
            if c:
                kept[n] = c
        self._coeffs = kept
        self.order = order
        if valuation is None:
            if kept:
                valuation = min(kept)
            else:
                valuation = INF if order == INF else order + 1
        elif kept and min(kept) < valuation:
            raise ValueError("valuation bound is above a nonzero coefficient")
        self.valuation = valuation

    # -- construction -------------------------------------------------------

    @classmethod
    def zero(cls, order: float = INF) -> "LaurentSeries":
        return cls({}, order)

    @classmethod
    def one(cls) -> "LaurentSeries":
        return cls({0: Poly.const(1)})

    @classmethod
    def z(cls) -> "LaurentSeries":
        return cls({-1: Poly.const(1)})

    @classmethod
    def monomial(cls, exponent: int, coeff=1) -> "LaurentSeries":
        """``coeff * z^{-exponent}``, exact."""
        return cls({exponent: _as_poly(coeff)})

    # -- access -------------------------------------------------------------

    def __getitem__(self, n: int) -> Poly:
        if n > self.order:
            raise OrderExceededError(n, self.order)
        return self._coeffs.get(n, Poly())

    def get(self, n: int, default=None):
        if n > self.order:
            return default
        return self._coeffs.get(n, Poly())

    def items(self) -> list[tuple[int, Poly]]:
        """Known nonzero coefficients in increasing exponent order."""
        return sorted(self._coeffs.items())

    def is_exact(self) -> bool:
        return self.order == INF

    def leading_exponent(self) -> int | None:
        """Smallest exponent with a nonzero coefficient, or None if all known ones vanish."""
        return min(self._coeffs) if self._coeffs else None

    def degree(self) -> int | None:
        """``deg(S)``: the largest power of z carrying a nonzero coefficient."""
        lead = self.leading_exponent()
        return None if lead is None else -lead

    def truncate(self, order: int) -> "LaurentSeries":
        return LaurentSeries(self._coeffs, min(order, self.order))

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> "LaurentSeries | None":
        if isinstance(other, LaurentSeries):
            return other
        if isinstance(other, (Poly, int, Fraction)):
            return LaurentSeries({0: _as_poly(other)})
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        order = min(self.order, other.order)
        out = dict(self._coeffs)
        for n, c in other._coeffs.items():
            out[n] = out[n] + c if n in out else c
        return LaurentSeries(out, order, min(self.valuation, other.valuation))

    __radd__ = __add__

    def __neg__(self):
        return LaurentSeries({n: -c for n, c in self._coeffs.items()}, self.order, self.valuation)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (Poly, int, Fraction)):
            c = _as_poly(other)
            if not c:
                return LaurentSeries({}, INF)
            return LaurentSeries({n: v * c for n, v in self._coeffs.items()}, self.order, self.valuation)
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        d1, d2 = self.valuation, other.valuation
        if d1 == INF or d2 == INF:
            # one factor is exactly zero
            return LaurentSeries({}, INF)
        order = min(self.order + d2, other.order + d1)
        out: dict[int, Poly] = {}
        for n1, c1 in self._coeffs.items():
            for n2, c2 in other._coeffs.items():
                n = n1 + n2
                if n > order:
                    continue
                p = c1 * c2
                out[n] = out[n] + p if n in out else p
        return LaurentSeries(out, order, d1 + d2)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "LaurentSeries":
        if k < 0:
            return self.inverse() ** (-k)
        result = LaurentSeries.one()
        for _ in range(k):
            result = result * self
        return result

    def mul_z_power(self, j: int) -> "LaurentSeries":
        """Multiply by ``z^{-j}``; shifts every exponent up by ``j``."""
        val = self.valuation + j
        return LaurentSeries({n + j: c for n, c in self._coeffs.items()}, self.order + j, val)

    shift = mul_z_power

    def inverse(self, order: int | None = None) -> "LaurentSeries":
        """Multiplicative inverse.

        The leading coefficient must be a nonzero constant.  For a leading
        exponent ``d`` the result has valuation ``-d`` and order ``N - 2d``.
        Exact inputs need an explicit ``order`` unless they are a monomial.
        """
        d = self.leading_exponent()
        if d is None:
            raise ZeroDivisionError("series has no known nonzero coefficient")
        lead = self._coeffs[d]
        if not lead.is_constant():
            raise ValueError(f"leading coefficient {lead} is not a constant")
        inv0 = Fraction(1) / lead.constant_term()
        if self.order == INF and len(self._coeffs) == 1:
            return LaurentSeries({-d: Poly.const(inv0)})
        target = self.order - 2 * d
        if order is not None:
            target = min(target, order)
        if target == INF:
            raise ValueError("inverse of an exact non-monomial series needs an explicit order")
        target = int(target)
        # t_i with sum_{j<=i} s_{d+j} t_{i-j} = [i == 0]
        s = [self._coeffs.get(d + j, Poly()) for j in range(target + d + 1)]
        t: list[Poly] = [Poly.const(inv0)]
        for i in range(1, target + d + 1):
            acc = Poly()
            for j in range(1, i + 1):
                if s[j]:
                    acc = acc + s[j] * t[i - j]
            t.append(acc.scale(-inv0))
        return LaurentSeries({-d + i: c for i, c in enumerate(t)}, target, -d)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / Fraction(other))
        if isinstance(other, LaurentSeries):
            return self * other.inverse()
        return NotImplemented

    # -- comparison & output -----------------------------------------------

    def agrees_with(self, other: "LaurentSeries", order: float | None = None) -> bool:
        return not self.differences(other, order)

    def differences(self, other: "LaurentSeries", order: float | None = None) -> list:
        """``(n, self[n], other[n])`` for every disagreement up to the shared order."""
        top = min(self.order, other.order)
        if order is not None:
            top = min(top, order)
        if top == INF:
            keys = set(self._coeffs) | set(other._coeffs)
        else:
            lo = min(self.valuation, other.valuation)
            lo = int(lo) if lo != INF else int(top) + 1
            keys = set(range(lo, int(top) + 1))
        out = []
        for n in sorted(keys):
            x, y = self._coeffs.get(n, Poly()), other._coeffs.get(n, Poly())
            if x != y:
                out.append((n, x, y))
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return self.order == other.order and self._coeffs == other._coeffs

    def __hash__(self):
        return hash((self.order, tuple(self.items())))

    def to_json_obj(self) -> dict:
        return {
            "order": "inf" if self.order == INF else self.order,
            "coeffs": [[n, str(c)] for n, c in self.items()],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json_obj(cls, obj: Mapping) -> "LaurentSeries":
        order = INF if obj["order"] == "inf" else int(obj["order"])
        return cls({int(n): Poly.parse(c) for n, c in obj["coeffs"]}, order)

    def __repr__(self) -> str:
        body = " + ".join(f"({c})*z^-{n}" for n, c in self.items()) or "0"
        tail = "" if self.order == INF else f" + O(z^-{self.order + 1})"
        return f"LaurentSeries({body}{tail})"


# ---------------------------------------------------------------------------
# standard series
# ---------------------------------------------------------------------------


def _from_sequence(fn: Callable[[int], Poly], N: int, offset: int, step: int = 2) -> LaurentSeries:
    """Series with ``fn(n)`` at exponent ``step*n + offset`` through order N."""
    coeffs = {}
    n = 0
    while step * n + offset <= N:
        coeffs[step * n + offset] = fn(n)
        n += 1
    return LaurentSeries(coeffs, N, offset)


def series_from(kind: str, N: int, k: int = 0, coeffs: Iterable | None = None,
                cap: int = ENUM_CAP) -> LaurentSeries:
    """Build one of the standard series through order ``N``.

    kinds: ``W``, ``A``, ``B`` (with index shift ``k``) from path
    enumeration; ``g`` (index ``k``) and ``f`` from the moment closed forms;
    ``custom`` takes ``coeffs`` as the list ``[S]_0, [S]_1, ...``.
    """
    if N < 1:
        raise ValueError("truncation order must be at least 1")
    kind = kind.strip()
    if kind == "W":
        return _from_sequence(lambda n: weight_polynomial("W", n, cap=cap), N, 1)
    if kind in ("A", "B"):
        return _from_sequence(lambda n: weight_polynomial(kind, n, shift=k, cap=cap), N, 1)
    if kind == "g":
        from .moments import alpha_k

        if k == 0:
            return LaurentSeries.one()
        return _from_sequence(lambda n: alpha_k(n, k).value, N, k)
    if kind == "f":
        from .moments import omega

        return _from_sequence(lambda n: omega(n).value, N, 1)
    if kind == "custom":
        vals = list(coeffs or [])
        return LaurentSeries({i: _as_poly(c) for i, c in enumerate(vals)}, min(N, len(vals) - 1), 0)
    raise ValueError(f"unknown series kind {kind!r}")


def odd_series(s: Iterable, order: int | None = None) -> LaurentSeries:
    """``sum_k s_k z^{-(2k+1)}``; order defaults to the last supplied exponent."""
    s = [_as_poly(c) for c in s]
    top = 2 * len(s) - 1 if order is None else order
    return LaurentSeries({2 * i + 1: c for i, c in enumerate(s)}, top, 1)


# ---------------------------------------------------------------------------
# the reciprocal R = 1/(z - S) and coefficients of powers
# ---------------------------------------------------------------------------


def _check_odd_form(S: LaurentSeries) -> None:
    for n, c in S.items():
        if n < 1 or n % 2 == 0:
            raise ParityError(f"S must only have odd exponents >= 1; found z^-{n} coefficient {c}")


def reciprocal_z_minus(S: LaurentSeries, order: int | None = None) -> LaurentSeries:
    """``R = 1/(z - S)`` for ``S = sum s_k z^{-(2k+1)}``.

    Uses ``r_0 = 1`` and ``r_n = sum_{k<n} s_k r_{n-k-1}``.  The result is
    known through order ``N_S + 2``; exact inputs need ``order`` unless S = 0.
    """
    _check_odd_form(S)
    top = S.order + 2
    if order is not None:
        top = min(top, order)
    if top == INF:
        if not S.items():
            return LaurentSeries.monomial(1)
        raise ValueError("an exact S needs an explicit order")
    top = int(top)
    nmax = (top - 1) // 2
    s = [S.get(2 * j + 1, Poly()) for j in range(nmax)]
    r = [Poly.const(1)]
    for n in range(1, nmax + 1):
        acc = Poly()
        for j in range(n):
            if s[j]:
                acc = acc + s[j] * r[n - j - 1]
        r.append(acc)
    return LaurentSeries({2 * n + 1: c for n, c in enumerate(r)}, top, 1)


def power_coefficient(S: LaurentSeries, k: int, idx: int) -> Poly:
    """``[S^k]_idx`` by repeated truncated multiplication."""
    if k < 0:
        raise ValueError("k must be non-negative")
    P = S ** k
    if idx > P.order:
        raise OrderExceededError(idx, P.order)
    return P[idx]


def series_sum(terms: Iterable[LaurentSeries], N: int) -> LaurentSeries:
    """Sum a sequence whose valuations eventually pass N.

    Summation stops at the first term with valuation above ``N``; later
    terms are assumed to have valuations above N as well, which callers
    guarantee by supplying terms of increasing valuation.
    """
    total = LaurentSeries.zero()
    for t in terms:
        if t.valuation > N:
            break
        total = total + t
    return total.truncate(N)


# ---------------------------------------------------------------------------
# relation checks
# ---------------------------------------------------------------------------

RELATIONS = ("decoupling", "chain_A", "chain_B", "harmonic", "contfrac", "lemma_rk", "lemma_Rk")


def _compare(report: Report, lhs: LaurentSeries, rhs: LaurentSeries, N: int, tag=None) -> None:
    top = min(N, lhs.order, rhs.order)
    if top < N:
        report.fail(tag or "order", reason=f"only order {top} provable, asked for {N}")
    for n in range(0, int(top) + 1):
        label = n if tag is None else f"{tag}:z^-{n}"
        report.check(label, lhs.get(n), rhs.get(n))


def random_odd_series(N: int, seed: int = 0, pool: int = 3, max_terms: int = 2) -> LaurentSeries:
    """S with random small-rational Poly coefficients at odd exponents <= N."""
    rng = random.Random(seed)
    coeffs = {}
    for n in range(1, N + 1, 2):
        c = Poly()
        for _ in range(rng.randint(1, max_terms)):
            fam = rng.choice((Family.A, Family.B))
            mono = Poly.symbol(fam, rng.randrange(pool)) ** rng.randint(1, 2)
            c = c + mono * Fraction(rng.randint(-3, 3) or 1, rng.randint(1, 2))
        coeffs[n] = c
    return LaurentSeries(coeffs, N, 1)


def verify_relation(rel: str, N: int, depth: int = 2, seed: int = 0, k_max: int = 4,
                    m_max: int = 5, S: LaurentSeries | None = None) -> Report:
    """Check one series identity coefficient by coefficient through order N."""
    a0 = Poly.symbol(Family.A, 0)
    b0 = Poly.symbol(Family.B, 0)
    z = LaurentSeries.z()
    report = Report(rel, info={"order": N})
    if rel == "decoupling":
        W = series_from("W", N)
        D = z - (series_from("A", N, 1) * a0 + series_from("B", N, 1) * b0)
        _compare(report, W, D.inverse(), N)
    elif rel in ("chain_A", "chain_B"):
        fam = rel[-1]
        sym = Family.A if fam == "A" else Family.B
        for k in range(depth + 1):
            left = series_from(fam, N, k)
            inner = series_from(fam, N, k + 1) * Poly.symbol(sym, k)
            _compare(report, left, (z - inner).inverse(), N, tag=f"k={k}")
    elif rel == "harmonic":
        A = series_from("A", N)
        B = series_from("B", N)
        W = series_from("W", N)
        _compare(report, W, (A.inverse() + B.inverse() - z).inverse(), N)
    elif rel == "contfrac":
        if depth < 1:
            raise ValueError("continued fraction depth must be at least 1")
        report.info["depth"] = depth
        inner = z - series_from("A", N, depth + 1) * Poly.symbol(Family.A, depth)
        for j in range(depth - 1, -1, -1):
            inner = z - inner.inverse() * Poly.symbol(Family.A, j)
        _compare(report, series_from("A", N), inner.inverse(), N)
    elif rel == "lemma_rk":
        report.info["S"] = "custom" if S is not None else "a0*A1"
        if S is None:
            S = series_from("A", N, 1) * a0
        _check_odd_form(S)
        R = reciprocal_z_minus(S, order=N)
        # R (z - S) == 1
        _compare(report, R * (z - S), LaurentSeries.one(), N - 2, tag="unit")
        for n in range((N - 1) // 2 + 1):
            rhs = Poly()
            for k in range(n + 1):
                rhs = rhs + power_coefficient(S, k, 2 * n - k)
            report.check(f"r_{n}", R[2 * n + 1], rhs)
    elif rel == "lemma_Rk":
        if S is None:
            S = random_odd_series(max(N, 2 * m_max + k_max), seed=seed)
        R = reciprocal_z_minus(S)
        powers_S = [LaurentSeries.one()]
        for _ in range(2 * m_max):
            powers_S.append(powers_S[-1] * S)
        Rk = LaurentSeries.one()
        for k in range(1, k_max + 1):
            Rk = Rk * R
            for mm in range(m_max + 1):
                rhs = Poly()
                for n in range(mm + 1):
                    c = binom(n + k - 1, k - 1)
                    if c:
                        rhs = rhs + powers_S[n][2 * mm - n] * c
                report.check(f"k={k},m={mm}", Rk[2 * mm + k], rhs)
        report.info.update({"k_max": k_max, "m_max": m_max, "seed": seed})
    else:
        raise ValueError(f"unknown relation {rel!r}; expected one of {RELATIONS}")
    return report
