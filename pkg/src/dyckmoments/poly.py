"""Exact sparse multivariate polynomials over the rationals.

Symbols come in five indexed families::

    a_i, b_i    recurrence coefficients (b_i stands for a_{-i-1})
    m_k         moments of the coefficient distribution
    alpha_n     moments of the limiting spectral measure
    omega_n     moments of the limiting empirical measure

Symbols are ordered by family (A < B < M < ALPHA < OMEGA) and then by
index.  Terms are kept in graded lexicographic order with respect to that
symbol order; the smallest symbol is the "largest" variable, so ``a0^2``
precedes ``a0*a1`` which precedes ``a1^2``.

A :class:`Poly` is immutable.  All arithmetic is exact; floats only show up
in :meth:`Poly.evaluate` when a float is supplied for some symbol.
"""

from __future__ import annotations

import enum
import json
import re
from fractions import Fraction
from numbers import Rational
from typing import Callable, Iterable, Iterator, Mapping, NamedTuple, Union

__all__ = [
    "Family",
    "SymbolId",
    "Monomial",
    "Poly",
    "a",
    "b",
    "m",
    "alpha",
    "omega",
    "MixedAlgebraError",
    "MissingSymbolError",
    "expectation_substitute",
    "evaluate_numeric",
]


class Family(enum.IntEnum):
    A = 0
    B = 1
    M = 2
    ALPHA = 3
    OMEGA = 4


_PREFIX = {
    Family.A: "a",
    Family.B: "b",
    Family.M: "m",
    Family.ALPHA: "alpha",
    Family.OMEGA: "omega",
}
_FAMILY_OF_PREFIX = {v: k for k, v in _PREFIX.items()}
_NAME_RE = re.compile(r"^(alpha|omega|a|b|m)(\d+)$")


class SymbolId(NamedTuple):
    family: Family
    index: int

    @property
    def name(self) -> str:
        return f"{_PREFIX[self.family]}{self.index}"

    @classmethod
    def parse(cls, name: str) -> "SymbolId":
        hit = _NAME_RE.match(name.strip())
        if hit is None:
            raise ValueError(f"not a symbol name: {name!r}")
        return cls(_FAMILY_OF_PREFIX[hit.group(1)], int(hit.group(2)))

    def __str__(self) -> str:
        return self.name


# A monomial is a tuple of (SymbolId, exponent) pairs sorted by symbol, with
# every exponent >= 1.  The empty tuple is the unit monomial.
Monomial = tuple

Number = Union[int, Fraction]
_SENTINEL = (SymbolId(Family(4), 1 << 62), 0)


def _mono_mul(x: Monomial, y: Monomial) -> Monomial:
    if not x:
        return y
    if not y:
        return x
    out = []
    i = j = 0
    while i < len(x) and j < len(y):
        sx, ex = x[i]
        sy, ey = y[j]
        if sx == sy:
            out.append((sx, ex + ey))
            i += 1
            j += 1
        elif sx < sy:
            out.append(x[i])
            i += 1
        else:
            out.append(y[j])
            j += 1
    out.extend(x[i:])
    out.extend(y[j:])
    return tuple(out)


def _mono_degree(x: Monomial) -> int:
    return sum(e for _, e in x)


def _grlex_key(x: Monomial):
    # sorts ascending into descending grlex order, see module docstring
    return (-_mono_degree(x), tuple((s, -e) for s, e in x) + (_SENTINEL,))


def _mono_str(x: Monomial) -> str:
    parts = []
    for s, e in x:
        parts.append(s.name if e == 1 else f"{s.name}^{e}")
    return "*".join(parts)


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, Rational)):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"coefficients must be rational, got {type(c).__name__}")


class MixedAlgebraError(ValueError):
    """Raised when a polynomial contains symbols outside the expected families."""


class MissingSymbolError(KeyError):
    """Raised by evaluation when a symbol has no assigned value."""

    def __init__(self, symbol: SymbolId):
        super().__init__(symbol.name)
        self.symbol = symbol

    def __str__(self) -> str:
        return f"no value assigned to symbol {self.symbol.name}"


class Poly:
    """Immutable sparse polynomial with :class:`~fractions.Fraction` coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Number] | Iterable | None = None):
        clean: dict = {}
        if terms:
            items = terms.items() if isinstance(terms, Mapping) else terms
            for mono, coeff in items:
                coeff = _as_fraction(coeff)
                if coeff:
                    mono = tuple(mono)
                    prev = clean.get(mono)
                    total = coeff if prev is None else prev + coeff
                    if total:
                        clean[mono] = total
                    else:
                        del clean[mono]
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> "Poly":
        # terms must already be canonical (no zero coefficients)
        p = cls.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    # construction helpers
    @classmethod
    def const(cls, c: Number) -> "Poly":
        c = _as_fraction(c)
        return cls._raw({(): c} if c else {})

    @classmethod
    def symbol(cls, family: Family, index: int) -> "Poly":
        if index < 0:
            raise ValueError("symbol indices are non-negative")
        return cls._raw({((SymbolId(Family(family), index), 1),): Fraction(1)})

    @classmethod
    def monomial(cls, exponents: Mapping[SymbolId, int], coeff: Number = 1) -> "Poly":
        mono = tuple(sorted((SymbolId(*s), int(e)) for s, e in exponents.items() if e))
        if any(e < 0 for _, e in mono):
            raise ValueError("negative exponent")
        return cls({mono: coeff})

    # views
    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self) -> list:
        """Terms as (monomial, coefficient) pairs in canonical order."""
        return sorted(self._terms.items(), key=lambda kv: _grlex_key(kv[0]))

    def __iter__(self) -> Iterator:
        return iter(self.items())

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def symbols(self) -> list[SymbolId]:
        return sorted({s for mono in self._terms for s, _ in mono})

    def families(self) -> set[Family]:
        return {s.family for s in self.symbols()}

    def total_degree(self) -> int:
        return max((_mono_degree(x) for x in self._terms), default=-1)

    def is_homogeneous(self, weight: Callable[[SymbolId], int] | None = None) -> bool:
        """True when every monomial has the same (optionally weighted) degree."""
        weight = weight or (lambda s: 1)
        degs = {sum(weight(s) * e for s, e in x) for x in self._terms}
        return len(degs) <= 1

    def weighted_degrees(self, weight: Callable[[SymbolId], int]) -> set[int]:
        return {sum(weight(s) * e for s, e in x) for x in self._terms}

    def constant_term(self) -> Fraction:
        return self._terms.get((), Fraction(0))

    def is_constant(self) -> bool:
        return all(not x for x in self._terms)

    def coefficient(self, exponents: Mapping[SymbolId, int]) -> Fraction:
        mono = tuple(sorted((SymbolId(*s), e) for s, e in exponents.items() if e))
        return self._terms.get(mono, Fraction(0))

    # ring arithmetic
    def _coerce(self, other) -> "Poly | None":
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Fraction, Rational)):
            return Poly.const(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if len(other._terms) > len(self._terms):
            big, small = other._terms, self._terms
        else:
            big, small = self._terms, other._terms
        out = dict(big)
        for mono, c in small.items():
            t = out.get(mono)
            if t is None:
                out[mono] = c
            else:
                t += c
                if t:
                    out[mono] = t
                else:
                    del out[mono]
        return Poly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw({x: -c for x, c in self._terms.items()})

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
        if isinstance(other, Poly):
            return self._mul_poly(other)
        if isinstance(other, (int, Fraction, Rational)):
            return self.scale(other)
        return NotImplemented

    __rmul__ = __mul__

    def _mul_poly(self, other: "Poly") -> "Poly":
        if not self._terms or not other._terms:
            return Poly._raw({})
        out: dict = {}
        for x, cx in self._terms.items():
            for y, cy in other._terms.items():
                mono = _mono_mul(x, y)
                t = out.get(mono)
                out[mono] = cx * cy if t is None else t + cx * cy
        return Poly._raw({k: v for k, v in out.items() if v})

    def scale(self, c: Number) -> "Poly":
        c = _as_fraction(c)
        if not c:
            return Poly._raw({})
        return Poly._raw({x: v * c for x, v in self._terms.items()})

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, Rational)):
            return self.scale(Fraction(1) / _as_fraction(other))
        return NotImplemented

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative powers are not polynomials")
        result = Poly.const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction, Rational)):
            return self._terms == Poly.const(other)._terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self._terms)

    # transformations
    def map_symbols(self, fn: Callable[[SymbolId], SymbolId]) -> "Poly":
        """Rename symbols; the renaming need not be injective."""
        out: dict = {}
        for mono, c in self._terms.items():
            acc: dict = {}
            for s, e in mono:
                t = fn(s)
                acc[t] = acc.get(t, 0) + e
            key = tuple(sorted(acc.items()))
            out[key] = out.get(key, 0) + c
        return Poly(out)

    def substitute(self, mapping: Mapping[SymbolId, "Poly"] | Callable) -> "Poly":
        """Replace symbols by polynomials.  Unmapped symbols are left alone."""
        get = mapping if callable(mapping) else mapping.get
        cache: dict = {}

        def power(s: SymbolId, e: int) -> Poly:
            key = (s, e)
            if key not in cache:
                img = get(s)
                if img is None:
                    img = Poly._raw({((s, 1),): Fraction(1)})
                cache[key] = img ** e
            return cache[key]

        total = Poly._raw({})
        for mono, c in self._terms.items():
            term = Poly.const(c)
            for s, e in mono:
                term = term * power(s, e)
            total = total + term
        return total

    def evaluate(self, assignment) -> Number | float:
        return evaluate_numeric(self, assignment)

    # text / json forms
    def __str__(self) -> str:
        if not self._terms:
            return "0"
        chunks = []
        for mono, c in self.items():
            chunks.append(str(c) if not mono else f"{c}*{_mono_str(mono)}")
        return " + ".join(chunks)

    def __repr__(self) -> str:
        return f"Poly({str(self)!r})"

    @classmethod
    def parse(cls, text: str) -> "Poly":
        """Inverse of :meth:`__str__`.  Also accepts bare monomials like ``a0*b1``."""
        text = text.strip()
        if text == "0":
            return cls()
        terms: dict = {}
        for chunk in text.split(" + "):
            factors = chunk.strip().split("*")
            coeff = Fraction(1)
            if factors and not _NAME_RE.match(factors[0].split("^")[0]):
                coeff = Fraction(factors[0])
                factors = factors[1:]
            exps: dict = {}
            for f in factors:
                name, _, power = f.partition("^")
                s = SymbolId.parse(name)
                exps[s] = exps.get(s, 0) + (int(power) if power else 1)
            mono = tuple(sorted(exps.items()))
            terms[mono] = terms.get(mono, 0) + coeff
        return cls(terms)

    def to_json_obj(self) -> dict:
        return {
            "terms": [
                {"coeff": str(c), "monomial": {s.name: e for s, e in mono}}
                for mono, c in self.items()
            ]
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=False)

    @classmethod
    def from_json_obj(cls, obj: Mapping) -> "Poly":
        terms: dict = {}
        for t in obj["terms"]:
            mono = tuple(sorted((SymbolId.parse(k), int(v)) for k, v in t["monomial"].items()))
            terms[mono] = terms.get(mono, 0) + Fraction(t["coeff"])
        return cls(terms)

    @classmethod
    def from_json(cls, text: str) -> "Poly":
        return cls.from_json_obj(json.loads(text))


def a(i: int) -> Poly:
    return Poly.symbol(Family.A, i)


def b(i: int) -> Poly:
    return Poly.symbol(Family.B, i)


def m(k: int) -> Poly:
    """Moment symbol m_k; m_0 is the constant 1 (probability measure)."""
    return Poly.const(1) if k == 0 else Poly.symbol(Family.M, k)


def alpha(n: int) -> Poly:
    return Poly.const(1) if n == 0 else Poly.symbol(Family.ALPHA, n)


def omega(n: int) -> Poly:
    return Poly.const(1) if n == 0 else Poly.symbol(Family.OMEGA, n)


def expectation_substitute(p: Poly) -> Poly:
    """Expected value of a weight polynomial under i.i.d. coefficients.

    Each ``a_i^e`` and ``b_j^e`` becomes ``m_e``; distinct symbols are
    independent so their expectations multiply.
    """
    bad = p.families() - {Family.A, Family.B}
    if bad:
        names = ", ".join(sorted(f.name for f in bad))
        raise MixedAlgebraError(f"expectation_substitute expects only a/b symbols, found {names}")
    out: dict = {}
    for mono, c in p._terms.items():
        acc: dict = {}
        for _, e in mono:
            s = SymbolId(Family.M, e)
            acc[s] = acc.get(s, 0) + 1
        key = tuple(sorted(acc.items()))
        out[key] = out.get(key, 0) + c
    return Poly(out)


def _lookup(assignment, s: SymbolId):
    if callable(assignment):
        return assignment(s)
    if s in assignment:
        return assignment[s]
    if s.name in assignment:
        return assignment[s.name]
    raise MissingSymbolError(s)


def evaluate_numeric(p: Poly, assignment) -> Number | float:
    """Evaluate ``p`` at a point.

    ``assignment`` maps SymbolId (or symbol name) to a value, or is a
    callable taking a SymbolId.  Rational inputs give an exact Fraction.
    With any float input the terms are summed left to right in canonical
    term order so results are reproducible bit for bit.
    """
    items = p.items()
    for s in p.symbols():
        try:
            _lookup(assignment, s)
        except (KeyError, MissingSymbolError):
            raise MissingSymbolError(s) from None
    total = Fraction(0)
    for mono, c in items:
        term = c
        for s, e in mono:
            v = _lookup(assignment, s)
            if isinstance(v, float) and isinstance(term, Fraction):
                term = float(term)
            term = term * v**e
        if isinstance(term, float) and isinstance(total, Fraction):
            total = float(total)
        total = total + term
    return total
