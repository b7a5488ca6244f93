"""Dyck and generalized Dyck paths, their weight polynomials, closed forms.

A down step that ends at height ``h`` has weight ``a_h`` when ``h >= 0`` and
``b_{-h-1}`` when ``h < 0``; up steps have weight 1.  The weight polynomials

    W_n  over all paths of length 2n from height 0 back to 0
    A_n  over Dyck paths (never below 0)
    B_n  over reflected Dyck paths (never above 0)

are homogeneous of degree n.  Besides brute-force enumeration this module
implements the composition formulas (Flajolet's for A_n/B_n and the pair
formula for W_n), the nested-sum formulas, and the decomposition of A_n by
number of returns to zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb, prod
from typing import Iterator, Sequence

import numpy as np

from . import kernels
from .poly import Family, Poly, SymbolId

__all__ = [
    "ENUM_CAP",
    "CLOSED_FORM_CAP",
    "CapExceededError",
    "LatticePath",
    "Composition",
    "binom",
    "catalan",
    "enumerate_paths",
    "count_paths",
    "path_weight",
    "weight_polynomial",
    "confined_paths",
    "compositions",
    "comp_pairs",
    "rho1",
    "rho2",
    "closed_form",
    "comp_monomial",
]

ENUM_CAP = 14
CLOSED_FORM_CAP = 24

Composition = tuple  # tuple of positive ints; () is the empty composition e


class CapExceededError(ValueError):
    """A size bound was exceeded; ``bound`` is the offending limit."""

    def __init__(self, what: str, value: int, bound: int):
        super().__init__(f"{what}={value} exceeds cap {bound}")
        self.what = what
        self.value = value
        self.bound = bound


def _check_cap(what: str, value: int, cap: int) -> None:
    if value > cap:
        raise CapExceededError(what, value, cap)


def binom(n: int, k: int) -> int:
    """Binomial coefficient with the convention C(n, -1) = [n == -1]."""
    if k == -1:
        return 1 if n == -1 else 0
    if k < -1:
        return 0
    if n < 0:
        raise ValueError(f"binom({n}, {k}) is outside the supported range")
    return comb(n, k)


def catalan(n: int) -> int:
    return comb(2 * n, n) // (n + 1)


# ---------------------------------------------------------------------------
# paths
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LatticePath:
    """A sequence of +1/-1 steps starting at ``start_height``."""

    start_height: int
    steps: tuple

    def __post_init__(self):
        if any(s not in (1, -1) for s in self.steps):
            raise ValueError("steps must be +1 or -1")

    def __len__(self) -> int:
        return len(self.steps)

    def heights(self) -> list[int]:
        hs = [self.start_height]
        for s in self.steps:
            hs.append(hs[-1] + s)
        return hs

    @property
    def min_height(self) -> int:
        return min(self.heights())

    @property
    def max_height(self) -> int:
        return max(self.heights())

    def returns_to_start(self) -> int:
        """Number of times t > 0 at which the path is back at its start height."""
        return sum(1 for h in self.heights()[1:] if h == self.start_height)

    def reflect(self) -> "LatticePath":
        """Mirror image in the horizontal line through the start point."""
        return LatticePath(self.start_height, tuple(-s for s in self.steps))

    def reverse(self) -> "LatticePath":
        """Mirror image in the vertical line through the midpoint."""
        end = self.heights()[-1]
        return LatticePath(end, tuple(-s for s in reversed(self.steps)))

    def shift(self, q: int) -> "LatticePath":
        return LatticePath(self.start_height + q, self.steps)

    def to_string(self) -> str:
        return "".join("U" if s == 1 else "D" for s in self.steps)

    @classmethod
    def from_string(cls, text: str, start_height: int = 0) -> "LatticePath":
        table = {"U": 1, "D": -1}
        try:
            return cls(start_height, tuple(table[c] for c in text.strip().upper()))
        except KeyError as exc:
            raise ValueError(f"path strings use U and D only, got {text!r}") from exc

    @classmethod
    def from_mask(cls, mask: int, length: int, start_height: int = 0) -> "LatticePath":
        steps = tuple(-1 if (mask >> (length - 1 - j)) & 1 else 1 for j in range(length))
        return cls(start_height, steps)

    def __str__(self) -> str:
        return self.to_string()


def _step_symbol(h_end: int, shift: int = 0) -> SymbolId:
    if h_end >= 0:
        return SymbolId(Family.A, h_end + shift)
    return SymbolId(Family.B, -h_end - 1 + shift)


def path_weight(path: LatticePath) -> Poly:
    exps: dict = {}
    h = path.start_height
    for s in path.steps:
        h += s
        if s == -1:
            sym = _step_symbol(h)
            exps[sym] = exps.get(sym, 0) + 1
    return Poly.monomial(exps)


_KINDS = {
    "generalized": kernels.MODE_GENERALIZED,
    "dyck": kernels.MODE_DYCK,
    "dyck_returns": kernels.MODE_DYCK_RETURNS,
}


def _masks(kind: str, n: int, k: int | None, cap: int) -> np.ndarray:
    if kind not in _KINDS:
        raise ValueError(f"unknown path kind {kind!r}; expected one of {sorted(_KINDS)}")
    if n < 0:
        raise ValueError("n must be non-negative")
    _check_cap("n", n, cap)
    mode = _KINDS[kind]
    if mode == kernels.MODE_DYCK_RETURNS:
        if k is None or not 0 <= k <= n:
            raise ValueError("dyck_returns needs 0 <= k <= n")
    return kernels.path_masks(n, mode, k or 0)


def enumerate_paths(kind: str, n: int, k: int | None = None, cap: int = ENUM_CAP) -> list[LatticePath]:
    """All paths of the given kind and semilength n, lexicographic with U < D.

    ``kind`` is ``"dyck"``, ``"generalized"`` or ``"dyck_returns"`` (Dyck
    paths with exactly ``k`` returns to height 0).
    """
    masks = _masks(kind, n, k, cap)
    return [LatticePath.from_mask(int(x), 2 * n) for x in masks]


def count_paths(kind: str, n: int, k: int | None = None, cap: int = ENUM_CAP) -> int:
    if kind not in _KINDS:
        raise ValueError(f"unknown path kind {kind!r}")
    _check_cap("n", n, cap)
    if _KINDS[kind] == kernels.MODE_DYCK_RETURNS and (k is None or not 0 <= k <= n):
        raise ValueError("dyck_returns needs 0 <= k <= n")
    return kernels.count_masks(n, _KINDS[kind], k or 0)


def _weight_sum(masks: np.ndarray, n: int, shift: int = 0) -> Poly:
    """Sum of path weights for start-at-0 paths given as masks."""
    if masks.size == 0:
        return Poly()
    if n == 0:
        return Poly.const(int(masks.size))
    length = 2 * n
    # columns 0..n-1 hold a_0..a_{n-1}, columns n..2n-1 hold b_0..b_{n-1}
    expo = np.zeros((masks.size, 2 * n), dtype=np.int16)
    h = np.zeros(masks.size, dtype=np.int64)
    rows = np.arange(masks.size)
    for j in range(length):
        down = ((masks >> (length - 1 - j)) & 1).astype(bool)
        h = h + np.where(down, -1, 1)
        col = np.where(h >= 0, h, n - h - 1)
        np.add.at(expo, (rows[down], col[down]), 1)
    uniq, counts = np.unique(expo, axis=0, return_counts=True)
    syms = [SymbolId(Family.A, i + shift) for i in range(n)]
    syms += [SymbolId(Family.B, i + shift) for i in range(n)]
    terms = {}
    for row, c in zip(uniq, counts):
        nz = np.nonzero(row)[0]
        terms[tuple((syms[i], int(row[i])) for i in nz)] = int(c)
    return Poly(terms)


def weight_polynomial(kind: str, n: int, shift: int = 0, cap: int = ENUM_CAP) -> Poly:
    """W_n, A_n or B_n by enumerating paths; ``shift`` raises every index.

    ``weight_polynomial("A", n, shift=k)`` is A_n(a_k, ..., a_{k+n-1}).
    """
    kind = kind.upper()
    if kind == "W":
        masks = _masks("generalized", n, None, cap)
    elif kind in ("A", "B"):
        masks = _masks("dyck", n, None, cap)
        if kind == "B" and n:
            masks = masks ^ ((1 << (2 * n)) - 1)
    else:
        raise ValueError(f"unknown weight polynomial {kind!r}; expected W, A or B")
    return _weight_sum(masks, n, shift)


def confined_paths(n: int, k: int, i: int, cap: int = ENUM_CAP) -> list[LatticePath]:
    """Paths of length k from height i back to i staying inside [1, n].

    These index the nonzero products in the (i, i) entry of H_n^k.
    """
    if not 1 <= i <= n:
        raise ValueError("start row must satisfy 1 <= i <= n")
    if k % 2:
        return []
    half = k // 2
    _check_cap("k/2", half, cap)
    masks = kernels.path_masks(half, kernels.MODE_GENERALIZED, 0)
    out = []
    for x in masks:
        p = LatticePath.from_mask(int(x), k, start_height=i)
        hs = p.heights()
        if min(hs) >= 1 and max(hs) <= n:
            out.append(p)
    return out


# ---------------------------------------------------------------------------
# compositions and binomial products
# ---------------------------------------------------------------------------


def _compositions_with_parts(n: int, parts: int) -> Iterator[tuple]:
    # descending lexicographic order
    if parts == 1:
        yield (n,)
        return
    for first in range(n - parts + 1, 0, -1):
        for rest in _compositions_with_parts(n - first, parts - 1):
            yield (first,) + rest


@lru_cache(maxsize=None)
def _compositions(n: int) -> tuple:
    if n == 0:
        return ((),)
    out = []
    for parts in range(1, n + 1):
        out.extend(_compositions_with_parts(n, parts))
    return tuple(out)


def compositions(n: int) -> list[tuple]:
    """C(n), ordered by number of parts and then descending lexicographically.

    ``compositions(0)`` is ``[()]``, the empty composition.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    return list(_compositions(n))


def comp_pairs(n: int) -> list[tuple]:
    """The union over j of C(j) x C(n - j), ordered by j then by each factor."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return [(p, q) for j in range(n + 1) for p in _compositions(j) for q in _compositions(n - j)]


def rho1(c: Sequence[int]) -> int:
    return prod(binom(c[j] + c[j + 1] - 1, c[j] - 1) for j in range(len(c) - 1))


def rho2(pair: tuple) -> int:
    p, q = pair
    if not p:
        return rho1(q)
    if not q:
        return rho1(p)
    return binom(p[0] + q[0], p[0]) * rho1(p) * rho1(q)


def comp_monomial(c: Sequence[int], family: Family, offset: int = 0) -> Poly:
    """prod_j x_{offset+j}^{c_j} for the symbol family x."""
    return Poly.monomial({SymbolId(family, offset + j): e for j, e in enumerate(c)})


# ---------------------------------------------------------------------------
# closed forms
# ---------------------------------------------------------------------------


def _flajolet(n: int, family: Family, shift: int = 0) -> Poly:
    total = Poly()
    for c in _compositions(n):
        total = total + comp_monomial(c, family, shift) * rho1(c)
    return total


def _pair_formula(n: int) -> Poly:
    total = Poly()
    for p, q in comp_pairs(n):
        total = total + comp_monomial(p, Family.A) * comp_monomial(q, Family.B) * rho2((p, q))
    return total


def _power_coeff_x(n: int, k: int) -> Poly:
    """[X^k]_{2n-k} where X = A^{(1)}, as a polynomial in a_1, a_2, ..."""
    if k > n:
        return Poly()
    total = Poly()
    for c in _compositions(n - k):
        if not c:
            total = total + 1
            continue
        w = binom(k + c[0] - 1, k - 1) * rho1(c)
        if w:
            total = total + comp_monomial(c, Family.A, offset=1) * w
    return total


def _touchard(n: int) -> Poly:
    if n == 0:
        return Poly.const(1)
    a = [Poly.symbol(Family.A, i) for i in range(n + 1)]

    @lru_cache(maxsize=None)
    def tail(prev: int, remaining: int) -> Poly:
        if remaining == 0:
            return Poly.const(1)
        total = Poly()
        for i in range(prev + 2):
            total = total + a[i] * tail(i, remaining - 1)
        return total

    return a[0] * tail(0, n - 1)


def _nested_w(n: int) -> Poly:
    if n == 0:
        return Poly.const(1)

    def sym(i: int) -> Poly:
        return Poly.symbol(Family.A, i) if i >= 0 else Poly.symbol(Family.B, -i - 1)

    @lru_cache(maxsize=None)
    def tail(j: int, prev: int) -> Poly:
        # sum over i_j in [prev - 1, n - j]
        if j > n:
            return Poly.const(1)
        total = Poly()
        for i in range(prev - 1, n - j + 1):
            total = total + sym(i) * tail(j + 1, i)
        return total

    total = Poly()
    for i1 in range(-1, n):
        total = total + sym(i1) * tail(2, i1)
    return total


CLOSED_FORMS = (
    "flajolet_A",
    "flajolet_B",
    "theorem_W",
    "touchard_A",
    "nested_W",
    "shifted_A",
    "shifted_B",
    "returns_A",
)


def closed_form(kind: str, n: int, k: int = 0, cap: int = CLOSED_FORM_CAP) -> Poly:
    """Evaluate one of the explicit formulas for the weight polynomials.

    kinds: ``flajolet_A``, ``flajolet_B``, ``theorem_W`` (pair formula),
    ``touchard_A`` and ``nested_W`` (nested sums), ``shifted_A``/``shifted_B``
    (variables shifted by ``k``) and ``returns_A`` (Dyck paths with exactly
    ``k`` returns to zero).
    """
    if n < 0 or k < 0:
        raise ValueError("n and k must be non-negative")
    _check_cap("n", n, cap)
    if kind == "flajolet_A":
        return _flajolet(n, Family.A)
    if kind == "flajolet_B":
        return _flajolet(n, Family.B)
    if kind == "theorem_W":
        return _pair_formula(n)
    if kind == "touchard_A":
        return _touchard(n)
    if kind == "nested_W":
        return _nested_w(n)
    if kind == "shifted_A":
        return _flajolet(n, Family.A, k)
    if kind == "shifted_B":
        return _flajolet(n, Family.B, k)
    if kind == "returns_A":
        return Poly.symbol(Family.A, 0) ** k * _power_coeff_x(n, k)
    raise ValueError(f"unknown closed form {kind!r}; expected one of {CLOSED_FORMS}")


def power_coeff_x(n: int, k: int) -> Poly:
    """Public view of [X^k]_{2n-k} (X the once-shifted Dyck series)."""
    return _power_coeff_x(n, k)


def involution_orbits_equal(n: int) -> bool:
    """Whether reversing every Dyck path preserves the multiset of weights."""
    paths = enumerate_paths("dyck", n)
    before = sorted(str(path_weight(p)) for p in paths)
    after = sorted(str(path_weight(p.reverse())) for p in paths)
    return before == after
