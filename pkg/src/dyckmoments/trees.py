"""Leveled planar trees and the inversion formulas between m, alpha and omega.

Four classes of trees are attached to a composition ``c``:

* class 1: admissible trees, uncoloured;
* class 2: admissible trees whose root edges split blue | red (both
  nonempty) and whose other edges inherit the colour of the edge above;
* class 3: every multi-branching vertex splits its edges blue | red (either
  side may be empty) and single-child vertices pass their colour down;
* class 4: like class 3, except that the root split has both sides nonempty.

Trees are built bottom-up.  Starting from ``c`` as the last level, consecutive
vertices are grouped into contiguous blocks (the children of one parent),
with at least one block of size >= 2 per step, until a single root remains.
A vertex that forms a singleton block must itself have exactly one child
(or be a leaf), which is the chain rule for single descendants.

Summing tree weights over a class gives ``phi(cls, c)``; the maps

    m_from_alpha      m_n     = sum_c phi1(c) alpha(c)
    omega_from_alpha  omega_n = sum_c phi2(c) alpha(c)
    m_from_omega      m_n     = sum_c phi3(c) omega(c)
    alpha_from_omega  alpha_n = sum_c phi4(c) omega(c)

are checked against :func:`invert_oracle`, which solves the triangular
moment relations directly without any trees.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterator, Sequence

from .lattice import compositions, rho1, rho2
from .moments import _alpha_k, _omega
from .poly import Family, Poly, SymbolId

BLUE, RED = "b", "r"
TARGETS = {
    "m_from_alpha": (1, Family.ALPHA),
    "omega_from_alpha": (2, Family.ALPHA),
    "m_from_omega": (3, Family.OMEGA),
    "alpha_from_omega": (4, Family.OMEGA),
}
HALF = Fraction(1, 2)


class TreeClassError(ValueError):
    pass


@dataclass(frozen=True)
class LeveledTree:
    """A rooted planar tree stored level by level.

    ``levels[l]`` holds the vertex values at depth ``l``; ``parents[l]``
    (for ``l >= 1``) gives, for each vertex at depth ``l``, the index of its
    parent in ``levels[l-1]``.  ``colors[l]`` is the colour of the edge
    above each vertex at depth ``l`` (None for uncoloured trees).
    ``parents[0]`` and ``colors[0]`` are empty tuples.
    """

    levels: tuple
    parents: tuple
    colors: tuple | None = None

    @property
    def height(self) -> int:
        return len(self.levels) - 1

    @property
    def composition(self) -> tuple:
        return self.levels[-1]

    @property
    def n(self) -> int:
        return self.levels[0][0]

    def children(self, level: int, idx: int) -> list[int]:
        if level + 1 >= len(self.levels):
            return []
        return [i for i, p in enumerate(self.parents[level + 1]) if p == idx]

    def vertices(self) -> Iterator[tuple[int, int]]:
        for l, vals in enumerate(self.levels):
            for i in range(len(vals)):
                yield l, i

    def is_multi(self, level: int, idx: int) -> bool:
        return len(self.children(level, idx)) >= 2

    def color(self, level: int, idx: int) -> str | None:
        if self.colors is None or level == 0:
            return None
        return self.colors[level][idx]

    def encode(self) -> str:
        """Canonical text key: values, parent indices and colours per level."""
        parts = []
        for l, vals in enumerate(self.levels):
            s = ",".join(map(str, vals))
            if l:
                s += "|" + ",".join(map(str, self.parents[l]))
                if self.colors is not None:
                    s += "|" + "".join(self.colors[l])
            parts.append(s)
        return "/".join(parts)

    def to_json_obj(self) -> dict:
        return {
            "levels": [list(v) for v in self.levels],
            "parents": [list(p) for p in self.parents],
            "colors": None if self.colors is None else ["".join(c) for c in self.colors],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True, separators=(",", ":"))

    def dump(self) -> str:
        """Indented text, one vertex per line as ``value[colour]``."""
        lines: list[str] = []

        def walk(l, i):
            c = self.color(l, i)
            tag = f"[{c}]" if c else ""
            lines.append("  " * l + f"{self.levels[l][i]}{tag}")
            for ch in self.children(l, i):
                walk(l + 1, ch)

        walk(0, 0)
        return "\n".join(lines)

    def check_admissible(self) -> None:
        """Raise ValueError unless the tree satisfies the admissibility rules."""
        n = self.n
        if len(self.levels[0]) != 1:
            raise ValueError("level 0 must hold only the root")
        for l, vals in enumerate(self.levels):
            if sum(vals) != n or any(v <= 0 for v in vals):
                raise ValueError(f"level {l} values {vals} do not form a composition of {n}")
        for l in range(self.height):
            if len(self.levels[l + 1]) <= len(self.levels[l]):
                raise ValueError(f"level {l} has no multi-branching vertex")
            par = self.parents[l + 1]
            if list(par) != sorted(par) or set(par) != set(range(len(self.levels[l]))):
                raise ValueError(f"level {l + 1} parents are not planar and onto")
            for i, v in enumerate(self.levels[l]):
                kids = self.children(l, i)
                if sum(self.levels[l + 1][k] for k in kids) != v:
                    raise ValueError(f"children of vertex ({l},{i}) do not sum to {v}")
                if len(kids) == 1 and l + 1 < self.height and len(self.children(l + 1, kids[0])) != 1:
                    raise ValueError(f"only child of ({l},{i}) is multi-branching")


# ---------------------------------------------------------------------------
# shapes
# ---------------------------------------------------------------------------


def _check_comp(c: Sequence[int]) -> tuple:
    c = tuple(int(x) for x in c)
    if not c or any(x <= 0 for x in c):
        raise ValueError(f"{c} is not a composition with positive parts")
    return c


def _groupings(level: tuple, multi: tuple) -> Iterator[tuple]:
    """Block partitions of a level, by ascending bitmask of kept cuts.

    Yields ``(block_sizes)``.  At least one block has size >= 2 and a
    multi-branching vertex never sits alone in a block.
    """
    k = len(level)
    for mask in range((1 << (k - 1)) - 1):  # the all-cuts mask is excluded
        sizes = []
        start = 0
        for j in range(k - 1):
            if (mask >> j) & 1:
                sizes.append(j + 1 - start)
                start = j + 1
        sizes.append(k - start)
        pos = 0
        ok = True
        for s in sizes:
            if s == 1 and multi[pos]:
                ok = False
                break
            pos += s
        if ok:
            yield tuple(sizes)


def _apply(level: tuple, sizes: tuple) -> tuple:
    out, pos = [], 0
    for s in sizes:
        out.append(sum(level[pos:pos + s]))
        pos += s
    return tuple(out)


def enumerate_shapes(c: Sequence[int]) -> list[LeveledTree]:
    """Uncoloured admissible trees whose last level is ``c``."""
    c = _check_comp(c)
    out = []

    def rec(levels, parents):
        top = levels[0]
        if len(top) == 1:
            out.append(LeveledTree(tuple(levels), ((),) + tuple(parents)))
            return
        below = parents[0] if parents else None
        if below is None:
            multi = (False,) * len(top)
        else:
            multi = tuple(below.count(i) >= 2 for i in range(len(top)))
        for sizes in _groupings(top, multi):
            par = tuple(j for j, s in enumerate(sizes) for _ in range(s))
            rec([_apply(top, sizes)] + levels, [par] + parents)

    rec([c], [])
    return out


# ---------------------------------------------------------------------------
# colourings and weights
# ---------------------------------------------------------------------------


def _split_range(cls: int, s: int, is_root: bool) -> range:
    if is_root and cls in (2, 4):
        return range(1, s)
    return range(0, s + 1)


def _colorings(shape: LeveledTree, cls: int) -> Iterator[LeveledTree]:
    if cls == 1:
        yield shape
        return
    if shape.height == 0:
        yield LeveledTree(shape.levels, shape.parents, ((),))
        return
    # vertices that choose a split, top-down
    choosers = []
    for l in range(shape.height):
        for i in range(len(shape.levels[l])):
            s = len(shape.children(l, i))
            if s >= 2 and (cls != 2 or l == 0):
                choosers.append((l, i, _split_range(cls, s, l == 0)))
    for splits in product(*(r for _, _, r in choosers)):
        chosen = {(l, i): j for (l, i, _), j in zip(choosers, splits)}
        colors = [()]
        for l in range(shape.height):
            row = []
            for i in range(len(shape.levels[l])):
                kids = shape.children(l, i)
                above = colors[l][i] if l else None
                if (l, i) in chosen:
                    j = chosen[(l, i)]
                    row.extend(BLUE if t < j else RED for t in range(len(kids)))
                else:
                    row.extend(above for _ in kids)
            colors.append(tuple(row))
        yield LeveledTree(shape.levels, shape.parents, tuple(colors))


def enumerate_trees(cls: int, c: Sequence[int]) -> list[LeveledTree]:
    """All trees of class ``cls`` (1..4) with last level ``c``."""
    if cls not in (1, 2, 3, 4):
        raise TreeClassError(f"tree class must be 1..4, got {cls}")
    out = []
    for shape in enumerate_shapes(c):
        out.extend(_colorings(shape, cls))
    return out


def _split_index(t: LeveledTree, l: int, i: int) -> int:
    kids = t.children(l, i)
    cols = [t.colors[l + 1][k] for k in kids]
    j = cols.count(BLUE)
    if cols != [BLUE] * j + [RED] * (len(cols) - j):
        raise TreeClassError(f"edges below vertex ({l},{i}) are not blue then red")
    return j


def _pair(lams: list, j: int) -> tuple:
    return (tuple(lams[:j]), tuple(lams[j:]))


def tree_weight(cls: int, t: LeveledTree) -> Fraction:
    """Product of the per-vertex factors for class ``cls``."""
    if cls not in (1, 2, 3, 4):
        raise TreeClassError(f"tree class must be 1..4, got {cls}")
    if (cls == 1) != (t.colors is None):
        raise TreeClassError(f"class {cls} tree {'needs' if cls != 1 else 'has no'} edge colours")
    if t.height == 0:
        return Fraction({1: 1, 2: 2, 3: HALF, 4: HALF}[cls])
    w = Fraction(1)
    for l, i in t.vertices():
        kids = t.children(l, i)
        lams = [t.levels[l + 1][k] for k in kids]
        multi = len(kids) >= 2
        parent_multi = l > 0 and t.is_multi(l - 1, t.parents[l][i])
        if cls == 1 or (cls == 2 and l > 0):
            w *= -rho1(lams) if multi else 1
        elif cls == 2:
            j = _split_index(t, l, i)
            if not 1 <= j < len(lams):
                raise TreeClassError("root split must leave both colours nonempty")
            w *= rho2(_pair(lams, j))
        else:
            if multi:
                j = _split_index(t, l, i)
                if cls == 4 and l == 0 and not 1 <= j < len(lams):
                    raise TreeClassError("root split must leave both colours nonempty")
                w *= -HALF * rho2(_pair(lams, j))
            elif parent_multi:
                w *= HALF
    return w


# ---------------------------------------------------------------------------
# phi, factorized
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _split_sum(lams: tuple, lo: int, hi: int) -> int:
    return sum(rho2(_pair(list(lams), j)) for j in range(lo, hi + 1))


def _block_factor(cls: int, children: tuple, child_multi: tuple, is_root: bool) -> Fraction:
    """Weight contributed when ``children`` are grouped under one parent."""
    s = len(children)
    if s == 1:
        return Fraction(1)
    if cls == 1 or (cls == 2 and not is_root):
        return Fraction(-rho1(children))
    if cls == 2:
        return Fraction(_split_sum(children, 1, s - 1))
    lo, hi = (1, s - 1) if (cls == 4 and is_root) else (0, s)
    f = -HALF * _split_sum(children, lo, hi)
    # non-multi-branching children of a multi-branching vertex
    f *= HALF ** sum(1 for x in child_multi if not x)
    return f


@lru_cache(maxsize=None)
def _phi_rec(cls: int, level: tuple, multi: tuple) -> Fraction:
    total = Fraction(0)
    for sizes in _groupings(level, multi):
        up = _apply(level, sizes)
        is_root = len(up) == 1
        w = Fraction(1)
        pos = 0
        for s in sizes:
            w *= _block_factor(cls, level[pos:pos + s], multi[pos:pos + s], is_root)
            pos += s
        if is_root:
            total += w
        else:
            total += w * _phi_rec(cls, up, tuple(s >= 2 for s in sizes))
    return total


def phi(cls: int, c: Sequence[int]) -> Fraction:
    """Sum of class-``cls`` tree weights over trees with last level ``c``."""
    if cls not in (1, 2, 3, 4):
        raise TreeClassError(f"tree class must be 1..4, got {cls}")
    c = _check_comp(c)
    if len(c) == 1:
        return Fraction({1: 1, 2: 2, 3: HALF, 4: HALF}[cls])
    return _phi_rec(cls, c, (False,) * len(c))


def phi_bruteforce(cls: int, c: Sequence[int]) -> Fraction:
    return sum((tree_weight(cls, t) for t in enumerate_trees(cls, c)), Fraction(0))


# ---------------------------------------------------------------------------
# inversion
# ---------------------------------------------------------------------------


def _product_poly(c: Sequence[int], family: Family) -> Poly:
    exps: dict = {}
    for part in c:
        s = SymbolId(family, part)
        exps[s] = exps.get(s, 0) + 1
    return Poly.monomial(exps)


def reconstruct(target: str, n: int) -> Poly:
    """The inversion polynomial built from phi over C(n)."""
    if target not in TARGETS:
        raise ValueError(f"unknown target {target!r}; expected one of {sorted(TARGETS)}")
    if n < 1:
        raise ValueError("n must be at least 1")
    cls, fam = TARGETS[target]
    total = Poly()
    for c in compositions(n):
        w = phi(cls, c)
        if w:
            total = total + _product_poly(c, fam) * w
    return total


def _msym(j: int) -> SymbolId:
    return SymbolId(Family.M, j)


@lru_cache(maxsize=None)
def _m_in(family: Family, n: int) -> Poly:
    # m_n as a polynomial in alpha or omega, by solving the triangular system
    if family == Family.ALPHA:
        lead, full = 1, _alpha_k(n, 1)
    else:
        lead, full = 2, _omega(n)
    rest = full - Poly.symbol(Family.M, n) * lead
    sub = {_msym(j): _m_in(family, j) for j in range(1, n)}
    return (Poly.symbol(family, n) - rest.substitute(sub)) / lead


def invert_oracle(target: str, n: int) -> Poly:
    """Same polynomials as :func:`reconstruct`, by triangular elimination."""
    if target not in TARGETS:
        raise ValueError(f"unknown target {target!r}; expected one of {sorted(TARGETS)}")
    if n < 1:
        raise ValueError("n must be at least 1")
    if target == "m_from_alpha":
        return _m_in(Family.ALPHA, n)
    if target == "m_from_omega":
        return _m_in(Family.OMEGA, n)
    if target == "omega_from_alpha":
        return _omega(n).substitute({_msym(j): _m_in(Family.ALPHA, j) for j in range(1, n + 1)})
    return _alpha_k(n, 1).substitute({_msym(j): _m_in(Family.OMEGA, j) for j in range(1, n + 1)})


def check_sums(nmax: int = 8) -> dict:
    """sum_c phi1(c) for n >= 2 and sum_c phi2(c) for n >= 1."""
    return {
        n: (sum(phi(1, c) for c in compositions(n)), sum(phi(2, c) for c in compositions(n)))
        for n in range(1, nmax + 1)
    }


# ---------------------------------------------------------------------------
# extension
# ---------------------------------------------------------------------------


def extend(t: LeveledTree, units: int, color: str | None = None) -> LeveledTree:
    """Hang a chain of ``units`` equal-valued vertices below every leaf.

    New edges copy the colour of the edge above the leaf.  For a
    single-vertex coloured tree the chain colour must be given.
    """
    if units < 0:
        raise ValueError("units must be non-negative")
    if units == 0:
        return t
    last = t.levels[-1]
    idx = tuple(range(len(last)))
    levels = t.levels + (last,) * units
    parents = t.parents + (idx,) * units
    colors = None
    if t.colors is not None:
        if t.height == 0:
            if color not in (BLUE, RED):
                raise ValueError("extending a single-vertex coloured tree needs a colour")
            row = (color,)
        else:
            row = t.colors[-1]
        colors = t.colors + (row,) * units
    return LeveledTree(levels, parents, colors)


def tree_from_nested(spec, color: str | None = None) -> LeveledTree:
    """Build a tree from nested ``(value, [children...])`` tuples.

    With colours, each node is ``(value, colour, [children...])``; the
    root's colour is ignored.  Leaves must all lie on the same level.
    """
    levels: list[list] = []
    parents: list[list] = []
    colors: list[list] = []
    coloured = len(spec) == 3

    def walk(node, depth, parent):
        if coloured:
            value, col, kids = node
        else:
            value, kids = node
            col = None
        while len(levels) <= depth:
            levels.append([])
            parents.append([])
            colors.append([])
        idx = len(levels[depth])
        levels[depth].append(value)
        if depth:
            parents[depth].append(parent)
            colors[depth].append(col)
        for k in kids:
            walk(k, depth + 1, idx)

    walk(spec, 0, None)
    return LeveledTree(
        tuple(map(tuple, levels)),
        tuple(map(tuple, parents)),
        tuple(map(tuple, colors)) if coloured else None,
    )
