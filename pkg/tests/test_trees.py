from collections import Counter
from fractions import Fraction as F

import pytest

from dyckmoments.lattice import compositions
from dyckmoments.moments import alpha
from dyckmoments.poly import Family, SymbolId
from dyckmoments.trees import (
    TARGETS,
    LeveledTree,
    TreeClassError,
    check_sums,
    enumerate_shapes,
    enumerate_trees,
    extend,
    invert_oracle,
    phi,
    phi_bruteforce,
    reconstruct,
    tree_from_nested,
    tree_weight,
)

from reference_tables import INVERSION_TABLES, T3_C3_WEIGHTS, T4_C3_WEIGHTS

# the height-3 admissible tree with last level (1,3,2,1,2,1,2)
BIG = (12, [
    (6, [(4, [(1, []), (3, [])]), (2, [(2, [])])]),
    (4, [(1, [(1, [])]), (3, [(2, []), (1, [])])]),
    (2, [(2, [(2, [])])]),
])

def test_shapes_are_admissible_and_unique():
    for n in range(1, 7):
        for c in compositions(n):
            shapes = enumerate_shapes(c)
            keys = [t.encode() for t in shapes]
            assert len(keys) == len(set(keys))
            for t in shapes:
                t.check_admissible()
                sizes = [len(level) for level in t.levels]
                assert sizes == sorted(set(sizes))
                assert t.height <= len(c) - 1


def test_single_vertex():
    (t,) = enumerate_trees(1, (5,))
    assert t.height == 0
    assert [tree_weight(k, enumerate_trees(k, (5,))[0]) for k in (1, 2, 3, 4)] == [1, 2, F(1, 2), F(1, 2)]


def test_c2_class3():
    assert len(enumerate_trees(3, (1, 1))) == 3
    ws = [tree_weight(3, t) for c in compositions(2) for t in enumerate_trees(3, c)]
    assert sorted(ws) == sorted([F(1, 2), F(-1, 8), F(-1, 4), F(-1, 8)])


def test_c2_class3_weights_by_colouring():
    root = lambda c1, c2: tree_from_nested((2, None, [(1, c1, []), (1, c2, [])]))
    assert tree_weight(3, root("b", "r")) == F(-1, 4)
    assert tree_weight(3, root("b", "b")) == F(-1, 8)
    with pytest.raises(TreeClassError):
        tree_weight(3, root("r", "b"))


def test_c3_class3_multiset():
    ts = [t for c in compositions(3) for t in enumerate_trees(3, c)]
    assert len(ts) == 29
    assert Counter(tree_weight(3, t) for t in ts) == Counter(T3_C3_WEIGHTS)


def test_c3_class4_count_and_weights():
    ts = [t for c in compositions(3) for t in enumerate_trees(4, c)]
    assert len(ts) == 11
    assert Counter(tree_weight(4, t) for t in ts) == Counter(T4_C3_WEIGHTS)


def test_phi_values_n3():
    assert phi(3, (3,)) == F(1, 2)
    assert phi(3, (2, 1)) + phi(3, (1, 2)) == F(-3, 2)
    assert phi(3, (1, 1, 1)) == F(9, 8)
    assert phi(4, (3,)) == F(1, 2)
    assert phi(4, (2, 1)) + phi(4, (1, 2)) == F(-3, 4)
    assert phi(4, (1, 1, 1)) == F(1, 2)


@pytest.mark.parametrize("cls", [1, 2, 3, 4])
def test_factorized_phi_matches_enumeration(cls):
    for n in range(1, 6):
        for c in compositions(n):
            assert phi(cls, c) == phi_bruteforce(cls, c)


def test_phi_sums():
    sums = check_sums(8)
    for n, (s1, s2) in sums.items():
        if n >= 2:
            assert s1 == 0
        assert s2 == 2 * n


@pytest.mark.parametrize("target", sorted(TARGETS))
def test_reconstruct_tables(target):
    for n in range(1, 6):
        assert reconstruct(target, n) == INVERSION_TABLES[target][n]


@pytest.mark.parametrize("target", sorted(TARGETS))
def test_reconstruct_matches_oracle(target):
    for n in range(1, 7):
        assert reconstruct(target, n) == invert_oracle(target, n)


def test_round_trip_m_alpha():
    for n in range(1, 7):
        sub = {SymbolId(Family.ALPHA, j): alpha(j).value for j in range(1, n + 1)}
        got = reconstruct("m_from_alpha", n).substitute(sub)
        assert got.symbols() == [SymbolId(Family.M, n)] and str(got) == f"1*m{n}"


def test_class_containment_and_inheritance():
    for c in compositions(4):
        shapes = {t.encode() for t in enumerate_shapes(c)}
        for t in enumerate_trees(4, c):
            assert LeveledTree(t.levels, t.parents).encode() in shapes
        for t in enumerate_trees(2, c):
            for l in range(2, len(t.levels)):
                for i, p in enumerate(t.parents[l]):
                    assert t.colors[l][i] == t.colors[l - 1][p]


def test_big_example_tree():
    t = tree_from_nested(BIG)
    assert t.composition == (1, 3, 2, 1, 2, 1, 2)
    assert t.height == 3
    t.check_admissible()
    assert t.encode() in {s.encode() for s in enumerate_shapes(t.composition)}


def test_extend():
    t = tree_from_nested(BIG)
    assert extend(t, 0) is t
    e = extend(t, 2)
    assert e.height == 5 and e.levels[-1] == e.levels[-2] == e.levels[-3]
    with pytest.raises(ValueError):
        e.check_admissible()
    ct = enumerate_trees(3, (1, 1))[1]
    ce = extend(ct, 1)
    assert ce.colors[-1] == ct.colors[-1]
    single = enumerate_trees(3, (2,))[0]
    assert extend(single, 1, color="b").colors[1] == ("b",)
    with pytest.raises(ValueError):
        extend(single, 1)


def test_dump_and_json():
    t = enumerate_trees(3, (1, 1))[1]
    assert t.dump() == "2\n  1[b]\n  1[r]"
    obj = t.to_json_obj()
    assert obj["levels"] == [[2], [1, 1]] and obj["colors"] == ["", "br"]


def test_bad_inputs():
    with pytest.raises(ValueError):
        enumerate_trees(3, (0, 2))
    with pytest.raises(TreeClassError):
        enumerate_trees(5, (1,))
    with pytest.raises(TreeClassError):
        tree_weight(1, enumerate_trees(3, (1, 1))[0])
