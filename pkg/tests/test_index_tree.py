import math

import pytest
from hypothesis import given, settings, strategies as st

from barriergraph.index_tree import (
    IndexTree,
    IndexTreeError,
    build_complete,
    build_near_complete,
    build_unbalanced,
    subtree_indices,
    subtree_sizes,
    validate,
)

import oracles


def children(t):
    return {i: (t.left[i], t.right[i]) for i in t.indices()}


def test_complete_seven():
    t = build_complete(7)
    assert children(t) == {
        7: (6, 3), 6: (5, 4), 3: (2, 1),
        5: (None, None), 4: (None, None), 2: (None, None), 1: (None, None),
    }


def test_complete_small():
    assert children(build_complete(1)) == {1: (None, None)}
    assert children(build_complete(3)) == {3: (2, 1), 2: (None, None), 1: (None, None)}


@pytest.mark.parametrize("ell", [0, 2, 4, 5, 6, 8, 12])
def test_complete_rejects_non_perfect(ell):
    with pytest.raises(IndexTreeError, match="2\\^d - 1"):
        build_complete(ell)


def test_unbalanced_seven_three():
    t = build_unbalanced(7, 3)
    assert children(t) == {
        7: (6, 4),
        6: (None, 5),
        5: (None, None),
        4: (3, 2),
        3: (None, None),
        2: (None, 1),
        1: (None, None),
    }


def test_unbalanced_empty_and_single():
    assert build_unbalanced(0, 3).ell == 0
    for a in (2.1, 3, 10):
        assert children(build_unbalanced(1, a)) == {1: (None, None)}


@pytest.mark.parametrize("alpha", [2, 1.5, 0, -3])
def test_unbalanced_rejects_small_alpha(alpha):
    with pytest.raises(IndexTreeError):
        build_unbalanced(5, alpha)


def test_unbalanced_guard():
    with pytest.raises(IndexTreeError, match="2\\^40"):
        build_unbalanced(2**40 + 1, 3)


def test_near_complete_shapes():
    assert children(build_near_complete(2)) == {2: (1, None), 1: (None, None)}
    assert children(build_near_complete(4)) == {4: (3, 1), 3: (2, None), 2: (None, None), 1: (None, None)}
    for ell in (1, 3, 7, 15):
        assert build_near_complete(ell) == build_complete(ell)


def test_subtree_indices_examples():
    t = build_complete(7)
    assert subtree_indices(t, 6) == {6, 5, 4}
    assert subtree_indices(t, 7) == set(range(1, 8))
    assert subtree_indices(t, 1) == {1}
    with pytest.raises(IndexTreeError):
        subtree_indices(t, 8)


def test_validate_accepts_constructors():
    validate(build_complete(7))
    validate(build_unbalanced(100, 3))


def test_validate_rejects_bad_labelling():
    # left subtree {1} smaller than right subtree {2}
    bad = {"ell": 3, "nodes": [{"id": 3, "left": 1, "right": 2}, {"id": 2}, {"id": 1}]}
    with pytest.raises(IndexTreeError, match="preorder"):
        IndexTree.from_dict(bad)


def test_validate_rejects_two_parents():
    bad = {"ell": 3, "nodes": [{"id": 3, "left": 2, "right": 1}, {"id": 2, "left": 1}, {"id": 1}]}
    with pytest.raises(IndexTreeError, match="two parents"):
        IndexTree.from_dict(bad)


def test_validate_rejects_missing_ids():
    with pytest.raises(IndexTreeError):
        IndexTree.from_dict({"ell": 3, "nodes": [{"id": 3}, {"id": 2}]})


def test_json_round_trip():
    for t in (build_complete(15), build_unbalanced(40, 3), build_near_complete(6)):
        back = IndexTree.from_json(t.to_json())
        assert children(back) == children(t)
        assert back.description == t.description


@settings(max_examples=150, deadline=None)
@given(m=st.integers(0, 2000), alpha=st.sampled_from([2.1, 2.5, 3, 4, 8]))
def test_unbalanced_node_count(m, alpha):
    t = build_unbalanced(m, alpha)
    assert t.ell == m == oracles.unbalanced_size(m, alpha)


@settings(max_examples=100, deadline=None)
@given(m=st.integers(1, 600), alpha=st.floats(2.05, 9.0))
def test_relabelling_is_idempotent(m, alpha):
    t = build_unbalanced(m, alpha)
    mapping = oracles.relabel(t)
    assert all(old == new for old, new in mapping.items())


@settings(max_examples=100, deadline=None)
@given(m=st.integers(1, 600), alpha=st.floats(2.05, 9.0))
def test_left_subtree_dominates_right(m, alpha):
    t = build_unbalanced(m, alpha)
    for i in t.indices():
        l, r = t.left[i], t.right[i]
        if l is not None and r is not None:
            assert max(subtree_indices(t, r)) < min(subtree_indices(t, l)) < i


@settings(max_examples=60, deadline=None)
@given(m=st.integers(1, 500))
def test_subtree_is_label_interval(m):
    t = build_unbalanced(m, 3)
    sizes = subtree_sizes(t)
    for i in t.indices():
        assert subtree_indices(t, i) == set(range(i - sizes[i] + 1, i + 1))


def test_depth_of_t3_is_logarithmic():
    # worst ratio over m <= 2000 is about 4.87 (m = 1962), so 5 is the frozen constant
    for m in range(1, 2001):
        assert oracles.depth(build_unbalanced(m, 3)) <= 5 * math.log2(3 * m)
