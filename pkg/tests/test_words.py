import dataclasses
import math

import pytest
from hypothesis import given, settings, strategies as st

from barriergraph import barrier_words as bw
from barriergraph.index_tree import build_complete, build_near_complete, build_unbalanced

import oracles


def W(text):
    return tuple(int(x) for x in text.split())


B7 = W("7 6 5 6 4 6 5 6 7 3 2 3 1 3 2 3 7 6 5 6 4 6 5 6 7")


def test_full_barrier_complete_seven():
    t = build_complete(7)
    assert bw.full_barrier(t) == B7
    assert len(B7) == 25


def test_factor_examples():
    t = build_complete(7)
    assert bw.factor_barrier(t, 4, 3) == W("4 6 5 6 7 3")
    assert bw.factor_barrier(t, 6, 1) == W("6 5 6 4 6 5 6 7 3 2 3 1")
    assert bw.factor_barrier(t, 7, 6) == W("7 6")


def test_factor_rejects_bad_pairs():
    t = build_complete(7)
    with pytest.raises(bw.WordError):
        bw.factor_barrier(t, 3, 5)
    with pytest.raises(bw.WordError):
        bw.factor_barrier(t, 8, 1)


def test_unbalanced_seven_barrier():
    t = build_unbalanced(7, 3)
    w = bw.full_barrier(t)
    assert len(w) == 19
    assert list(w) == oracles.barrier(t, 7)


def test_empty_tree_barrier_is_empty():
    assert bw.full_barrier(build_unbalanced(0, 3)) == ()


def test_collapse_examples():
    assert bw.collapse(W("1 1 2 2 2 1 3 3")) == W("1 2 1 3")
    assert bw.collapse(()) == ()


def test_word_text_round_trip():
    words = [B7, W("3 1"), ()]
    assert bw.parse_words(bw.format_words(words)) == words


def test_reach_classes_complete_seven():
    t = build_complete(7)
    assert set(bw.reach_classes(t, 7).classes) == {frozenset({4, 5, 6}), frozenset({1, 2, 3})}
    assert set(bw.reach_classes(t, 4).classes) == {frozenset({1, 2, 3})}
    assert bw.reach_above(t, 7, 4) == {5, 6}
    assert bw.reach_below(t, 7, 6) == {4, 5}


@pytest.mark.parametrize("tree", [build_complete(7), build_unbalanced(12, 3), build_near_complete(10)])
def test_reach_matches_quadratic_scan(tree):
    for b in range(1, tree.ell + 2):
        pairs = oracles.reach_pairs(tree, b)
        cls = bw.reach_classes(tree, b)
        mine = {(i, j) for c in cls.classes for i in c for j in c}
        assert mine == pairs | {(i, i) for i in range(1, b)}


@pytest.mark.parametrize(
    "tree",
    [build_complete(1), build_complete(3), build_complete(7)] + [build_unbalanced(m, 3) for m in range(1, 13)],
    ids=lambda t: t.description,
)
def test_word_suite_passes(tree):
    rep = bw.check_word_properties(tree)
    failed = [r.to_dict() for r in rep.results if not r.passed]
    assert not failed
    assert all(r.checked > 0 for r in rep.results) or tree.ell < 3


def test_word_suite_cap():
    with pytest.raises(bw.WordError, match="capped"):
        bw.check_word_properties(build_complete(15))


def test_word_suite_detects_corrupted_barrier(monkeypatch):
    t = dataclasses.replace(build_complete(7), description="mutant")
    good = bw._all_barriers(t)
    w = list(good[7])
    w[1], w[2] = w[2], w[1]  # 7 5 6 ... breaks first-occurrence order
    bad = good[:7] + (tuple(w),)
    monkeypatch.setattr(bw, "_all_barriers", lambda _t: bad)
    bw.reach_classes.cache_clear()
    try:
        rep = bw.check_word_properties(t)
    finally:
        bw.reach_classes.cache_clear()
    assert not rep.passed


@settings(max_examples=80, deadline=None)
@given(m=st.integers(1, 300), alpha=st.floats(2.05, 8.0))
def test_full_barrier_matches_definition(m, alpha):
    t = build_unbalanced(m, alpha)
    assert list(bw.full_barrier(t)) == oracles.barrier(t, t.ell)


@settings(max_examples=80, deadline=None)
@given(m=st.integers(1, 300), alpha=st.floats(2.05, 8.0))
def test_length_recurrence(m, alpha):
    t = build_unbalanced(m, alpha)
    L = bw.barrier_lengths(t)
    for i in t.indices():
        l, r = t.left[i], t.right[i]
        if l is None and r is None:
            assert L[i] == 1
        elif l is None or r is None:
            assert L[i] == L[i - 1] + 2
        else:
            assert L[i] == 2 * L[l] + L[r] + 4


@settings(max_examples=200)
@given(w=st.lists(st.integers(1, 5), max_size=40))
def test_collapse_idempotent_and_matches_groupby(w):
    c = bw.collapse(w)
    assert bw.collapse(c) == c
    assert list(c) == oracles.collapse(w)
    assert all(a != b for a, b in zip(c, c[1:]))


def test_barriers_are_palindromes_without_repeats():
    for t in (build_complete(15), build_unbalanced(60, 3)):
        for i in t.indices():
            w = bw.full_barrier(t, i)
            assert w == w[::-1]
            assert bw.collapse(w) == w


def test_factor_contains_every_intermediate_index():
    for t in (build_complete(7), build_unbalanced(12, 3), build_near_complete(12)):
        for i in t.indices():
            for j in range(1, i):
                w = bw.factor_barrier(t, i, j)
                assert set(range(j, i + 1)) <= set(w)
                assert list(w) == oracles.factor(t, i, j)


def test_complete_lengths_recurrence_up_to_depth_ten():
    prev = None
    for d in range(1, 11):
        ell = 2**d - 1
        L = len(bw.full_barrier(build_complete(ell)))
        assert L == 3**d - 2
        if prev is not None:
            assert L == 3 * prev + 4
        # the exact length is 3^d - 2, just under (ell + 1)^log2(3)
        assert L <= (ell + 1) ** math.log2(3)
        prev = L


def test_padded_lengths_dominate_actual():
    for m in range(0, 300):
        actual, padded = bw.unbalanced_barrier_lengths(m, 3)
        assert actual == len(bw.full_barrier(build_unbalanced(m, 3)))
        assert padded >= actual


def test_barrier_size_bound_example():
    rep = bw.barrier_length_bound(7, 3)
    assert (rep.actual, rep.padded) == (19, 25)
    assert rep.bound == pytest.approx(4 * 7 * math.log2(21) / math.log2(2))
    assert rep.holds


def test_nested_chain_dp_example():
    t = build_unbalanced(7, 3)
    total, chain = bw.max_nested_chain(t)
    assert (total, chain) == (32, [7, 4, 2, 1])
    assert total == bw.nested_chain_sum(t, chain)


def test_nested_chain_dp_is_maximal_by_enumeration():
    from itertools import combinations

    for m in range(1, 13):
        t = build_unbalanced(m, 3)
        L = bw.barrier_lengths(t)
        best = 0
        idx = list(t.indices())
        for k in range(1, len(idx) + 1):
            for chain in combinations(sorted(idx, reverse=True), k):
                try:
                    bw.check_nested_chain(t, chain)
                except bw.WordError:
                    continue
                best = max(best, sum(L[c] for c in chain))
        assert bw.max_nested_chain(t)[0] == best


def test_nested_chain_rejects_non_nested():
    t = build_complete(7)
    with pytest.raises(bw.WordError):
        bw.check_nested_chain(t, [6, 3])
