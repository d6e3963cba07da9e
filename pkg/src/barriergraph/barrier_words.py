"""Barrier words over an index-tree.

Words are tuples of ints. ``full_barrier(t, i)`` is the walk on T(i) that
visits the left subtree twice; every other word here is a factor of, or is
derived from, the full barrier of the root.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Optional, Sequence

import numpy as np

from .index_tree import (
    IndexTree,
    IndexTreeError,
    in_subtree,
    subtree_indices,
    subtree_sizes,
    unbalanced_shape,
)

EXHAUSTIVE_CAP = 12

Word = tuple


class WordError(ValueError):
    pass


def full_barrier(t: IndexTree, i: Optional[int] = None) -> Word:
    if i is None:
        if t.ell == 0:
            return ()
        i = t.ell
    if not 1 <= i <= t.ell:
        raise WordError(f"index {i} out of range 1..{t.ell}")
    return tuple(_full_barrier_cached(t, i))


@lru_cache(maxsize=64)
def _all_barriers(t: IndexTree) -> tuple:
    out: list = [()] * (t.ell + 1)
    for i in range(1, t.ell + 1):  # children first
        lo, hi = t.left[i], t.right[i]
        if lo is None and hi is None:
            out[i] = (i,)
        elif lo is None or hi is None:
            out[i] = (i,) + out[i - 1] + (i,)
        else:
            bl, br = out[lo], out[hi]
            out[i] = (i,) + bl + (i,) + br + (i,) + bl + (i,)
    return tuple(out)


def _full_barrier_cached(t: IndexTree, i: int) -> Word:
    return _all_barriers(t)[i]


def barrier_lengths(t: IndexTree) -> list[int]:
    """|B(i)| for every index, from the length recurrence."""
    n = [0] * (t.ell + 1)
    for i in range(1, t.ell + 1):
        lo, hi = t.left[i], t.right[i]
        if lo is None and hi is None:
            n[i] = 1
        elif lo is None or hi is None:
            n[i] = n[i - 1] + 2
        else:
            n[i] = 2 * n[lo] + n[hi] + 4
    return n


@lru_cache(maxsize=64)
def first_occurrences(t: IndexTree) -> tuple:
    word = full_barrier(t)
    first = [-1] * (t.ell + 1)
    for pos, letter in enumerate(word):
        if first[letter] < 0:
            first[letter] = pos
    return tuple(first)


def factor_barrier(t: IndexTree, i: int, j: int) -> Word:
    """B(i, j): factor of B(ell) from the first i to the first j (i > j)."""
    if not (1 <= j < i <= t.ell):
        raise WordError(f"B(i,j) needs ell >= i > j >= 1, got i={i}, j={j}")
    first = first_occurrences(t)
    if first[j] < first[i]:
        raise WordError(f"first {j} precedes first {i} in B(ell); not a barrier word")
    return full_barrier(t)[first[i] : first[j] + 1]


def collapse(word: Iterable) -> Word:
    out = []
    for x in word:
        if not out or out[-1] != x:
            out.append(x)
    return tuple(out)


def is_factor(small: Sequence, big: Sequence) -> bool:
    small, big = list(small), list(big)
    if not small:
        return True
    n = len(small)
    return any(big[k : k + n] == small for k in range(len(big) - n + 1))


def format_words(words: Iterable[Sequence[int]]) -> str:
    return "".join(" ".join(map(str, w)) + "\n" for w in words)


def parse_words(text: str) -> list[Word]:
    return [tuple(int(x) for x in line.split()) for line in text.splitlines()]


# --- the reach relation ----------------------------------------------------

class _DSU:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


@dataclass(frozen=True)
class ReachClasses:
    b: int
    classes: tuple  # of frozensets, sorted by max element descending

    def class_of(self, i: int) -> frozenset:
        for c in self.classes:
            if i in c:
                return c
        raise WordError(f"{i} is not below b={self.b}")


def _b_free_blocks(word: Word, b: int) -> list[set]:
    blocks, cur = [], set()
    for x in word:
        if x == b:
            if cur:
                blocks.append(cur)
            cur = set()
        else:
            cur.add(x)
    if cur:
        blocks.append(cur)
    return blocks


@lru_cache(maxsize=1024)
def reach_classes(t: IndexTree, b: int) -> ReachClasses:
    """Equivalence classes of i ~ j (both < b): some factor of B(ell) holds i, j and no b."""
    if not 1 <= b <= t.ell + 1:
        raise WordError(f"b={b} out of range 1..{t.ell + 1}")
    ground = [i for i in range(1, b) if i <= t.ell]
    dsu = _DSU(ground)
    for block in _b_free_blocks(full_barrier(t), b):
        low = sorted(x for x in block if x < b)
        for x in low[1:]:
            dsu.union(low[0], x)
    groups: dict = {}
    for i in ground:
        groups.setdefault(dsu.find(i), set()).add(i)
    classes = sorted((frozenset(g) for g in groups.values()), key=max, reverse=True)
    return ReachClasses(b, tuple(classes))


def reach_above(t: IndexTree, b: int, i: int) -> set[int]:
    if not 1 <= i < b:
        raise WordError(f"reach_above needs 1 <= i < b, got i={i}, b={b}")
    return {j for j in reach_classes(t, b).class_of(i) if j > i}


def reach_below(t: IndexTree, b: int, i: int) -> set[int]:
    if not 1 <= i < b:
        raise WordError(f"reach_below needs 1 <= i < b, got i={i}, b={b}")
    return {j for j in reach_classes(t, b).class_of(i) if j < i}


# --- exhaustive property suite ---------------------------------------------

@dataclass
class StatementResult:
    statement: str
    passed: bool = True
    checked: int = 0
    counterexample: Optional[dict] = None

    def fail(self, **witness) -> None:
        if self.passed:
            self.passed = False
            self.counterexample = witness

    def to_dict(self) -> dict:
        return {
            "statement": self.statement,
            "pass": self.passed,
            "checked": self.checked,
            "counterexample": self.counterexample,
        }


@dataclass
class WordReport:
    tree: str
    results: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def to_dict(self) -> dict:
        return {"tree": self.tree, "pass": self.passed, "results": [r.to_dict() for r in self.results]}


def _tree_path(t: IndexTree, i: int, j: int) -> set[int]:
    up_i = [i] + t.ancestors(i)
    up_j = [j] + t.ancestors(j)
    common = set(up_i) & set(up_j)
    out = set()
    for chain in (up_i, up_j):
        for x in chain:
            out.add(x)
            if x in common:
                break
    return out


def _in_left_or_right_of_ancestor(t, sizes, b, i) -> Optional[tuple]:
    """('left', b) if i in T(b-), ('right', k) if i in T(k+) for k = b or an ancestor of b."""
    if in_subtree(t, sizes, t.left[b], i):
        return ("left", b)
    for k in [b] + t.ancestors(b):
        if in_subtree(t, sizes, t.right[k], i):
            return ("right", k)
    return None


def check_word_properties(t: IndexTree, cap: int = EXHAUSTIVE_CAP) -> WordReport:
    """Exhaustively check the structural statements about barrier words for t."""
    if t.ell > cap:
        raise WordError(
            f"exhaustive word checks are capped at ell <= {cap} (got {t.ell}); "
            "use a smaller tree or sample factors instead"
        )
    ell = t.ell
    report = WordReport(t.description)
    if ell == 0:
        return report
    word = full_barrier(t)
    n = len(word)
    sizes = subtree_sizes(t)
    first = first_occurrences(t)
    occ = {x: [p for p, y in enumerate(word) if y == x] for x in range(1, ell + 1)}
    # present[x, a, b) via prefix counts
    onehot = np.zeros((ell + 1, n), dtype=np.int32)
    onehot[list(word), np.arange(n)] = 1
    prefix = np.concatenate([np.zeros((ell + 1, 1), np.int32), np.cumsum(onehot, axis=1)], axis=1)

    def letters(a: int, b: int) -> set:
        return set(np.nonzero(prefix[:, b] - prefix[:, a])[0].tolist())

    barriers = _all_barriers(t)

    r = StatementResult("descendant-smaller")
    for i in t.indices():
        lo, hi = t.left[i], t.right[i]
        if lo is None or hi is None:
            continue
        r.checked += 1
        if not (max(barriers[hi]) < min(barriers[lo]) and max(barriers[lo]) < i):
            r.fail(i=i)
    report.results.append(r)

    r = StatementResult("factors-contain-shortest-path")
    for a in range(n):
        present: set = set()
        inner = 0  # members whose parent is also a member
        for b in range(a, n):
            x = word[b]
            if x not in present:
                present.add(x)
                if t.parent[x] in present:
                    inner += 1
                inner += sum(1 for c in t.children(x) if c in present)
            r.checked += 1
            if len(present) - inner != 1:
                i, j = _disconnected_witness(t, present)
                r.fail(factor=[a, b], i=i, j=j)
    report.results.append(r)

    r = StatementResult("decreasing-first-occurrences")
    for k in t.indices():
        bk = barriers[k]
        pos = {}
        for p, x in enumerate(bk):
            pos.setdefault(x, p)
        for i, j in itertools.combinations(sorted(pos, reverse=True), 2):
            if not k > i > j:
                continue
            r.checked += 1
            if not pos[i] < pos[j]:
                r.fail(k=k, i=i, j=j)
    report.results.append(r)

    r = StatementResult("smaller-index-left-or-right-of-ancestor")
    for b in t.indices():
        for i in range(1, b):
            r.checked += 1
            if _in_left_or_right_of_ancestor(t, sizes, b, i) is None:
                r.fail(i=i, b=b)
    report.results.append(r)

    r = StatementResult("parent-to-descendant-factor-consecutive")
    for i in t.indices():
        ip = t.parent[i]
        if ip is None:
            continue
        for j in subtree_indices(t, i):
            need = set(range(j, i + 1))
            for p in occ[ip]:
                for q in occ[j]:
                    r.checked += 1
                    a, b = min(p, q), max(p, q)
                    if not need <= letters(a, b + 1):
                        r.fail(i=i, parent=ip, j=j, factor=[a, b])
    report.results.append(r)

    r = StatementResult("concatenation-of-barriers")
    for size in range(2, ell + 1):
        for seq in itertools.combinations(range(ell, 0, -1), size):
            r.checked += 1
            cat = []
            for x, y in zip(seq, seq[1:]):
                cat.extend(word[first[x] : first[y] + 1])
            if not is_factor(collapse(cat), word):
                r.fail(sequence=list(seq))
    report.results.append(r)

    def factor_or_none(i, j):
        try:
            return factor_barrier(t, i, j)
        except WordError:
            return None

    r = StatementResult("ij-barrier-intermediate")
    for i in t.indices():
        to_one = factor_or_none(i, 1) if i > 1 else None
        for j in range(1, i):
            r.checked += 1
            w = factor_or_none(i, j)
            if w is None or to_one is None:
                r.fail(i=i, j=j, reason="first occurrences out of order")
                continue
            ok = (
                set(range(j, i + 1)) <= set(w)
                and w.count(j) == 1
                and w[-1] == j
                and min(w) == j
                and w[0] == i
            )
            cut = to_one[: to_one.index(j) + 1]
            if not ok or cut != w:
                r.fail(i=i, j=j, word=list(w))
    report.results.append(r)

    r = StatementResult("consecutive-barrier-intermediate")
    for i in range(2, ell + 1):
        r.checked += 1
        w = factor_or_none(i, i - 1)
        if w is None:
            r.fail(i=i, reason="first occurrences out of order")
            continue
        inner = w[1:-1]
        if min(w) < i - 1 or i in inner or (i - 1) in inner:
            r.fail(i=i, word=list(w))
    report.results.append(r)

    r = StatementResult("factors-bounded-by-b-are-equal")
    for b in t.indices():
        ob = occ[b]
        gaps = [word[p : q + 1] for p, q in zip(ob, ob[1:])]
        for i in range(1, b):
            r.checked += 1
            holding = {g for g in gaps if i in g}
            if len(holding) > 1:
                r.fail(i=i, b=b, factors=[list(g) for g in sorted(holding)])
    report.results.append(r)

    r = StatementResult("reach-is-transitive")
    s = StatementResult("reach-classes-in-one-subtree")
    for b in range(1, ell + 2):
        rel = {(i, i) for i in range(1, min(b, ell + 1))}
        for block in _b_free_blocks(word, b):
            low = [x for x in block if x < b]
            rel.update(itertools.product(low, low))
        ground = range(1, min(b, ell + 1))
        for i, j, k in itertools.product(ground, repeat=3):
            if (i, j) in rel and (j, k) in rel:
                r.checked += 1
                if (i, k) not in rel:
                    r.fail(b=b, i=i, j=j, k=k)
        classes = reach_classes(t, b)
        closure = {(i, j) for c in classes.classes for i in c for j in c}
        if closure != rel:
            r.fail(b=b, reason="sweep classes differ from pairwise relation")
        if b > ell:
            continue
        for i, j in rel:
            s.checked += 1
            if _in_left_or_right_of_ancestor(t, sizes, b, i) != _in_left_or_right_of_ancestor(t, sizes, b, j):
                s.fail(b=b, i=i, j=j)
    report.results.append(r)
    report.results.append(s)
    return report


def _disconnected_witness(t: IndexTree, present: set) -> tuple:
    items = sorted(present)
    for i, j in itertools.combinations(items, 2):
        if not _tree_path(t, i, j) <= present:
            return i, j
    return items[0], items[-1]


# --- length bounds ---------------------------------------------------------

def unbalanced_barrier_lengths(m: int, alpha: float) -> tuple[int, int]:
    """(|B| with the one-child rule i B(i-1) i, |B| with the padded rule i i B(i-1) i i) for T_alpha(m)."""
    return _lengths_of_shape(unbalanced_shape(m, float(alpha)))


def _lengths_of_shape(shape) -> tuple[int, int]:
    # iterative post-order; shapes for m ~ 2000 nest too deep for comfort on the left spine
    if shape is None:
        return 0, 0
    results: dict = {}
    stack = [(shape, False)]
    while stack:
        sh, done = stack.pop()
        if sh is None:
            continue
        if not done:
            stack.append((sh, True))
            stack.extend((c, False) for c in sh if c is not None)
            continue
        lo, hi = sh
        if lo is None and hi is None:
            results[id(sh)] = (1, 1)
        elif lo is None or hi is None:
            a, p = results[id(lo if lo is not None else hi)]
            results[id(sh)] = (a + 2, p + 4)
        else:
            al, pl = results[id(lo)]
            ar, pr = results[id(hi)]
            results[id(sh)] = (2 * al + ar + 4, 2 * pl + pr + 4)
    return results[id(shape)]


def barrier_size_bound(m: int, alpha: float) -> float:
    if m == 0:
        return 0.0
    return 4 * m * math.log2(alpha * m) / math.log2(alpha - 1)


def nested_sum_bound(m: int, alpha: float) -> float:
    return barrier_size_bound(m, alpha) * alpha


@dataclass(frozen=True)
class BarrierLengthBound:
    m: int
    alpha: float
    actual: int
    padded: int
    bound: float

    @property
    def holds(self) -> bool:
        return self.actual <= self.padded <= self.bound


def barrier_length_bound(m: int, alpha: float) -> BarrierLengthBound:
    if not alpha > 2:
        raise IndexTreeError(f"alpha must exceed 2, got {alpha}")
    if m < 0:
        raise IndexTreeError(f"m must be nonnegative, got {m}")
    actual, padded = unbalanced_barrier_lengths(m, alpha)
    return BarrierLengthBound(m, float(alpha), actual, padded, barrier_size_bound(m, alpha))


def check_nested_chain(t: IndexTree, chain: Sequence[int]) -> None:
    sizes = subtree_sizes(t)
    if not chain:
        raise WordError("chain must be nonempty")
    for k in chain:
        if not 1 <= k <= t.ell:
            raise WordError(f"index {k} out of range")
    for a, b in zip(chain, chain[1:]):
        if not (b != a and in_subtree(t, sizes, a, b)):
            raise WordError(f"T({b}) is not a proper subtree of T({a})")


def nested_chain_sum(t: IndexTree, chain: Sequence[int]) -> int:
    check_nested_chain(t, chain)
    lengths = barrier_lengths(t)
    return sum(lengths[k] for k in chain)


def nested_chain_sum_bound(t: IndexTree, chain: Sequence[int], alpha: float) -> tuple[int, float]:
    """(sum of |B(k)| over a properly nested chain, the bound 4 m log(alpha m) alpha / log(alpha - 1))."""
    total = nested_chain_sum(t, chain)
    bound = nested_sum_bound(t.ell, alpha)
    if total > bound:
        raise WordError(f"nested chain sum {total} exceeds bound {bound:.3f}")
    return total, bound


def max_nested_chain(t: IndexTree) -> tuple[int, list[int]]:
    """Properly nested chain maximising the sum of |B(k)|: the heaviest root-to-leaf path."""
    if t.ell == 0:
        return 0, []
    lengths = barrier_lengths(t)
    best = [0] * (t.ell + 1)
    step: list = [None] * (t.ell + 1)
    for i in range(1, t.ell + 1):
        kids = t.children(i)
        if kids:
            c = max(kids, key=lambda c: best[c])
            best[i] = lengths[i] + best[c]
            step[i] = c
        else:
            best[i] = lengths[i]
    chain, i = [], t.ell
    while i is not None:
        chain.append(i)
        i = step[i]
    return best[t.ell], chain
