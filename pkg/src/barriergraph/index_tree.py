"""Index-trees: partial binary trees on 1..ell labelled by reverse left-first DFS.

Two families are provided: complete trees (ell = 2^d - 1) and the unbalanced
trees T_alpha(m), whose left subtrees shrink geometrically so that the full
barrier word stays of length O(m log m).
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Optional

MAX_UNBALANCED_M = 2**40


class IndexTreeError(ValueError):
    pass


@dataclass(frozen=True)
class IndexTree:
    """Partial binary tree on indices 1..ell.

    ``left``, ``right`` and ``parent`` are tuples of length ell + 1 indexed by
    the index itself (slot 0 is unused). Absent children are ``None``.
    """

    ell: int
    left: tuple
    right: tuple
    parent: tuple
    description: str = "custom"

    @property
    def root(self) -> Optional[int]:
        return self.ell if self.ell > 0 else None

    def indices(self) -> range:
        return range(1, self.ell + 1)

    def children(self, i: int) -> list[int]:
        return [c for c in (self.left[i], self.right[i]) if c is not None]

    def is_leaf(self, i: int) -> bool:
        return self.left[i] is None and self.right[i] is None

    def ancestors(self, i: int) -> list[int]:
        """Strict ancestors of i, from its parent up to the root."""
        out = []
        p = self.parent[i]
        while p is not None:
            out.append(p)
            p = self.parent[p]
        return out

    def depth(self) -> int:
        if self.ell == 0:
            return 0
        best = 0
        stack = [(self.ell, 1)]
        while stack:
            i, d = stack.pop()
            best = max(best, d)
            stack.extend((c, d + 1) for c in self.children(i))
        return best

    def to_dict(self) -> dict:
        return {
            "format_version": 1,
            "ell": self.ell,
            "description": self.description,
            "nodes": [
                {"id": i, "left": self.left[i], "right": self.right[i]}
                for i in self.indices()
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "IndexTree":
        ell = int(data["ell"])
        left: list = [None] * (ell + 1)
        right: list = [None] * (ell + 1)
        seen = set()
        for node in data["nodes"]:
            i = int(node["id"])
            if not 1 <= i <= ell or i in seen:
                raise IndexTreeError(f"bad or duplicate node id {i}")
            seen.add(i)
            left[i] = node.get("left")
            right[i] = node.get("right")
        if seen != set(range(1, ell + 1)):
            raise IndexTreeError("node ids must be exactly 1..ell")
        tree = _from_children(ell, left, right, data.get("description", "from-file"))
        validate(tree)
        return tree

    @classmethod
    def from_json(cls, text: str) -> "IndexTree":
        return cls.from_dict(json.loads(text))


def _from_children(ell: int, left: list, right: list, description: str) -> IndexTree:
    parent: list = [None] * (ell + 1)
    for i in range(1, ell + 1):
        for c in (left[i], right[i]):
            if c is None:
                continue
            if not 1 <= c <= ell:
                raise IndexTreeError(f"index {i} has out-of-range child {c}")
            if parent[c] is not None:
                raise IndexTreeError(f"index {c} has two parents ({parent[c]} and {i})")
            parent[c] = i
    return IndexTree(ell, tuple(left), tuple(right), tuple(parent), description)


# Shapes are nested tuples (left_shape, right_shape); None is the empty tree.

def _label_shape(shape, description: str) -> IndexTree:
    size = _shape_size(shape)
    left: list = [None] * (size + 1)
    right: list = [None] * (size + 1)
    if shape is None:
        return _from_children(0, left, right, description)
    # preorder position k (0-based) receives label size - k
    counter = [size]

    def visit(sh) -> int:
        label = counter[0]
        counter[0] -= 1
        if sh[0] is not None:
            left[label] = visit(sh[0])
        if sh[1] is not None:
            right[label] = visit(sh[1])
        return label

    visit(shape)
    return _from_children(size, left, right, description)


def _shape_size(shape) -> int:
    if shape is None:
        return 0
    return 1 + _shape_size(shape[0]) + _shape_size(shape[1])


def build_complete(ell: int) -> IndexTree:
    """Complete binary index-tree on ell = 2^d - 1 indices."""
    if ell < 1 or (ell + 1) & ell:
        raise IndexTreeError(
            f"a complete index-tree needs ell = 2^d - 1 with d >= 1, got {ell}"
        )
    d = (ell + 1).bit_length() - 1

    def shape(depth):
        if depth == 0:
            return None
        return (shape(depth - 1), shape(depth - 1))

    return _label_shape(shape(d), f"complete(ell={ell})")


def unbalanced_shape(m: int, alpha: float):
    """Unlabelled shape of T_alpha(m) as nested (left, right) tuples."""
    if m == 0:
        return None
    k = math.floor(m / alpha)
    return (unbalanced_shape(k, alpha * (alpha - 1)), unbalanced_shape(m - k - 1, alpha))


def build_unbalanced(m: int, alpha: float) -> IndexTree:
    """The unbalanced index-tree T_alpha(m) on m indices."""
    if m < 0:
        raise IndexTreeError(f"m must be nonnegative, got {m}")
    if m > MAX_UNBALANCED_M:
        raise IndexTreeError(f"m={m} exceeds the exact-floor guard 2^40")
    if not alpha > 2:
        raise IndexTreeError(f"alpha must exceed 2, got {alpha}")
    return _label_shape(unbalanced_shape(m, float(alpha)), f"unbalanced(m={m},alpha={alpha:g})")


def preorder(t: IndexTree) -> list[int]:
    """Left-child-first DFS preorder from the root."""
    if t.ell == 0:
        return []
    out = []
    stack = [t.ell]
    while stack:
        i = stack.pop()
        out.append(i)
        if t.right[i] is not None:
            stack.append(t.right[i])
        if t.left[i] is not None:
            stack.append(t.left[i])
    return out


def validate(t: IndexTree) -> None:
    """Raise IndexTreeError naming the first violated invariant."""
    ell = t.ell
    if ell < 0:
        raise IndexTreeError("ell must be nonnegative")
    for arr, name in ((t.left, "left"), (t.right, "right"), (t.parent, "parent")):
        if len(arr) != ell + 1:
            raise IndexTreeError(f"{name} table has length {len(arr)}, expected {ell + 1}")
    if ell == 0:
        return
    if t.parent[ell] is not None:
        raise IndexTreeError(f"root {ell} has parent {t.parent[ell]}")
    for i in range(1, ell + 1):
        for c in t.children(i):
            if t.parent[c] != i:
                raise IndexTreeError(f"index {c} is a child of {i} but its parent is {t.parent[c]}")
        if i != ell:
            p = t.parent[i]
            if p is None:
                raise IndexTreeError(f"index {i} has no parent")
            if i not in (t.left[p], t.right[p]):
                raise IndexTreeError(f"index {i} names parent {p} which does not list it")
    order = preorder(t)
    if sorted(order) != list(range(1, ell + 1)):
        missing = sorted(set(range(1, ell + 1)) - set(order))
        raise IndexTreeError(f"not a tree rooted at {ell}; unreachable index {missing[0] if missing else '?'}")
    for k, i in enumerate(order):
        if i != ell - k:
            raise IndexTreeError(
                f"index {i} sits at preorder position {k}; reverse left-first DFS expects {ell - k}"
            )


def subtree_indices(t: IndexTree, i: int) -> set[int]:
    """Indices of the subtree rooted at i."""
    if not 1 <= i <= t.ell:
        raise IndexTreeError(f"index {i} out of range 1..{t.ell}")
    out = set()
    stack = [i]
    while stack:
        j = stack.pop()
        out.add(j)
        stack.extend(t.children(j))
    return out


def subtree_sizes(t: IndexTree) -> list[int]:
    """size[i] = |T(i)|; slot 0 unused. Subtree of i is the interval [i - size + 1, i]."""
    size = [0] * (t.ell + 1)
    for i in range(1, t.ell + 1):  # children carry smaller labels
        size[i] = 1 + sum(size[c] for c in t.children(i))
    return size


def in_subtree(t: IndexTree, sizes: list[int], root: Optional[int], j: int) -> bool:
    if root is None:
        return False
    return root - sizes[root] < j <= root


def build_near_complete(ell: int) -> IndexTree:
    """Left-filled (heap-shaped) binary tree on ell indices; equals build_complete when ell = 2^d - 1."""
    if ell < 1:
        raise IndexTreeError(f"ell must be >= 1, got {ell}")

    def shape(k):  # heap position k (1-based)
        if k > ell:
            return None
        return (shape(2 * k), shape(2 * k + 1))

    desc = f"complete(ell={ell})" if not (ell + 1) & ell else f"near-complete(ell={ell})"
    return _label_shape(shape(1), desc)
