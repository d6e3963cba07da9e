"""Skeleton-trees st_ell with ranks, zones and zone-ancestors.

st_ell is a complete binary tree of depth 2^ell - 1. Each node of rank r roots
an embedded copy of st_r (its zone). Zones are never materialised: every node
stores the chain of its zone-ancestors, one per rank from its own rank to ell.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

DEFAULT_MAX_ELL = 4


class SkeletonGuardError(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class SkeletonTree:
    """Node ids are breadth-first dense integers; the root is 0.

    ``zanc[v, i]`` is the rank-i node whose zone contains v, for
    rank(v) <= i <= ell, and -1 below rank(v). ``zanc[v, rank(v)] == v``.
    """

    ell: int
    parent: np.ndarray
    left: np.ndarray
    right: np.ndarray
    rank: np.ndarray
    depth: np.ndarray
    zanc: np.ndarray

    @property
    def n(self) -> int:
        return len(self.rank)

    @property
    def root(self) -> int:
        return 0

    def edges(self):
        """(parent, child, is_left_child) triples in child-id order."""
        for v in range(1, self.n):
            p = int(self.parent[v])
            yield p, v, bool(self.left[p] == v)

    def to_dict(self) -> dict:
        return {
            "format_version": 1,
            "ell": self.ell,
            "nodes": [
                {
                    "id": v,
                    "parent": None if self.parent[v] < 0 else int(self.parent[v]),
                    "left": None if self.left[v] < 0 else int(self.left[v]),
                    "right": None if self.right[v] < 0 else int(self.right[v]),
                    "rank": int(self.rank[v]),
                }
                for v in range(self.n)
            ],
        }


def skeleton_size(ell: int) -> int:
    return 2 ** (2**ell - 1) - 1


def skeleton_depth(ell: int) -> int:
    return 2**ell - 1


def build_skeleton(ell: int, allow_large: bool = False) -> SkeletonTree:
    if ell < 1:
        raise ValueError(f"ell must be >= 1, got {ell}")
    if ell > DEFAULT_MAX_ELL and not allow_large:
        raise SkeletonGuardError(
            f"st_{ell} has {skeleton_size(ell)} nodes; ell > {DEFAULT_MAX_ELL} needs allow_large=True"
        )
    parent: list = []
    left: list = []
    right: list = []
    rank: list = []
    # ranges of creation ids owned by each zone root: (root, rank, start, stop)
    zones: list = []

    def new(r: int) -> int:
        parent.append(-1)
        left.append(-1)
        right.append(-1)
        rank.append(r)
        return len(rank) - 1

    def attach(p: int, a: int, b: int) -> None:
        left[p], right[p] = a, b
        parent[a] = parent[b] = p

    def build(r: int) -> tuple[int, list]:
        """Create a copy of st_r; return (root, leaves)."""
        root = new(r)
        if r == 1:
            zones.append((root, 1, root, root + 1))
            return root, [root]
        r1, leaves1 = build(r - 1)
        r2, leaves2 = build(r - 1)
        attach(root, r1, r2)
        leaves = []
        for leaf in leaves1 + leaves2:
            a, la = build(r - 1)
            b, lb = build(r - 1)
            attach(leaf, a, b)
            leaves.extend(la)
            leaves.extend(lb)
        zones.append((root, r, root, len(rank)))
        return root, leaves

    build(ell)
    n = len(rank)
    zanc = np.full((n, ell + 1), -1, dtype=np.int64)
    for root, r, start, stop in zones:
        zanc[start:stop, r] = root

    # relabel breadth-first
    order = [0]
    for v in order:
        if left[v] >= 0:
            order.append(left[v])
            order.append(right[v])
    order_arr = np.asarray(order, dtype=np.int64)
    new_id = np.empty(n, dtype=np.int64)
    new_id[order_arr] = np.arange(n)

    def remap(arr):
        a = np.asarray(arr, dtype=np.int64)[order_arr]
        return np.where(a >= 0, new_id[np.maximum(a, 0)], -1)

    zanc = zanc[order_arr]
    zanc = np.where(zanc >= 0, new_id[np.maximum(zanc, 0)], -1)
    par = remap(parent)
    depth = np.ones(n, dtype=np.int64)
    for v in range(1, n):  # BFS order: parent precedes child
        depth[v] = depth[par[v]] + 1
    return SkeletonTree(
        ell=ell,
        parent=par,
        left=remap(left),
        right=remap(right),
        rank=np.asarray(rank, dtype=np.int64)[order_arr],
        depth=depth,
        zanc=zanc,
    )


def zone_ancestor(st: SkeletonTree, t: int, i: int) -> int:
    """Rank-i node whose zone contains t; i == rank(t) gives t itself."""
    if not 0 <= t < st.n:
        raise ValueError(f"node {t} out of range")
    r = int(st.rank[t])
    if not r <= i <= st.ell:
        raise ValueError(f"zone_ancestor needs rank(t)={r} <= i <= {st.ell}, got {i}")
    return int(st.zanc[t, i])


def in_zone(st: SkeletonTree, s: int, t: int) -> bool:
    """Whether node t lies in zone(s)."""
    r = int(st.rank[s])
    return int(st.rank[t]) <= r and int(st.zanc[t, r]) == s


def rank_counts(ell: int) -> dict:
    """Number of nodes of each rank in st_ell, from the copy-count recursion."""
    counts = {1: 1}
    leaves = 1
    for level in range(2, ell + 1):
        copies = 2 + 4 * leaves
        counts = {r: c * copies for r, c in counts.items()}
        counts[level] = 1
        leaves = 4 * leaves * leaves
    return counts


@dataclass
class SkeletonReport:
    checks: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def record(self, name: str, ok: bool, witness=None) -> None:
        self.checks[name] = bool(ok)
        if not ok:
            self.failures.append({"check": name, "witness": witness})

    def to_dict(self) -> dict:
        return {"pass": self.passed, "checks": self.checks, "failures": self.failures}


def verify_skeleton(st: SkeletonTree) -> SkeletonReport:
    rep = SkeletonReport()
    ell = st.ell
    rep.record("node-count", st.n == skeleton_size(ell), {"n": st.n, "expected": skeleton_size(ell)})
    tree_depth = int(st.depth.max())
    rep.record("depth", tree_depth == skeleton_depth(ell), {"depth": tree_depth})
    rep.record("root-rank", int(st.rank[0]) == ell, {"rank": int(st.rank[0])})

    counts = np.bincount(st.rank, minlength=ell + 1)
    expected = rank_counts(ell)
    rep.record(
        "rank-counts",
        all(int(counts[r]) == expected[r] for r in range(1, ell + 1)),
        {"counts": counts[1:].tolist(), "expected": [expected[r] for r in range(1, ell + 1)]},
    )

    child = np.arange(1, st.n)
    pr = st.rank[st.parent[child]]
    cr = st.rank[child]
    ok = np.where(pr >= 2, cr == pr - 1, (cr >= 1) & (cr <= ell - 1))
    bad = np.nonzero(~ok)[0]
    rep.record(
        "rank-adjacency",
        bad.size == 0,
        None if bad.size == 0 else {"parent": int(st.parent[child[bad[0]]]), "child": int(child[bad[0]])},
    )

    # zone membership, checked against depth: zone(s) is every descendant of s
    # less than 2^rank(s) - 1 levels below it
    witness = None
    for i in range(1, ell + 1):
        holders = np.nonzero(st.rank <= i)[0]
        s = st.zanc[holders, i]
        if np.any(s < 0):
            witness = {"node": int(holders[np.argmax(s < 0)]), "i": i}
            break
        good = (st.rank[s] == i) & (st.depth[holders] - st.depth[s] < 2**i - 1)
        # s must be an ancestor-or-self of the holder
        anc = holders.copy()
        for _ in range(2**i - 1):
            climb = (anc != s) & (st.parent[np.maximum(anc, 0)] >= 0)
            anc = np.where(climb, st.parent[np.maximum(anc, 0)], anc)
        good &= anc == s
        if not np.all(good):
            witness = {"node": int(holders[np.argmin(good)]), "i": i}
            break
        # zone-ancestry of s agrees with that of the holder above i
        if i < ell:
            agree = np.all(st.zanc[s, i + 1 :] == st.zanc[holders, i + 1 :], axis=1)
            if not np.all(agree):
                witness = {"node": int(holders[np.argmin(agree)]), "i": i, "reason": "chain mismatch"}
                break
    rep.record("zone-ancestors", witness is None, witness)
    return rep


def skeleton_to_json(st: SkeletonTree) -> str:
    return json.dumps(st.to_dict(), sort_keys=True)
