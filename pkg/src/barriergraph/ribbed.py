"""Ribbed-trees: skeleton edges subdivided into barrier-paths with ribs.

Node ids: skeleton nodes keep their ids (tree-nodes, 0..n_tree-1); blocking
nodes follow (n_tree..). For every skeleton edge the barrier-path from parent
to child is stored as a slice of ``path_nodes``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .index_tree import IndexTree
from .skeleton import SkeletonTree
from .barrier_words import collapse, factor_barrier

TREE_NODE, BLOCKING_NODE = 0, 1
PATH_EDGE, RIB, HOPPING_RIB = 0, 1, 2
NODE_KINDS = {TREE_NODE: "tree-node", BLOCKING_NODE: "blocking-node"}
EDGE_KINDS = {PATH_EDGE: "barrier-path-edge", RIB: "rib", HOPPING_RIB: "hopping-rib"}


@dataclass(frozen=True)
class BarrierTemplate:
    """Blocking-node letters of one barrier-path, listed from parent to child.

    ``word`` is the source index-barrier, ``positions`` the letter position of
    each blocking node in it, ``hopping`` flags the extra node z.
    """

    word: tuple
    ranks: tuple
    positions: tuple
    hopping: tuple


def barrier_template(t: IndexTree, i: int, j: int) -> BarrierTemplate:
    """Template for a skeleton edge whose parent has rank i and child rank j."""
    if i >= 2:
        if j != i - 1:
            raise ValueError(f"a rank-{i} parent must have a rank-{i - 1} child, got {j}")
        w = factor_barrier(t, i, i - 1)
        inner = w[1:-1]
        return BarrierTemplate(w, tuple(inner), tuple(range(1, len(w) - 1)), (False,) * len(inner))
    if j == 1:
        return BarrierTemplate((1,), (1,), (0,), (True,))
    w = factor_barrier(t, j, 1)
    inner = w[1:-1]
    # bottom to top the nodes are z, y_1..y_p; parent to child reverses that
    ranks = tuple(reversed(inner)) + (j,)
    positions = tuple(range(len(w) - 2, 0, -1)) + (0,)
    return BarrierTemplate(w, ranks, positions, (False,) * len(inner) + (True,))


@dataclass(frozen=True, eq=False)
class RibbedTree:
    ell: int
    index_tree: IndexTree
    skeleton: SkeletonTree
    kind: np.ndarray  # per node
    rank: np.ndarray
    # per blocking node (indexed by node id - n_tree)
    edge_parent: np.ndarray
    edge_child: np.ndarray
    position: np.ndarray
    rib_top: np.ndarray
    hopping: np.ndarray
    # barrier-path of the skeleton edge into child c: path_nodes[path_ptr[c]:path_ptr[c+1]]
    path_ptr: np.ndarray
    path_nodes: np.ndarray

    @property
    def n_tree(self) -> int:
        return self.skeleton.n

    @property
    def n_blocking(self) -> int:
        return len(self.kind) - self.skeleton.n

    @property
    def n(self) -> int:
        return len(self.kind)

    def blocking_path(self, child: int) -> np.ndarray:
        """Blocking nodes on the edge from parent(child) to child, parent side first."""
        return self.path_nodes[self.path_ptr[child] : self.path_ptr[child + 1]]

    def edges(self):
        """(u, v, kind) triples; ribs listed as (bottom, top)."""
        st = self.skeleton
        for c in range(1, st.n):
            seq = [int(st.parent[c])] + self.blocking_path(c).tolist() + [c]
            for u, v in zip(seq, seq[1:]):
                yield u, v, PATH_EDGE
        for b in range(self.n_blocking):
            x = self.n_tree + b
            yield x, int(self.rib_top[b]), HOPPING_RIB if self.hopping[b] else RIB

    def edge_list_text(self) -> str:
        return "".join(f"{u} {v} {EDGE_KINDS[k]}\n" for u, v, k in self.edges())

    def node_table(self) -> list:
        return [
            {"id": v, "kind": NODE_KINDS[int(self.kind[v])], "rank": int(self.rank[v])}
            for v in range(self.n)
        ]


def build_ribbed(st: SkeletonTree, t: IndexTree) -> RibbedTree:
    if st.ell != t.ell:
        raise ValueError(f"skeleton has ell={st.ell} but index-tree has ell={t.ell}")
    n_tree = st.n
    templates: dict = {}
    edge_parent, edge_child, position, rib_top, hopping, ranks = [], [], [], [], [], []
    path_ptr = np.zeros(n_tree + 1, dtype=np.int64)
    path_nodes = []
    nxt = n_tree
    zanc = st.zanc
    for c in range(1, n_tree):
        s = int(st.parent[c])
        key = (int(st.rank[s]), int(st.rank[c]))
        tpl = templates.get(key)
        if tpl is None:
            tpl = templates[key] = barrier_template(t, *key)
        for r, pos, hop in zip(tpl.ranks, tpl.positions, tpl.hopping):
            path_nodes.append(nxt)
            nxt += 1
            edge_parent.append(s)
            edge_child.append(c)
            position.append(pos)
            rib_top.append(int(zanc[s, r]))
            hopping.append(hop)
            ranks.append(r)
        path_ptr[c + 1] = len(path_nodes)
    path_ptr[1] = 0
    n_block = nxt - n_tree
    kind = np.concatenate([np.zeros(n_tree, np.int8), np.ones(n_block, np.int8)])
    rank = np.concatenate([st.rank, np.asarray(ranks, dtype=np.int64)])
    return RibbedTree(
        ell=st.ell,
        index_tree=t,
        skeleton=st,
        kind=kind,
        rank=rank,
        edge_parent=np.asarray(edge_parent, dtype=np.int64),
        edge_child=np.asarray(edge_child, dtype=np.int64),
        position=np.asarray(position, dtype=np.int64),
        rib_top=np.asarray(rib_top, dtype=np.int64),
        hopping=np.asarray(hopping, dtype=bool),
        path_ptr=path_ptr,
        path_nodes=np.asarray(path_nodes, dtype=np.int64),
    )


@dataclass
class RibbedReport:
    checked_edges: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {"pass": self.passed, "checked_edges": self.checked_edges, "failures": self.failures[:20]}


def verify_ribbed(rt: RibbedTree) -> RibbedReport:
    """Re-derive every barrier-path from the index-barrier words and compare."""
    rep = RibbedReport()
    st, t = rt.skeleton, rt.index_tree
    for c in range(1, st.n):
        s = int(st.parent[c])
        i, j = int(st.rank[s]), int(st.rank[c])
        path = rt.blocking_path(c)
        b = path - rt.n_tree
        ranks = rt.rank[path].tolist()
        rep.checked_edges += 1
        if i >= 2:
            expected = list(factor_barrier(t, i, i - 1))
            trace = list(collapse([i] + ranks + [j]))
            ok = trace == expected and len(ranks) == len(expected) - 2
            hop_ok = not rt.hopping[b].any()
        else:
            expected = list(reversed(factor_barrier(t, j, 1))) if j > 1 else [1]
            trace = list(collapse([i] + ranks + [j]))
            inner_len = len(expected) - 2 if j > 1 else 0
            ok = trace == expected and len(ranks) == inner_len + 1 and ranks[-1] == j
            hop_ok = bool(rt.hopping[b[-1]]) and not rt.hopping[b[:-1]].any()
        if not ok or not hop_ok:
            rep.failures.append({"edge": [s, c], "ranks": ranks, "expected_trace": expected})
            continue
        for x, bb in zip(path.tolist(), b.tolist()):
            r = int(rt.rank[x])
            top = int(rt.rib_top[bb])
            if top != int(st.zanc[s, r]) or int(st.rank[top]) != r:
                rep.failures.append({"edge": [s, c], "blocking_node": x, "rib_top": top, "expected": int(st.zanc[s, r])})
                break
            if int(rt.edge_parent[bb]) != s or int(rt.edge_child[bb]) != c:
                rep.failures.append({"edge": [s, c], "blocking_node": x, "reason": "owner mismatch"})
                break
    return rep
