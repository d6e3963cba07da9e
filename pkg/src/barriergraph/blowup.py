"""Blow-up G(T) of a ribbed-tree, plus degeneracy and Hamiltonian-path certificates.

Vertex layout is arithmetic, so ids are stable across runs:

* tree-node s -> 3*s + {0: top-left, 1: top-right, 2: bottom}
* blocking node with offset b -> 3*n_tree + 6*b + 3*side + {0: x1, 1: x2, 2: x3}

Barrier attachment: for a left child t of s the left barrier-path runs from
top-left(s) to top-left(t) and the right one from bottom(s) to top-right(t).
A right child is the mirror image: top-right(s) to top-right(t) on the right,
bottom(s) to top-left(t) on the left.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .ribbed import HOPPING_RIB, RibbedTree

TOP_LEFT, TOP_RIGHT, BOTTOM, X1, X2, X3 = range(6)
VERTEX_KINDS = (
    "triangle-top-left",
    "triangle-top-right",
    "triangle-bottom",
    "representative-x1",
    "representative-x2",
    "representative-x3",
)
LEFT, RIGHT = 0, 1
SIDES = {-1: None, LEFT: "left-barrier", RIGHT: "right-barrier"}

TOP_EDGE, TRIANGLE_EDGE, BARRIER_EDGE, RIB_E1, RIB_E2, RIB_E3, HOP_E1, HOP_E2, HOP_E3 = range(9)
EDGE_KINDS = (
    "triangle-top",
    "triangle-other",
    "barrier-edge",
    "rib-e1",
    "rib-e2",
    "rib-e3",
    "hopping-rib-e1",
    "hopping-rib-e2",
    "hopping-rib-e3",
)
FORMAT_VERSION = 1
ATTACHMENT_CONVENTION = (
    "left child: TL(s)->TL(t) left, B(s)->TR(t) right; right child: TR(s)->TR(t) right, B(s)->TL(t) left"
)


@dataclass(eq=False)
class BlowupGraph:
    ribbed: Optional[RibbedTree]
    n_tree: int
    kind: np.ndarray  # role 0..5
    rank: np.ndarray
    pi: np.ndarray  # ribbed-tree node
    side: np.ndarray  # -1 for triangle-vertices
    edges: np.ndarray  # (E, 2), u < v, sorted, unique
    edge_kind: np.ndarray
    _csr: Optional[tuple] = field(default=None, repr=False)

    @property
    def n(self) -> int:
        return len(self.kind)

    @property
    def m(self) -> int:
        return len(self.edges)

    def csr(self) -> tuple:
        if self._csr is None:
            u = np.concatenate([self.edges[:, 0], self.edges[:, 1]])
            v = np.concatenate([self.edges[:, 1], self.edges[:, 0]])
            order = np.lexsort((v, u))
            indptr = np.zeros(self.n + 1, dtype=np.int64)
            np.cumsum(np.bincount(u, minlength=self.n), out=indptr[1:])
            self._csr = (indptr, v[order])
        return self._csr

    def neighbors(self, v: int) -> np.ndarray:
        indptr, indices = self.csr()
        return indices[indptr[v] : indptr[v + 1]]

    def adjacency_sets(self) -> list:
        indptr, indices = self.csr()
        ind = indices.tolist()
        ptr = indptr.tolist()
        return [set(ind[ptr[v] : ptr[v + 1]]) for v in range(self.n)]

    def degrees(self) -> np.ndarray:
        return np.diff(self.csr()[0])

    def is_triangle_vertex(self, v: int) -> bool:
        return int(self.kind[v]) <= BOTTOM

    def triangle(self, s: int) -> tuple:
        return (3 * s, 3 * s + 1, 3 * s + 2)

    def skeleton_node(self, v: int) -> int:
        """pi(v) for triangle-vertices; the owning skeleton edge's child for representatives."""
        return int(self.pi[v])

    # exports ---------------------------------------------------------------

    def to_dict(self) -> dict:
        vertices = [
            {
                "id": v,
                "kind": VERTEX_KINDS[k],
                "rank": r,
                "pi": p,
                "side": SIDES[s],
            }
            for v, (k, r, p, s) in enumerate(
                zip(self.kind.tolist(), self.rank.tolist(), self.pi.tolist(), self.side.tolist())
            )
        ]
        edges = [
            {"u": u, "v": v, "kind": EDGE_KINDS[k]}
            for (u, v), k in zip(self.edges.tolist(), self.edge_kind.tolist())
        ]
        header = {"format_version": FORMAT_VERSION, "attachment": ATTACHMENT_CONVENTION}
        if self.ribbed is not None:
            header["ell"] = self.ribbed.ell
            header["tree"] = self.ribbed.index_tree.description
        return {**header, "vertices": vertices, "edges": edges}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def edge_list_text(self) -> str:
        return "".join(f"{u} {v} {EDGE_KINDS[k]}\n" for (u, v), k in zip(self.edges.tolist(), self.edge_kind.tolist()))

    def to_dot(self) -> str:
        palette = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"]
        shapes = ["triangle", "triangle", "invtriangle", "box", "box", "box"]
        lines = ["graph G {", "  node [style=filled];"]
        for v, (k, r) in enumerate(zip(self.kind.tolist(), self.rank.tolist())):
            lines.append(f'  {v} [label="{r}", shape={shapes[k]}, fillcolor="{palette[(r - 1) % len(palette)]}"];')
        for (u, v), k in zip(self.edges.tolist(), self.edge_kind.tolist()):
            style = "bold" if k == TOP_EDGE else ("dashed" if k >= RIB_E1 else "solid")
            lines.append(f"  {u} -- {v} [style={style}];")
        lines.append("}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> "BlowupGraph":
        verts = sorted(data["vertices"], key=lambda d: d["id"])
        if [d["id"] for d in verts] != list(range(len(verts))):
            raise ValueError("vertex ids must be 0..n-1")
        kind = np.array([VERTEX_KINDS.index(d["kind"]) for d in verts], dtype=np.int8)
        side_codes = {None: -1, "left-barrier": LEFT, "right-barrier": RIGHT}
        edges = np.array([[e["u"], e["v"]] for e in data["edges"]], dtype=np.int64).reshape(-1, 2)
        ekind = np.array([EDGE_KINDS.index(e["kind"]) for e in data["edges"]], dtype=np.int8)
        return cls(
            ribbed=None,
            n_tree=int(np.sum(kind <= BOTTOM)) // 3,
            kind=kind,
            rank=np.array([d["rank"] for d in verts], dtype=np.int64),
            pi=np.array([d["pi"] for d in verts], dtype=np.int64),
            side=np.array([side_codes[d["side"]] for d in verts], dtype=np.int8),
            edges=edges,
            edge_kind=ekind,
        )


def barrier_endpoints(s: int, t: int, t_is_left: bool) -> dict:
    """Triangle-vertices joined by the left and right barrier-paths of skeleton edge s -> t."""
    if t_is_left:
        return {LEFT: (3 * s + TOP_LEFT, 3 * t + TOP_LEFT), RIGHT: (3 * s + BOTTOM, 3 * t + TOP_RIGHT)}
    return {RIGHT: (3 * s + TOP_RIGHT, 3 * t + TOP_RIGHT), LEFT: (3 * s + BOTTOM, 3 * t + TOP_LEFT)}


def representative(n_tree: int, b: int, side: int, which: int) -> int:
    """which: 0 -> x1, 1 -> x2, 2 -> x3."""
    return 3 * n_tree + 6 * b + 3 * side + which


def barrier_vertices(g: BlowupGraph, child: int, side: int) -> list:
    """Vertices of one barrier-path of the skeleton edge into ``child``, parent end first."""
    rt = g.ribbed
    st = rt.skeleton
    s = int(st.parent[child])
    ends = barrier_endpoints(s, child, bool(st.left[s] == child))[side]
    seq = [ends[0]]
    for x in rt.blocking_path(child).tolist():
        b = x - rt.n_tree
        base = representative(rt.n_tree, b, side, 0)
        seq.extend((base, base + 1, base + 2))
    seq.append(ends[1])
    return seq


def build_blowup(rt: RibbedTree) -> BlowupGraph:
    st = rt.skeleton
    n_tree, n_block = rt.n_tree, rt.n_blocking
    n = 3 * n_tree + 6 * n_block

    kind = np.empty(n, dtype=np.int8)
    rank = np.empty(n, dtype=np.int64)
    pi = np.empty(n, dtype=np.int64)
    side = np.full(n, -1, dtype=np.int8)

    tv = np.arange(3 * n_tree)
    kind[: 3 * n_tree] = tv % 3
    pi[: 3 * n_tree] = tv // 3
    rank[: 3 * n_tree] = st.rank[tv // 3]
    rv = np.arange(6 * n_block)
    kind[3 * n_tree :] = X1 + rv % 3
    side[3 * n_tree :] = (rv // 3) % 2
    pi[3 * n_tree :] = n_tree + rv // 6
    rank[3 * n_tree :] = rt.rank[n_tree + rv // 6]

    us, vs, ks = [], [], []

    # triangles
    base = 3 * np.arange(n_tree)
    us += [base, base, base + 1]
    vs += [base + 1, base + 2, base + 2]
    ks += [np.full(n_tree, TOP_EDGE), np.full(n_tree, TRIANGLE_EDGE), np.full(n_tree, TRIANGLE_EDGE)]

    # barrier-paths: internal x1-x2, x2-x3 and x3 -> next x1 edges
    rb = 3 * n_tree + 6 * np.arange(n_block)
    for sd in (LEFT, RIGHT):
        r0 = rb + 3 * sd
        us += [r0, r0 + 1]
        vs += [r0 + 1, r0 + 2]
        ks += [np.full(n_block, BARRIER_EDGE)] * 2
    ep, ec = [], []
    for c in range(1, n_tree):
        s = int(st.parent[c])
        path = rt.blocking_path(c)
        ends = barrier_endpoints(s, c, bool(st.left[s] == c))
        for sd in (LEFT, RIGHT):
            a, z = ends[sd]
            if len(path) == 0:
                ep.append(a)
                ec.append(z)
                continue
            reps = 3 * n_tree + 6 * (path - n_tree) + 3 * sd
            ep.append(a)
            ec.append(int(reps[0]))
            if len(reps) > 1:
                ep.extend((reps[:-1] + 2).tolist())
                ec.extend(reps[1:].tolist())
            ep.append(int(reps[-1]) + 2)
            ec.append(z)
    us.append(np.asarray(ep, dtype=np.int64))
    vs.append(np.asarray(ec, dtype=np.int64))
    ks.append(np.full(len(ep), BARRIER_EDGE))

    # ribs: x1 -> bottom, x2 -> top-right, x3 -> top-left of the top endpoint's triangle
    top = 3 * rt.rib_top
    hop_shift = np.where(rt.hopping, HOP_E1 - RIB_E1, 0)
    for sd in (LEFT, RIGHT):
        r0 = rb + 3 * sd
        for off, corner, ek in ((0, BOTTOM, RIB_E1), (1, TOP_RIGHT, RIB_E2), (2, TOP_LEFT, RIB_E3)):
            us.append(r0 + off)
            vs.append(top + corner)
            ks.append(ek + hop_shift)

    u = np.concatenate(us).astype(np.int64)
    v = np.concatenate(vs).astype(np.int64)
    k = np.concatenate(ks).astype(np.int8)
    lo, hi = np.minimum(u, v), np.maximum(u, v)
    # stable sort keeps the first-listed kind (barrier edges precede ribs) for duplicates
    order = np.lexsort((hi, lo))
    lo, hi, k = lo[order], hi[order], k[order]
    keep = np.ones(len(lo), dtype=bool)
    keep[1:] = (lo[1:] != lo[:-1]) | (hi[1:] != hi[:-1])
    edges = np.stack([lo[keep], hi[keep]], axis=1)
    return BlowupGraph(rt, n_tree, kind, rank, pi, side, edges, k[keep])


# --- degeneracy ------------------------------------------------------------

@dataclass
class DegeneracyCertificate:
    order: list
    back_degree: list

    @property
    def degeneracy(self) -> int:
        return max(self.back_degree, default=0)


def degeneracy(g: BlowupGraph) -> DegeneracyCertificate:
    """Min-degree peeling (bucket queue). back_degree[k] counts neighbours later in the order."""
    return degeneracy_from_csr(g.n, *g.csr())


def degeneracy_from_csr(n: int, indptr: np.ndarray, indices: np.ndarray) -> DegeneracyCertificate:
    ptr = indptr.tolist()
    nbr = indices.tolist()
    deg = [ptr[v + 1] - ptr[v] for v in range(n)]
    maxd = max(deg, default=0)
    buckets = [[] for _ in range(maxd + 1)]
    for v in range(n):
        buckets[deg[v]].append(v)
    removed = [False] * n
    order, back = [], []
    d = 0
    for _ in range(n):
        d = max(d - 1, 0)
        while True:
            bucket = buckets[d]
            while bucket and (removed[bucket[-1]] or deg[bucket[-1]] != d):
                bucket.pop()
            if bucket:
                break
            d += 1
        v = bucket.pop()
        removed[v] = True
        order.append(v)
        back.append(deg[v])
        for w in nbr[ptr[v] : ptr[v + 1]]:
            if not removed[w]:
                deg[w] -= 1
                buckets[deg[w]].append(w)
    return DegeneracyCertificate(order, back)


def check_degeneracy_certificate(g: BlowupGraph, cert: DegeneracyCertificate) -> bool:
    """Independent recount of back-degrees from the elimination order."""
    if sorted(cert.order) != list(range(g.n)):
        return False
    pos = np.empty(g.n, dtype=np.int64)
    pos[np.asarray(cert.order, dtype=np.int64)] = np.arange(g.n)
    a, b = g.edges[:, 0], g.edges[:, 1]
    earlier = np.where(pos[a] < pos[b], a, b)
    counts = np.bincount(pos[earlier], minlength=g.n)
    return counts.tolist() == list(cert.back_degree)


# --- Hamiltonian path ------------------------------------------------------

@dataclass
class PathCertificate:
    vertices: list
    kind: str = "hamiltonian"
    ell: Optional[int] = None
    tree: str = ""

    def to_text(self) -> str:
        header = f"{self.kind} ell={self.ell} tree={self.tree}"
        return header + "\n" + "".join(f"{v}\n" for v in self.vertices)

    @classmethod
    def from_text(cls, text: str) -> "PathCertificate":
        lines = text.strip().splitlines()
        if not lines:
            raise ValueError("empty certificate")
        head = lines[0].split()
        if not head or head[0] not in ("hamiltonian", "induced"):
            raise ValueError(f"bad certificate header {lines[0]!r}")
        fields = dict(h.split("=", 1) for h in head[1:] if "=" in h)
        ell = fields.get("ell")
        return cls(
            [int(x) for x in lines[1:]],
            head[0],
            None if ell in (None, "None") else int(ell),
            fields.get("tree", ""),
        )


class HamiltonianConstructionError(RuntimeError):
    pass


def hamiltonian_path(g: BlowupGraph) -> PathCertificate:
    """Tour: each subtree is entered at top-left of its root triangle and left at top-right.

    Inside K^s: go down the left child's left barrier, tour it, come back up its
    right barrier into bottom(s), go down the right child's left barrier, tour
    it and return through its right barrier into top-right(s).
    """
    rt = g.ribbed
    if rt is None:
        raise HamiltonianConstructionError("graph carries no ribbed-tree; cannot build the tour")
    st = rt.skeleton
    left, right = st.left.tolist(), st.right.tolist()
    out: list = []
    # explicit stack of pending actions: ("node", s) or ("seq", list)
    stack: list = [("node", 0)]
    while stack:
        tag, item = stack.pop()
        if tag == "seq":
            out.extend(item)
            continue
        s = item
        if left[s] < 0:
            out.extend((3 * s + TOP_LEFT, 3 * s + BOTTOM, 3 * s + TOP_RIGHT))
            continue
        a, b = left[s], right[s]
        down_a = barrier_vertices(g, a, LEFT)  # TL(s) .. TL(a)
        up_a = barrier_vertices(g, a, RIGHT)[::-1]  # TR(a) .. B(s)
        down_b = barrier_vertices(g, b, LEFT)  # B(s) .. TL(b)
        up_b = barrier_vertices(g, b, RIGHT)[::-1]  # TR(b) .. TR(s)
        # pushed in reverse execution order
        stack.append(("seq", up_b[1:]))
        stack.append(("node", b))
        stack.append(("seq", up_a[1:] + down_b[1:-1]))
        stack.append(("node", a))
        stack.append(("seq", down_a[:-1]))
    cert = PathCertificate(out, "hamiltonian", rt.ell, rt.index_tree.description)
    report = check_path(g, cert, require_hamiltonian=True)
    if not report.passed:
        raise HamiltonianConstructionError(f"constructed tour is invalid: {report.message}")
    return cert


# --- path checking ---------------------------------------------------------

@dataclass
class PathReport:
    passed: bool
    message: str = "ok"
    witness: Optional[tuple] = None

    def to_dict(self) -> dict:
        return {"pass": self.passed, "message": self.message, "witness": self.witness}


def check_path(
    g: BlowupGraph,
    cert,
    require_hamiltonian: bool = False,
    require_induced: bool = False,
) -> PathReport:
    verts = list(cert.vertices if isinstance(cert, PathCertificate) else cert)
    if any(not 0 <= v < g.n for v in verts):
        bad = next(v for v in verts if not 0 <= v < g.n)
        return PathReport(False, f"vertex {bad} out of range", (bad,))
    seen = set()
    for v in verts:
        if v in seen:
            return PathReport(False, "not simple", (v,))
        seen.add(v)
    indptr, indices = g.csr()
    for u, v in zip(verts, verts[1:]):
        nb = indices[indptr[u] : indptr[u + 1]]
        k = np.searchsorted(nb, v)
        if k >= len(nb) or nb[k] != v:
            return PathReport(False, f"not adjacent ({u},{v})", (u, v))
    if require_hamiltonian and len(seen) != g.n:
        return PathReport(False, f"covers {len(seen)} of {g.n} vertices", None)
    if require_induced:
        pos = {v: k for k, v in enumerate(verts)}
        for k, v in enumerate(verts):
            for w in indices[indptr[v] : indptr[v + 1]].tolist():
                kw = pos.get(w)
                if kw is not None and abs(kw - k) > 1:
                    return PathReport(False, f"chord ({v},{w})", (v, w))
    return PathReport(True)


def recount_vertices(rt: RibbedTree) -> int:
    """Vertex count recomputed from the skeleton and barrier words alone."""
    from .ribbed import barrier_template

    st = rt.skeleton
    total = 3 * st.n
    for s, c, _ in st.edges():
        total += 6 * len(barrier_template(rt.index_tree, int(st.rank[s]), int(st.rank[c])).ranks)
    return total
