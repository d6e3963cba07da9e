import json

import networkx as nx
import numpy as np
import pytest

from barriergraph import blowup as bu
from barriergraph import ribbed as rb
from barriergraph.barrier_words import collapse, factor_barrier
from barriergraph.index_tree import build_complete, build_near_complete, build_unbalanced
from barriergraph.skeleton import build_skeleton

import oracles


def graph_for(t):
    return bu.build_blowup(rb.build_ribbed(build_skeleton(t.ell), t))


CASES = {
    "complete1": (build_complete(1), 3, 3),
    "near2": (build_near_complete(2), 45, 77),
    "t3-2": (build_unbalanced(2, 3), 45, 77),
    "complete3": (build_complete(3), 1221, 2241),
    "t3-3": (build_unbalanced(3, 3), None, None),
}


@pytest.fixture(scope="module", params=list(CASES))
def case(request):
    t, n, m = CASES[request.param]
    return t, graph_for(t), n, m


def test_counts(case):
    t, g, n, m = case
    if n is not None:
        assert (g.n, g.m) == (n, m)
    assert bu.recount_vertices(g.ribbed) == g.n
    assert g.n == 3 * g.ribbed.n_tree + 6 * g.ribbed.n_blocking


def test_edges_match_loop_oracle(case):
    _, g, _, _ = case
    assert set(map(tuple, g.edges.tolist())) == oracles.blowup_edges(g.ribbed)
    assert np.all(g.edges[:, 0] < g.edges[:, 1])
    assert len(np.unique(g.edges, axis=0)) == g.m


def test_degeneracy_at_most_two(case):
    _, g, _, _ = case
    cert = bu.degeneracy(g)
    assert cert.degeneracy <= 2
    assert bu.check_degeneracy_certificate(g, cert)
    assert oracles.max_back_degree(oracles.to_nx(g)) == cert.degeneracy


def test_hamiltonian_certificate(case):
    _, g, _, _ = case
    cert = bu.hamiltonian_path(g)
    assert bu.check_path(g, cert, require_hamiltonian=True).passed
    G = oracles.to_nx(g)
    p = cert.vertices
    assert sorted(p) == list(range(g.n))
    assert all(G.has_edge(a, b) for a, b in zip(p, p[1:]))


def test_barrier_traces(case):
    t, g, _, _ = case
    st = g.ribbed.skeleton
    for s, c, _ in st.edges():
        i, j = int(st.rank[s]), int(st.rank[c])
        if i >= 2:
            expected = factor_barrier(t, i, i - 1)
        elif j == 1:
            expected = (1,)
        else:
            expected = factor_barrier(t, j, 1)[::-1]
        for side in (bu.LEFT, bu.RIGHT):
            verts = bu.barrier_vertices(g, c, side)
            assert collapse(int(g.rank[v]) for v in verts) == expected


def test_pi_projection_recovers_ribbed_tree(case):
    _, g, _, _ = case
    rt = g.ribbed
    keep = (g.side == -1) | (g.side == bu.LEFT)
    proj = set()
    for u, v in g.edges.tolist():
        if keep[u] and keep[v] and g.pi[u] != g.pi[v]:
            a, b = int(g.pi[u]), int(g.pi[v])
            proj.add((min(a, b), max(a, b)))
    expected = {(min(u, v), max(u, v)) for u, v, _ in rt.edges()}
    assert proj == expected


@pytest.mark.parametrize("t", [build_complete(1), build_near_complete(2), build_unbalanced(2, 3)])
def test_mirror_is_isomorphic(t):
    g = graph_for(t)
    G = oracles.to_nx(g)
    M = nx.Graph(list(oracles.blowup_edges(g.ribbed, mirror=True)))
    M.add_nodes_from(range(g.n))
    assert nx.is_isomorphic(G, M)


def test_json_round_trip():
    g = graph_for(build_near_complete(2))
    back = bu.BlowupGraph.from_dict(json.loads(g.to_json()))
    for name in ("kind", "rank", "pi", "side", "edges", "edge_kind"):
        assert np.array_equal(getattr(back, name), getattr(g, name)), name
    d = json.loads(g.to_json())
    assert d["format_version"] == bu.FORMAT_VERSION
    assert d["attachment"] == bu.ATTACHMENT_CONVENTION


def test_text_exports():
    g = graph_for(build_near_complete(2))
    assert len(g.edge_list_text().splitlines()) == g.m
    dot = g.to_dot()
    assert dot.startswith("graph G {") and dot.rstrip().endswith("}")
    assert dot.count(" -- ") == g.m


def test_certificate_text_round_trip():
    g = graph_for(build_near_complete(2))
    cert = bu.hamiltonian_path(g)
    back = bu.PathCertificate.from_text(cert.to_text())
    assert back.vertices == cert.vertices
    assert (back.kind, back.ell, back.tree) == ("hamiltonian", 2, "near-complete(ell=2)")
    with pytest.raises(ValueError):
        bu.PathCertificate.from_text("bogus\n1\n")


def test_checker_failure_modes():
    g = graph_for(build_near_complete(2))
    ham = bu.hamiltonian_path(g).vertices
    assert bu.check_path(g, ham[:5] + [ham[0]]).message == "not simple"
    far = next(v for v in range(g.n) if v != 0 and v not in set(g.neighbors(0).tolist()))
    rep = bu.check_path(g, [0, far])
    assert rep.message == f"not adjacent (0,{far})"
    assert bu.check_path(g, ham[:-1], require_hamiltonian=True).message.startswith("covers 44 of 45")
    # a triangle walked as a path has a chord between its ends
    tri = list(g.triangle(0))
    rep = bu.check_path(g, tri, require_induced=True)
    assert not rep.passed and rep.message.startswith("chord")
    assert not bu.check_path(g, [g.n]).passed


def test_checker_rejects_swapped_vertices():
    g = graph_for(build_complete(3))
    ham = list(bu.hamiltonian_path(g).vertices)
    ham[10], ham[500] = ham[500], ham[10]
    assert not bu.check_path(g, ham, require_hamiltonian=True).passed


def test_degeneracy_certificate_rejects_tampering():
    g = graph_for(build_complete(3))
    cert = bu.degeneracy(g)
    cert.back_degree[0] += 1
    assert not bu.check_degeneracy_certificate(g, cert)


def test_degeneracy_on_cliques_and_cycles():
    for G, k in ((nx.complete_graph(5), 4), (nx.cycle_graph(9), 2), (nx.path_graph(6), 1)):
        adj = [sorted(G[v]) for v in range(G.number_of_nodes())]
        indptr = np.cumsum([0] + [len(a) for a in adj])
        indices = np.array([w for a in adj for w in a], dtype=np.int64)
        assert bu.degeneracy_from_csr(G.number_of_nodes(), indptr, indices).degeneracy == k


def test_attachment_endpoints():
    ends = bu.barrier_endpoints(0, 1, True)
    assert ends == {bu.LEFT: (0, 3), bu.RIGHT: (2, 4)}
    ends = bu.barrier_endpoints(0, 2, False)
    assert ends == {bu.RIGHT: (1, 7), bu.LEFT: (2, 6)}
