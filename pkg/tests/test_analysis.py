import dataclasses
import math

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from barriergraph import analysis as an
from barriergraph import blowup as bu
from barriergraph import ribbed as rb
from barriergraph.barrier_words import full_barrier, is_factor
from barriergraph.index_tree import build_complete, build_near_complete
from barriergraph.skeleton import build_skeleton

import oracles


def graph_for(t):
    return bu.build_blowup(rb.build_ribbed(build_skeleton(t.ell), t))


@pytest.fixture(scope="module")
def g2():
    t = build_near_complete(2)
    return t, graph_for(t)


@pytest.fixture(scope="module")
def g3():
    t = build_complete(3)
    return t, graph_for(t)


def test_exact_lip_ell2_matches_oracles(g2):
    _, g = g2
    res = an.lip_exact(g)
    assert res.exact and not res.budget_exhausted
    assert res.order == 15
    assert an.lip_bruteforce(g) == 15
    assert oracles.longest_induced_path(oracles.to_nx(g)) == 15
    assert oracles.is_induced_path(oracles.to_nx(g), res.certificate.vertices)


@settings(max_examples=60, deadline=None)
@given(n=st.integers(1, 11), p=st.floats(0.1, 0.7), seed=st.integers(0, 10**6))
def test_exact_lip_matches_exhaustive_dfs(n, p, seed):
    G = nx.gnp_random_graph(n, p, seed=seed)
    expected = oracles.longest_induced_path(G)
    res = an.lip_exact(G)
    assert res.exact and res.order == expected
    assert an.lip_bruteforce(G) == expected
    assert oracles.is_induced_path(G, res.certificate.vertices)


def test_budget_is_respected(g3):
    _, g = g3
    res = an.lip_exact(g, budget=50)
    assert res.budget_exhausted and not res.exact
    assert res.expansions <= 51
    assert oracles.is_induced_path(oracles.to_nx(g), res.certificate.vertices)


def test_incumbent_is_kept(g3):
    _, g = g3
    inc = an.lip_heuristic(g, seeds=20).certificate.vertices
    res = an.lip_exact(g, budget=50, incumbent=inc)
    assert res.order >= len(inc)


@pytest.mark.parametrize("seed", range(25))
def test_random_paths_are_maximal_induced(g3, seed):
    _, g = g3
    path = an.random_induced_path(g, np.random.default_rng(seed))
    G = oracles.to_nx(g)
    assert oracles.is_induced_path(G, path)
    inside = set(path)
    for end in (path[0], path[-1]):
        for w in G[end]:
            if w in inside:
                continue
            touching = sum(1 for x in G[w] if x in inside)
            assert touching >= 2


def test_heuristic_is_seeded(g3):
    _, g = g3
    a = an.lip_heuristic(g, seeds=15, rng_seed=7)
    b = an.lip_heuristic(g, seeds=15, rng_seed=7)
    assert a.certificate.vertices == b.certificate.vertices
    assert a.order <= g.n


def test_normalize_path(g3):
    _, g = g3
    for seed in range(40):
        p = an.normalize_path(g, an.random_induced_path(g, np.random.default_rng(seed)))
        if p is None:
            continue
        assert g.kind[p[0]] <= bu.BOTTOM and g.kind[p[-1]] <= bu.BOTTOM
        tri_ranks = [int(g.rank[v]) for v in p if g.kind[v] <= bu.BOTTOM]
        assert int(g.rank[p[0]]) == max(tri_ranks)


def test_normalize_without_triangle_vertex(g2):
    _, g = g2
    reps = [v for v in range(g.n) if g.kind[v] > bu.BOTTOM][:1]
    assert an.normalize_path(g, reps) is None


def test_analyze_rejects_bad_paths(g2):
    t, g = g2
    with pytest.raises(an.PathPreconditionError, match="induced"):
        an.analyze_path(g, t, list(g.triangle(0)))
    rep = next(v for v in range(g.n) if g.kind[v] > bu.BOTTOM)
    with pytest.raises(an.PathPreconditionError, match="endpoints"):
        an.analyze_path(g, t, [rep])
    with pytest.raises(an.PathPreconditionError):
        an.analyze_path(g, t, [])


def test_analysis_fields_on_sample(g3):
    t, g = g3
    big = full_barrier(t)
    seen = 0
    for seed in range(200):
        p = an.normalize_path(g, an.random_induced_path(g, np.random.default_rng(seed)))
        if p is None:
            continue
        res = an.analyze_path(g, t, p)
        seen += 1
        assert res.triangle_seq[0] == 0
        assert res.special_seq[0] == 0 and res.special_seq[-1] == res.triangle_seq[-1]
        for q in res.triangle_seq:
            assert res.index_lock[q] > res.rank[q]
            assert res.correct[q]
        for q1, q2 in zip(res.triangle_seq, res.triangle_seq[1:]):
            tr = an.collapse(int(g.rank[v]) for v in p[q1 : q2 + 1])
            assert is_factor(tr, big)
        assert res.ghost_ranks == frozenset(range(max(res.rank.values()) + 1, t.ell + 1))
    assert seen > 100


@pytest.mark.parametrize("which", ["g2", "g3"])
def test_structure_lemmas_hold(which, request):
    t, g = request.getfixturevalue(which)
    rep = an.check_structure_lemmas(g, t, sample=300, rng_seed=1)
    assert rep.passed, rep.first_failure
    assert rep.analysed + rep.skipped == 300


def test_structure_checks_notice_missing_ribs(g3):
    t, g = g3
    keep = g.edge_kind < bu.RIB_E1
    stripped = dataclasses.replace(g, edges=g.edges[keep], edge_kind=g.edge_kind[keep], _csr=None)
    rep = an.check_structure_lemmas(stripped, t, sample=300, rng_seed=0)
    assert not rep.passed


def test_lemma_checks_notice_long_paths(g3):
    # an artificially small tree bound makes total-order fail on a real path
    t, g = g3
    p = an.normalize_path(g, an.lip_heuristic(g, seeds=60, regrow=10).certificate.vertices)
    assert len(p) > 14  # beats 13 * |B(1)| + 1
    res = an.analyze_path(g, t, p)
    assert "total-order" not in an.lemma_violations(g, t, res)
    res.special_seq[:] = res.special_seq[:1]
    res.range_root[0] = 1
    assert "total-order" in an.lemma_violations(g, t, res)


def test_trace_of(g2):
    _, g = g2
    ham = bu.hamiltonian_path(g)
    tr = an.trace_of(g, ham)
    assert all(a != b for a, b in zip(tr, tr[1:]))
    with pytest.raises(an.PathPreconditionError):
        an.trace_of(g, [0, 0])


def test_lower_bound_and_constants():
    assert an.nodm_lower_bound(45) == pytest.approx(math.log2(math.log2(45)) / math.log2(3))
    assert an.nodm_lower_bound(1) == 0.0
    c = an.recomputed_constants()
    assert c["path"] == 624 and c["path_matches_stated"]
    assert c["whole_path_twice_P_plus_extremities"] == 1272
    assert not c["whole_matches_stated"]


def test_bound_report_ell2(g2):
    t, g = g2
    res = an.lip_exact(g)
    rep = an.bound_report(g, t, res)
    assert rep["lip"] == 15 and rep["lip_exact"]
    assert rep["lower_bound"] <= 15 <= rep["bound_13_sigma_plus_1"]
    assert rep["bound_13_sigma_plus_1"] == 53
    assert rep["upper_bound_used"] == 53
    assert rep["pass"] and rep["constant_discrepancy"]
    assert rep["bound_936_ell_log_ell"] == pytest.approx(1872.0)
