"""Barrier-length bounds for T_alpha(m) and the end-to-end bound report.

Run: python demos/06_bounds.py
"""
from barriergraph import analysis as an
from barriergraph import barrier_words as bw
from barriergraph import build_graph
from barriergraph.cli import summary_table
from barriergraph.index_tree import build_unbalanced

print(f"{'m':>6} {'alpha':>5} {'|B|':>7} {'padded':>7} {'bound':>9}")
for alpha in (2.5, 3, 4):
    for m in (10, 100, 1000, 2000):
        r = bw.barrier_length_bound(m, alpha)
        print(f"{m:>6} {alpha:>5} {r.actual:>7} {r.padded:>7} {r.bound:>9.1f}")

print("\nheaviest nested chains in T_3(m):")
for m in (7, 50, 200):
    total, chain = bw.max_nested_chain(build_unbalanced(m, 3))
    print(f"  m={m}: sum {total} <= {bw.nested_sum_bound(m, 3):.0f}, chain {chain[:6]}{'...' if len(chain) > 6 else ''}")

for ell in (2, 3):
    t = build_unbalanced(ell, 3)
    g = build_graph(t)
    lip = an.lip_exact(g) if g.n < 100 else an.lip_heuristic(g, seeds=100)
    rep = an.bound_report(g, t, lip, alpha=3.0)
    print()
    print(summary_table(rep), end="")
print("\nconstants recomputed from the barrier lemmas:", an.recomputed_constants())
