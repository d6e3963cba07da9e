"""Skeleton-trees: sizes, ranks and zone-ancestors.

Run: python demos/02_skeleton_trees.py
"""
import numpy as np

from barriergraph.skeleton import build_skeleton, rank_counts, verify_skeleton, zone_ancestor

for ell in (1, 2, 3, 4):
    st = build_skeleton(ell)
    counts = np.bincount(st.rank)[1:].tolist()
    print(f"st_{ell}: {st.n} nodes, depth {int(st.depth.max())}, nodes per rank {counts}")
    assert counts == [rank_counts(ell)[r] for r in range(1, ell + 1)]

# Each node knows its zone-ancestor of every higher rank.
st = build_skeleton(3)
leaf = st.n - 1
chain = [zone_ancestor(st, leaf, i) for i in range(int(st.rank[leaf]), 4)]
print(f"\nnode {leaf} (rank {int(st.rank[leaf])}) has zone-ancestors {chain}")

rep = verify_skeleton(st)
print("verification:", rep.checks)
