"""Index-trees and the barrier words they generate.

Run: python demos/01_index_trees_and_words.py
"""
from barriergraph import barrier_words as bw
from barriergraph.index_tree import build_complete, build_unbalanced, subtree_indices

# A complete tree on seven indices. Labels run backwards along a left-first DFS,
# so the root is 7 and every subtree is an interval of labels.
t = build_complete(7)
for i in t.indices():
    print(f"index {i}: left={t.left[i]}, right={t.right[i]}, subtree={sorted(subtree_indices(t, i))}")

# B(i) walks the subtree of i and visits the left subtree twice.
print("\nB(7) =", " ".join(map(str, bw.full_barrier(t))))
print("B(4,3) =", bw.factor_barrier(t, 4, 3))
print("B(6,1) =", bw.factor_barrier(t, 6, 1))

# Indices below b that can be joined without crossing b fall into classes.
for b in (7, 4):
    print(f"classes below {b}:", [sorted(c) for c in bw.reach_classes(t, b).classes])

# The unbalanced family keeps barrier words short: shrink the left subtree.
u = build_unbalanced(7, 3)
print("\nT_3(7) children:", {i: (u.left[i], u.right[i]) for i in u.indices()})
print("|B(7)| on T_3(7) =", len(bw.full_barrier(u)))

# Every structural statement is checked exhaustively for small trees.
rep = bw.check_word_properties(t)
for r in rep.results:
    print(f"  {'ok ' if r.passed else 'BAD'} {r.statement} ({r.checked} instances)")
