"""Degeneracy and Hamiltonicity, each with a certificate that is checked separately.

Run: python demos/04_certificates.py
"""
import time

from barriergraph import build_graph
from barriergraph.blowup import check_degeneracy_certificate, check_path, degeneracy, hamiltonian_path
from barriergraph.index_tree import build_unbalanced

for ell in (1, 2, 3, 4):
    t = build_unbalanced(ell, 3)
    start = time.perf_counter()
    g = build_graph(t)
    cert = degeneracy(g)
    ham = hamiltonian_path(g)
    ok = check_degeneracy_certificate(g, cert) and check_path(g, ham, require_hamiltonian=True).passed
    print(
        f"{t.description}: |V|={g.n:>6}, peeling back-degree <= {cert.degeneracy}, "
        f"Hamiltonian path of {len(ham.vertices)} vertices, verified={ok}, {time.perf_counter() - start:.1f}s"
    )

# The certificate is plain text: a header line then one vertex per line.
print("\n" + "\n".join(hamiltonian_path(build_graph(build_unbalanced(2, 3))).to_text().splitlines()[:6]) + "\n...")
