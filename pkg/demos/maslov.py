"""Maslov index of the +1 eigenspaces of a symplectic representation.

Two symplectic embeddings of the (3, 4, 5) group that differ only in the
signature of the auxiliary quadratic form have different Maslov indices,
so no symplectic change of basis relates them.
"""
from reflrigid import build_rep, maslov

for signature in [(3, 0), (2, 1)]:
    rep = build_rep("symplectic", (3, 4, 5), 3, signature=signature)
    (p1, _), (p2, _), (p3, _) = rep.eigenspaces
    data = maslov(p1, p2, p3, rep.omega)
    print(f"signature {signature}: Maslov index {data.signature}")
