"""Generalized cross-ratios of four half-dimensional subspaces.

Builds four random 2-planes in R^4, computes their cross-ratio class by
both the projection and graph paths, and shows that the class is
unchanged when all four planes are moved by the same linear map.
"""
import numpy as np

from reflrigid import Subspace, cross_ratio

rng = np.random.default_rng(0)
planes = [Subspace(rng.standard_normal((4, 2))) for _ in range(4)]

direct = cross_ratio(*planes, method="direct")
graph = cross_ratio(*planes, method="graph")
print("charpoly (direct):", np.round(direct.charpoly, 12))
print("charpoly (graph): ", np.round(graph.charpoly, 12))
print("same class:", direct.same_class(graph))

g = rng.standard_normal((4, 4))
moved = cross_ratio(*(U.transform(g) for U in planes))
print("invariant under GL(4):", moved.same_class(direct))
print("eigenvalues:", np.round(direct.eigenvalues(), 6))
