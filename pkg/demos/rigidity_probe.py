"""Numerical local-rigidity probe.

Perturbs the eigenspaces of a representation, projects back onto the
relation variety with Levenberg-Marquardt, and looks for a conjugating
matrix.  A rigid representation comes back conjugate in every trial; the
symmetric-power control does not.
"""
from reflrigid import ProbeParams, build_rep, rigidity_probe

params = ProbeParams(trials=20, magnitude=1e-3, seed=42)
for kind, k, n in [("diagonal", (2, 3, 7), 2), ("sympower", (3, 4, 5), 2)]:
    report = rigidity_probe(build_rep(kind, k, n), params, workers=4)
    print(f"{kind} {k} n={n}: {report.summary()}")
