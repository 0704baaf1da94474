"""Random generators and independent oracles shared by the test modules.

The oracles deliberately avoid the library's own shortcuts: cross-ratios
are computed from the projection definition with plain numpy, intertwiners
from the literal Kronecker system, and configurations are re-normalized
by hand.
"""
from __future__ import annotations

import numpy as np
from scipy.linalg import null_space
from scipy.optimize import least_squares

from reflrigid import Subspace

# criterion number -> ("PASS" | "FAIL" | "INFO", detail), printed by conftest
ACCEPTANCE = {}


def record(num, ok, detail, info=False):
    ACCEPTANCE[num] = ("INFO" if info else ("PASS" if ok else "FAIL"), detail)
    print(f"criterion {num}: {ACCEPTANCE[num][0]}  {detail}")


def random_subspace(rng, n, dim=None):
    dim = 2 * n if dim is None else dim
    return Subspace(rng.standard_normal((dim, n)))


def random_transverse_quadruple(rng, n, min_sv=1e-3):
    """Four random n-planes in R^2n, pairwise well separated."""
    while True:
        quad = [rng.standard_normal((2 * n, n)) for _ in range(4)]
        ok = True
        for i in range(4):
            for j in range(i + 1, 4):
                qa = np.linalg.qr(quad[i])[0]
                qb = np.linalg.qr(quad[j])[0]
                s = np.linalg.svd(np.hstack([qa, qb]), compute_uv=False)
                if s[-1] < min_sv:
                    ok = False
        if ok:
            return [Subspace(b) for b in quad]


def random_invertible(rng, d, cond_max=1e3):
    while True:
        g = rng.standard_normal((d, d))
        if np.linalg.cond(g) < cond_max:
            return g


def projector(U, W):
    """Projection onto span(U) along span(W), basis matrices."""
    B = np.hstack([U, W])
    n = U.shape[1]
    return U @ np.linalg.inv(B)[:n]


def direct_cross_ratio(U1, U2, U3, U4):
    """pi_{U1}^{U2} pi_{U3}^{U4} restricted to U1, in U1's basis."""
    image = projector(U1, U2) @ projector(U3, U4) @ U1
    return np.linalg.lstsq(U1, image, rcond=None)[0]


def literal_intertwiners(gens_a, gens_b):
    """Null space of the full (2n)^2-unknown system X a_i = b_i X."""
    d = gens_a[0].shape[0]
    eye = np.eye(d)
    K = np.vstack([np.kron(eye, a.T) - np.kron(b, eye)
                   for a, b in zip(gens_a, gens_b)])
    ns = null_space(K, rcond=1e-10)
    return [v.reshape(d, d) for v in ns.T]


# -- configurations -------------------------------------------------------

def config_blocks(c):
    """Basis matrices of the six subspaces of a Config6Normal."""
    n = c.n
    eye, zero = np.eye(n), np.zeros((n, n))
    g = lambda m: np.vstack([eye, m])
    return [np.vstack([eye, zero]), g(c.M1), np.vstack([zero, eye]),
            g(c.M2), g(c.N), g(c.M3)]


def normalize_blocks(blocks):
    """Hand-rolled normalization: (N, M1, M2, M3) from six basis matrices.

    Sends U1+ and U2+ to the coordinate blocks and reads off graphs.
    """
    n = blocks[0].shape[1]
    g = np.linalg.inv(np.hstack([blocks[0], blocks[2]]))

    def graph(B):
        c = g @ B
        return c[n:] @ np.linalg.inv(c[:n])

    return graph(blocks[4]), graph(blocks[1]), graph(blocks[3]), \
        graph(blocks[5])


def blocks_cross_ratios(blocks):
    """C1, C2, C3 from six basis matrices via the projection definition."""
    p1, m1, p2, m2, p3, m3 = blocks
    return (direct_cross_ratio(p2, m2, p3, m3),
            direct_cross_ratio(p1, m1, p3, m3),
            direct_cross_ratio(p1, m1, p2, m2))


def project_config(N, M1, M2, M3, lambdas):
    """LM on (M1, M2, M3) with N fixed until the direct cross-ratios are
    lambda_i I.  Returns the projected matrices and the residual norm."""
    n = N.shape[0]
    eye, zero = np.eye(n), np.zeros((n, n))

    def fun(x):
        m1, m2, m3 = x.reshape(3, n, n)
        blocks = [np.vstack([eye, zero]), np.vstack([eye, m1]),
                  np.vstack([zero, eye]), np.vstack([eye, m2]),
                  np.vstack([eye, N]), np.vstack([eye, m3])]
        cs = blocks_cross_ratios(blocks)
        return np.concatenate([(c - l * eye).ravel()
                               for c, l in zip(cs, lambdas)])

    x0 = np.concatenate([M1.ravel(), M2.ravel(), M3.ravel()])
    sol = least_squares(fun, x0, method="lm", xtol=1e-15, ftol=1e-15,
                        gtol=1e-15, max_nfev=5000)
    m1, m2, m3 = sol.x.reshape(3, n, n)
    return (m1, m2, m3), float(np.linalg.norm(sol.fun))
