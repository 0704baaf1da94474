"""Normalized 6-tuples of half-dimensional subspaces.

A pairwise transverse 6-tuple (U1+, U1-, U2+, U2-, U3+, U3-) is moved so
that U1+ and U2+ are the two coordinate blocks of R^{2n}; the other four
subspaces are then graphs of n x n matrices ``U3+ = Graph(N)`` and
``U_i^- = Graph(M_i)``.  The residual freedom is a simultaneous change
of basis ``(N, M) -> (Q N P^-1, Q M P^-1)``, so the eigenvalues of
``N^-1 M_i`` are invariants of the tuple up to PGL(2n, R).
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import (DegenerateCoefficients, DimensionMismatch,
                     NotLagrangian, NotTransverse, Singular)
from .linalg import (DEFAULT_TOLERANCES, CrossRatioClass, Subspace,
                     Tolerances, as_matrix)
from .symplectic import signature_matrix
from .triangle import Rep, quadratic_roots

__all__ = [
    "Config6Normal", "extract_and_normalize", "config_cross_ratios",
    "solve_scalar_config", "config_equivalent", "canonical_invariants",
    "dumps_configs", "loads_configs",
]


@dataclass(frozen=True, eq=False)
class Config6Normal:
    """Graph matrices of a normalized 6-tuple.

    ``symmetric`` marks the Lagrangian variant, where the second block is
    identified with the dual of the first so that graphs of Lagrangians
    are symmetric matrices.  ``lambdas`` optionally records the scalar
    cross-ratio targets the configuration was built for.
    """

    n: int
    N: np.ndarray
    M1: np.ndarray
    M2: np.ndarray
    M3: np.ndarray
    symmetric: bool = False
    lambdas: tuple | None = field(default=None)

    def __post_init__(self):
        for name in ("N", "M1", "M2", "M3"):
            m = as_matrix(getattr(self, name), name)
            if m.shape != (self.n, self.n):
                raise DimensionMismatch(f"{name} must be {self.n}x{self.n}, "
                                        f"got {m.shape}")
            if self.symmetric and (np.linalg.norm(m - m.T)
                                   > 1e-10 * max(1.0, np.linalg.norm(m))):
                raise NotLagrangian(f"{name} is not symmetric")
            m.setflags(write=False)
            object.__setattr__(self, name, m)

    @property
    def matrices(self):
        return self.N, self.M1, self.M2, self.M3

    def subspaces(self):
        """Eigenspace pairs ((U1+, U1-), (U2+, U2-), (U3+, U3-))."""
        n = self.n
        eye, zero = np.eye(n), np.zeros((n, n))

        def graph(m):
            return Subspace(np.vstack([eye, m]))

        return ((Subspace(np.vstack([eye, zero])), graph(self.M1)),
                (Subspace(np.vstack([zero, eye])), graph(self.M2)),
                (graph(self.N), graph(self.M3)))

    def is_transverse(self, tol: Tolerances = DEFAULT_TOLERANCES) -> bool:
        flat = [s for pair in self.subspaces() for s in pair]
        return all(a.is_transverse(b, tol)
                   for a, b in itertools.combinations(flat, 2))

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "symmetric": self.symmetric,
            "N": self.N.tolist(),
            "M1": self.M1.tolist(),
            "M2": self.M2.tolist(),
            "M3": self.M3.tolist(),
            "lambda": None if self.lambdas is None else list(self.lambdas),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Config6Normal":
        lam = data.get("lambda")
        return cls(int(data["n"]), np.array(data["N"], dtype=float),
                   np.array(data["M1"], dtype=float),
                   np.array(data["M2"], dtype=float),
                   np.array(data["M3"], dtype=float),
                   bool(data.get("symmetric", False)),
                   None if lam is None else tuple(float(v) for v in lam))


def _pairs_of(rep_or_pairs):
    if isinstance(rep_or_pairs, Rep):
        return rep_or_pairs.eigenspaces
    pairs = tuple(tuple(p) for p in rep_or_pairs)
    if len(pairs) != 3 or any(len(p) != 2 for p in pairs):
        raise ValueError("expected three (plus, minus) subspace pairs")
    return pairs


def extract_and_normalize(rep, omega=None,
                          tol: Tolerances = DEFAULT_TOLERANCES) -> Config6Normal:
    """Normalize the eigenspace 6-tuple of ``rep``.

    ``rep`` is a :class:`Rep` or three (plus, minus) pairs.  For
    symplectic reps (or when ``omega`` is given) the basis of U2+ is
    taken omega-dual to the stored basis of U1+, which makes the graph
    matrices symmetric.
    """
    pairs = _pairs_of(rep)
    if omega is None and isinstance(rep, Rep) and rep.kind == "symplectic":
        omega = rep.omega
    flat = [s for pair in pairs for s in pair]
    for a, b in itertools.combinations(range(6), 2):
        if not flat[a].is_transverse(flat[b], tol):
            raise NotTransverse(f"eigenspaces {a} and {b} are not transverse")
    n = flat[0].n
    B1 = flat[0].basis
    B2 = flat[2].basis
    if omega is not None:
        B2 = B2 @ np.linalg.inv(B1.T @ np.asarray(omega) @ B2)
    g = np.linalg.inv(np.hstack([B1, B2]))

    def graph_matrix(S: Subspace):
        coords = g @ S.basis
        return np.linalg.solve(coords[:n].T, coords[n:].T).T

    mats = [graph_matrix(flat[4]), graph_matrix(flat[1]),
            graph_matrix(flat[3]), graph_matrix(flat[5])]
    symmetric = omega is not None
    if symmetric:
        for m in mats:
            if np.linalg.norm(m - m.T) > 1e-8 * max(1.0, np.linalg.norm(m)):
                raise NotLagrangian("eigenspaces are not Lagrangian")
        mats = [0.5 * (m + m.T) for m in mats]
    lambdas = None
    if isinstance(rep, Rep) and rep.kind in ("diagonal", "symplectic"):
        lambdas = tuple(float(v) for v in rep.params.lambdas)
    return Config6Normal(n, *mats, symmetric=symmetric, lambdas=lambdas)


def _inv(m: np.ndarray, name: str, tol: Tolerances) -> np.ndarray:
    if not np.linalg.cond(m) < tol.cond_max:
        raise Singular(f"{name} is not invertible")
    return np.linalg.inv(m)


def config_cross_ratios(c: Config6Normal,
                        tol: Tolerances = DEFAULT_TOLERANCES):
    """(C1, C2, C3) from the graph matrices.

    ``C1 = (N - M2)(N - M3)^-1``, ``C2 = M1^-1 (N - M1)(N - M3)^-1 M3``,
    ``C3 = M1^-1 M2``.
    """
    N, M1, M2, M3 = c.matrices
    inv_nm3 = _inv(N - M3, "N - M3", tol)
    inv_m1 = _inv(M1, "M1", tol)
    C1 = (N - M2) @ inv_nm3
    C2 = inv_m1 @ (N - M1) @ inv_nm3 @ M3
    C3 = inv_m1 @ M2
    return tuple(CrossRatioClass.from_endo(C, "graph") for C in (C1, C2, C3))


def solve_scalar_config(l1: float, l2: float, l3: float, n: int,
                        symmetric: bool = False, signature=None,
                        filter_transverse: bool = True,
                        tol: Tolerances = DEFAULT_TOLERANCES):
    """Enumerate configurations whose cross-ratios are (l1 I, l2 I, l3 I).

    With N normalized (N = I, or ``I_{p,q}`` when a signature is given in
    the symmetric variant), ``A1 = N^-1 M1`` is diagonal with entries
    among the two roots of the quadratic; one representative is emitted
    per multiplicity m = 0..n of the +sqrt root, with
    ``M2 = l3 M1`` and ``M3 = ((l1 - 1) N + l3 M1) / l1``.

    Returns
    -------
    list of Config6Normal
        ``n + 1`` entries before transversality filtering.
    """
    if int(n) != n or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    n = int(n)
    if l1 == 0:
        raise DegenerateCoefficients("l1 = 0 makes M3 undefined")
    r_plus, r_minus = quadratic_roots(l1, l2, l3)
    if signature is not None:
        if not symmetric:
            raise ValueError("a signature only applies to the symmetric "
                             "variant")
        N = signature_matrix(signature)
        if N.shape[0] != n:
            raise DimensionMismatch(f"signature {signature} is not of size "
                                    f"{n}")
    else:
        N = np.eye(n)
    out = []
    for m in range(n + 1):
        A1 = np.diag([r_plus] * m + [r_minus] * (n - m))
        M1 = N @ A1
        M2 = l3 * M1
        M3 = ((l1 - 1) * N + l3 * M1) / l1
        c = Config6Normal(n, N, M1, M2, M3, symmetric=symmetric,
                          lambdas=(float(l1), float(l2), float(l3)))
        if filter_transverse and not c.is_transverse(tol):
            continue
        out.append(c)
    return out


def canonical_invariants(c: Config6Normal,
                         tol: Tolerances = DEFAULT_TOLERANCES):
    """Eigenvalues of N^-1 M_i (i = 1, 2, 3) and the three charpolys."""
    N = c.N
    eigs = [np.linalg.eigvals(np.linalg.solve(N, M))
            for M in (c.M1, c.M2, c.M3)]
    polys = [cr.charpoly for cr in config_cross_ratios(c, tol)]
    return eigs, polys


def _multiset_close(a: np.ndarray, b: np.ndarray, atol: float) -> bool:
    cost = np.abs(a[:, None] - b[None, :])
    rows, cols = linear_sum_assignment(cost)
    scale = max(1.0, float(np.max(np.abs(a))), float(np.max(np.abs(b))))
    return bool(np.max(cost[rows, cols]) <= atol * scale)


def config_equivalent(a: Config6Normal, b: Config6Normal,
                      tol: Tolerances = DEFAULT_TOLERANCES) -> bool:
    """Compare canonical forms within ``grid_tol``.

    A complete invariant on the scalar-cross-ratio families produced by
    :func:`solve_scalar_config`, where ``N^-1 M1`` is diagonalizable.
    """
    if a.n != b.n or a.symmetric != b.symmetric:
        raise DimensionMismatch("configurations differ in size or variant")
    eig_a, poly_a = canonical_invariants(a, tol)
    eig_b, poly_b = canonical_invariants(b, tol)
    for x, y in zip(eig_a, eig_b):
        if not _multiset_close(x, y, tol.grid_tol):
            return False
    for x, y in zip(poly_a, poly_b):
        scale = max(1.0, float(np.max(np.abs(x))))
        if np.max(np.abs(x - y)) > tol.grid_tol * scale:
            return False
    return True


def dumps_configs(configs, **kwargs) -> str:
    return json.dumps([c.to_dict() for c in configs], **kwargs)


def loads_configs(text: str):
    data = json.loads(text)
    if isinstance(data, dict):
        data = data.get("configurations", [data])
    return [Config6Normal.from_dict(d) for d in data]
