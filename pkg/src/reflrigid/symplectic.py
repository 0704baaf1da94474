"""Lagrangian subspaces, Lagrangian reflections and the Maslov index.

Conventions
-----------
The standard form on R^{2n} = U + U* is ``[[0, I], [-I, 0]]``, i.e.
``omega(u + a, u' + a') = a'(u) - a(u')``.

The Maslov form of a transverse Lagrangian triple (L1, L2, L3) is the
bilinear form on L1 obtained by writing L2 as the graph of
``f : L1 -> L3`` and identifying L3 with L1* through ``v -> omega(., v)``,
which is the identification that carries ``omega`` to the standard form::

    B(u, u') = omega(u, f(u'))

With it, ``Graph(I)`` over the standard splitting has Maslov index (n, 0).

For the tensor product R^2 (x) R^n the basis vector ``e_i (x) e_j`` sits at
index ``n * i + j``, so the form is ``kron(omega_2, I_{p,q})`` and the
embedding of a 2x2 matrix is ``kron(A, I_n)``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (DimensionMismatch, NotInvertible, NotLagrangian,
                     NotSymmetric, NotTransverse, SignatureMismatch)
from .linalg import (DEFAULT_TOLERANCES, Subspace, Tolerances, as_graph,
                     as_matrix, graph_subspace)

__all__ = [
    "SymplecticSpace", "MaslovData", "PQCircle", "standard_form",
    "tensor_form", "signature_matrix", "is_lagrangian", "maslov",
    "pq_circle", "circle_contains", "tensor_embed", "lagrangian_of_line",
    "form_defect", "simultaneously_diagonalizable",
]

OMEGA_2 = np.array([[0.0, 1.0], [-1.0, 0.0]])


def standard_form(n: int) -> np.ndarray:
    eye = np.eye(n)
    zero = np.zeros((n, n))
    return np.block([[zero, eye], [-eye, zero]])


def signature_matrix(signature) -> np.ndarray:
    """``I_{p,q} = diag(1, ..., 1, -1, ..., -1)``."""
    p, q = (int(v) for v in signature)
    if p < 0 or q < 0 or p + q < 1:
        raise SignatureMismatch(f"invalid signature {signature!r}")
    return np.diag([1.0] * p + [-1.0] * q)


def tensor_form(signature) -> np.ndarray:
    """The symplectic form ``omega_2 (x) b`` with b of signature (p, q)."""
    return np.kron(OMEGA_2, signature_matrix(signature))


@dataclass(frozen=True, eq=False)
class SymplecticSpace:
    """R^{2n} with an antisymmetric nondegenerate form ``omega``."""

    omega: np.ndarray

    def __post_init__(self):
        w = as_matrix(self.omega, "omega")
        if w.shape[0] != w.shape[1] or w.shape[0] % 2:
            raise DimensionMismatch(f"omega must be 2n x 2n, got {w.shape}")
        if np.linalg.norm(w + w.T) > 1e-12 * np.linalg.norm(w):
            raise ValueError("omega is not antisymmetric")
        if not np.linalg.cond(w) < DEFAULT_TOLERANCES.cond_max:
            raise NotInvertible("omega is degenerate")
        w.setflags(write=False)
        object.__setattr__(self, "omega", w)

    @classmethod
    def standard(cls, n: int) -> "SymplecticSpace":
        return cls(standard_form(n))

    @classmethod
    def coerce(cls, V) -> "SymplecticSpace":
        return V if isinstance(V, SymplecticSpace) else cls(V)

    @property
    def dim(self) -> int:
        return self.omega.shape[0]

    def pairing(self, X, Y) -> np.ndarray:
        """Matrix of omega(x_i, y_j) for the columns of X and Y."""
        return np.asarray(X).T @ self.omega @ np.asarray(Y)


@dataclass(frozen=True, eq=False)
class MaslovData:
    form: np.ndarray
    signature: tuple[int, int]


def _check_dims(L: Subspace, V: SymplecticSpace):
    if L.ambient_dim != V.dim:
        raise DimensionMismatch(f"subspace in R^{L.ambient_dim} but form on "
                                f"R^{V.dim}")


def is_lagrangian(L: Subspace, V, atol: float = 1e-10) -> bool:
    """True iff omega vanishes on L (relative to the basis scale)."""
    V = SymplecticSpace.coerce(V)
    _check_dims(L, V)
    b = L.orthonormal_basis
    scale = np.linalg.norm(V.omega, 2)
    return bool(np.max(np.abs(V.pairing(b, b))) <= atol * scale)


def _signature(form: np.ndarray, rank_tol: float) -> tuple[int, int]:
    ev = np.linalg.eigvalsh(0.5 * (form + form.T))
    top = np.max(np.abs(ev))
    if top == 0 or np.min(np.abs(ev)) <= rank_tol * top:
        raise NotTransverse("bilinear form is degenerate")
    return int(np.sum(ev > 0)), int(np.sum(ev < 0))


def maslov(L1: Subspace, L2: Subspace, L3: Subspace, V,
           tol: Tolerances = DEFAULT_TOLERANCES) -> MaslovData:
    """Maslov form on L1 of a pairwise transverse Lagrangian triple.

    The form is expressed in the stored basis of ``L1``; its signature
    is the Maslov index.
    """
    V = SymplecticSpace.coerce(V)
    for name, L in (("L1", L1), ("L2", L2), ("L3", L3)):
        _check_dims(L, V)
        if not is_lagrangian(L, V):
            raise NotLagrangian(f"{name} is not Lagrangian")
    for a, b, names in ((L1, L2, "L1, L2"), (L2, L3, "L2, L3"),
                        (L1, L3, "L1, L3")):
        if not a.is_transverse(b, tol):
            raise NotTransverse(f"{names} are not transverse")
    f = as_graph(L2, L1, L3, tol)
    form = V.pairing(L1.basis, L3.basis) @ f
    scale = max(np.linalg.norm(form), 1e-300)
    if np.linalg.norm(form - form.T) > 1e-10 * scale:
        raise NotSymmetric("Maslov form is not symmetric")
    form = 0.5 * (form + form.T)
    return MaslovData(form, _signature(form, tol.rank_tol))


@dataclass(frozen=True, eq=False)
class PQCircle:
    """The family {Graph(t B)} + {L2} of Lagrangians over L1 + L2.

    ``graph_map`` is the coordinate graph map L1 -> L2 of the generating
    Lagrangian; ``form`` the matching bilinear form on L1.
    """

    L1: Subspace
    L2: Subspace
    form: np.ndarray
    graph_map: np.ndarray
    signature: tuple[int, int]

    def member(self, t: float) -> Subspace:
        """The Lagrangian Graph(t B); t = 0 gives L1."""
        return graph_subspace(t * self.graph_map, self.L1, self.L2)

    def contains(self, L: Subspace, atol: float = 1e-9,
                 tol: Tolerances = DEFAULT_TOLERANCES) -> bool:
        return circle_contains(self, L, atol, tol)


def pq_circle(L1: Subspace, L2: Subspace, L3: Subspace, V,
              tol: Tolerances = DEFAULT_TOLERANCES) -> PQCircle:
    """The unique circle through a transverse Lagrangian triple.

    L1 is the base point (t = 0), L2 the point at infinity, and L3 the
    member at t = 1.
    """
    V = SymplecticSpace.coerce(V)
    data = maslov(L1, L3, L2, V, tol)
    f = as_graph(L3, L1, L2, tol)
    return PQCircle(L1, L2, data.form, f, data.signature)


def circle_contains(c: PQCircle, L: Subspace, atol: float = 1e-9,
                    tol: Tolerances = DEFAULT_TOLERANCES) -> bool:
    """True iff L is L2 or Graph(t B) for a real t (least-squares fit)."""
    if L.equals(c.L2, tol):
        return True
    if not L.is_transverse(c.L2, tol):
        return False
    f = as_graph(L, c.L1, c.L2, tol)
    g = c.graph_map
    t = np.vdot(g, f) / np.vdot(g, g)
    residual = np.linalg.norm(f - t * g)
    return bool(residual <= atol * max(1.0, np.linalg.norm(f)))


def lagrangian_of_line(l, n: int) -> Subspace:
    """``L_l = {l (x) w}``, basis ``kron(l, I_n)``."""
    v = np.asarray(l, dtype=float).reshape(2, 1)
    return Subspace(np.kron(v, np.eye(n)))


def tensor_embed(A, signature,
                 tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """Image of a 2x2 matrix under the (p, q)-diagonal homomorphism.

    Returns ``kron(A, I_n)`` with n = p + q.  It preserves
    ``tensor_form((p, q))`` up to the factor det(A), so reflections map
    to Lagrangian reflections.
    """
    A = as_matrix(A, "A")
    if A.shape != (2, 2):
        raise DimensionMismatch(f"expected a 2x2 matrix, got {A.shape}")
    if not np.linalg.cond(A) < tol.cond_max:
        raise NotInvertible("2x2 matrix is singular or ill-conditioned")
    n = signature_matrix(signature).shape[0]
    return np.kron(A, np.eye(n))


def form_defect(g, omega, sign: int = -1) -> float:
    """``||g^T omega g - sign * omega||_F / ||omega||_F``.

    ``sign = -1`` measures anti-symplecticity, ``+1`` symplecticity.
    """
    g = np.asarray(g, dtype=float)
    omega = np.asarray(omega, dtype=float)
    return float(np.linalg.norm(g.T @ omega @ g - sign * omega)
                 / np.linalg.norm(omega))


def simultaneously_diagonalizable(Q1, Q2,
                                  tol: Tolerances = DEFAULT_TOLERANCES):
    """Basis diagonalizing two nondegenerate symmetric forms at once.

    Returns ``P`` with ``P.T @ Q1 @ P`` and ``P.T @ Q2 @ P`` diagonal when
    ``Q1^{-1} Q2`` is diagonalizable over R, otherwise ``None``.
    """
    Q1 = as_matrix(Q1, "Q1")
    Q2 = as_matrix(Q2, "Q2")
    if Q1.shape != Q2.shape or Q1.shape[0] != Q1.shape[1]:
        raise DimensionMismatch("forms must be square of equal size")
    for name, Q in (("Q1", Q1), ("Q2", Q2)):
        if np.linalg.norm(Q - Q.T) > 1e-10 * max(1.0, np.linalg.norm(Q)):
            raise NotSymmetric(f"{name} is not symmetric")
        if not np.linalg.cond(Q) < tol.cond_max:
            raise NotInvertible(f"{name} is degenerate")
    n = Q1.shape[0]
    A = np.linalg.solve(Q1, Q2)
    ev = np.linalg.eigvals(A)
    scale = max(1.0, float(np.max(np.abs(ev))))
    if np.max(np.abs(ev.imag)) > tol.grid_tol * scale:
        return None

    # Cluster real eigenvalues, then take each full eigenspace from an SVD
    # null space; a short eigenspace means a Jordan block.
    values = np.sort(ev.real)
    clusters = []
    for v in values:
        if clusters and abs(v - clusters[-1][-1]) <= tol.grid_tol * scale:
            clusters[-1].append(v)
        else:
            clusters.append([v])
    blocks = []
    for cl in clusters:
        mu = float(np.mean(cl))
        _, s, vt = np.linalg.svd(A - mu * np.eye(n))
        null = vt[n - len(cl):].T
        thresh = np.sqrt(tol.grid_tol) * max(1.0, s[0])
        if len(cl) > 1 and s[n - len(cl)] > thresh:
            return None
        # Q1 restricted to an eigenspace is nondegenerate; diagonalize it.
        sub = null.T @ Q1 @ null
        _, rot = np.linalg.eigh(0.5 * (sub + sub.T))
        blocks.append(null @ rot)
    P = np.hstack(blocks)
    if not np.linalg.cond(P) < tol.cond_max:
        return None
    return P
