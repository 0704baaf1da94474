"""Embeddings of PGL(2, R) into 2n x 2n matrices and representation assembly.

R^{2n} is split as n consecutive coordinate pairs R^2 + ... + R^2, so the
diagonal embedding is ``kron(I_n, A)`` and a line ``l`` goes to the span
of its n copies, ``kron(I_n, l)``.
"""
from __future__ import annotations

import numpy as np

from .errors import NotInvertible, SignatureMismatch
from .linalg import DEFAULT_TOLERANCES, Subspace, Tolerances, as_matrix
from .triangle import KINDS, Rep, TriangleParams, geometric_representation

__all__ = [
    "diagonal_embed", "xi", "symmetric_power_embed", "build_rep",
    "expected_dimension_diagonal", "as_line",
]


def _check_invertible_2x2(A, tol: Tolerances) -> np.ndarray:
    A = as_matrix(A, "A")
    if A.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {A.shape}")
    if not np.linalg.cond(A) < tol.cond_max:
        raise NotInvertible("2x2 matrix is singular or ill-conditioned")
    return A


def diagonal_embed(A, n: int, tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """Block-diagonal matrix with n copies of the 2x2 matrix ``A``."""
    A = _check_invertible_2x2(A, tol)
    return np.kron(np.eye(n), A)


def as_line(l) -> np.ndarray:
    """A nonzero direction vector in R^2 from a vector or a 1-d Subspace."""
    if isinstance(l, Subspace):
        if l.ambient_dim != 2:
            raise ValueError("not a line in R^2")
        return l.basis[:, 0].copy()
    v = np.asarray(l, dtype=float).reshape(-1)
    if v.shape != (2,) or not np.any(v):
        raise ValueError(f"a line needs a nonzero 2-vector, got {l!r}")
    return v


def xi(l, n: int) -> Subspace:
    """The subspace spanned by the n copies of the line ``l`` in R^{2n}.

    The stored basis is ``kron(I_n, v)`` for the direction ``v`` of ``l``,
    so ``diagonal_embed(A, n) @ xi(l, n).basis == xi(A l, n).basis``.
    """
    v = as_line(l)
    return Subspace(np.kron(np.eye(n), v.reshape(2, 1)))


def symmetric_power_embed(A, n: int,
                          tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """Action of ``A`` on degree 2n-1 binary forms, monomial basis.

    Basis vector i is ``x^(d-i) y^i`` with d = 2n - 1, and column i holds
    the coefficients of ``(A e1)^(d-i) (A e2)^i``, so
    ``diag(a, 1/a)`` maps to ``diag(a^d, a^(d-2), ..., a^-d)``.
    """
    A = _check_invertible_2x2(A, tol)
    d = 2 * n - 1
    # Polynomials in t = y / x, coefficient of t^j is row j.
    col1 = np.array([A[0, 0], A[1, 0]])
    col2 = np.array([A[0, 1], A[1, 1]])
    out = np.zeros((d + 1, d + 1))
    for i in range(d + 1):
        p = np.array([1.0])
        for _ in range(d - i):
            p = np.convolve(p, col1)
        for _ in range(i):
            p = np.convolve(p, col2)
        out[:, i] = p
    return out


def _eigenspace(R: np.ndarray, sign: int) -> Subspace:
    """Column space of (I + sign R) / 2 as an orthonormal basis."""
    proj = 0.5 * (np.eye(R.shape[0]) + sign * R)
    u, s, _ = np.linalg.svd(proj)
    return Subspace(u[:, :R.shape[0] // 2])


def build_rep(kind: str, k, n: int, signature=None,
              tol: Tolerances = DEFAULT_TOLERANCES) -> Rep:
    """Compose the geometric representation with an embedding.

    Parameters
    ----------
    kind : {"diagonal", "symplectic", "sympower"}
        ``"diagonal"`` uses :func:`diagonal_embed` into PGL(2n, R);
        ``"symplectic"`` uses the tensor embedding with a form of the
        given signature; ``"sympower"`` is the irreducible (symmetric
        power) embedding, a negative control that is not rigid in general.
    k : triangle parameters
    n : half the ambient dimension
    signature : (p, q) with p + q = n, symplectic kind only.
        Defaults to (n, 0).
    """
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}, expected one of {KINDS}")
    if int(n) != n or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    n = int(n)
    k = TriangleParams.of(k)
    geom = geometric_representation(k, tol)
    lines = [(as_line(p), as_line(m)) for p, m in geom.eigenspaces]

    if kind == "diagonal":
        eig = [(xi(p, n), xi(m, n)) for p, m in lines]
        rep = Rep.from_eigenspaces("diagonal", k, eig, tol=tol)
    elif kind == "symplectic":
        from .symplectic import lagrangian_of_line, tensor_form
        if signature is None:
            signature = (n, 0)
        p, q = (int(v) for v in signature)
        if p < 0 or q < 0 or p + q != n:
            raise SignatureMismatch(f"signature {signature} does not sum "
                                    f"to n = {n}")
        eig = [(lagrangian_of_line(a, n), lagrangian_of_line(b, n))
               for a, b in lines]
        omega = tensor_form((p, q))
        omega.setflags(write=False)
        rep = Rep.from_eigenspaces("symplectic", k, eig, (p, q), omega, tol)
    else:
        gens = [symmetric_power_embed(r, n, tol) for r in geom.generators]
        eig = [(_eigenspace(g, +1), _eigenspace(g, -1)) for g in gens]
        rep = Rep.from_eigenspaces("sympower", k, eig, tol=tol)
    return rep.check(tol)


def expected_dimension_diagonal(n: int) -> int:
    """Expected dimension of the component of diagonal representations.

    Half of (sum of the three conjugacy-class dimensions minus twice
    dim PGL(2n)), with each class of dimension 2n^2 (centralizer of
    dimension 2n^2 - 1).  Equals 1 - n^2.
    """
    if int(n) != n or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    n = int(n)
    dim_group = 4 * n * n - 1
    dim_centralizer = 2 * n * n - 1
    dim_class = dim_group - dim_centralizer
    total = 3 * dim_class - 2 * dim_group
    assert total % 2 == 0
    return total // 2
