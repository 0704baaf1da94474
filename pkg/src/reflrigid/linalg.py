"""Dense linear algebra on half-dimensional subspaces of R^{2n}.

Subspaces are stored as basis matrices (2n x n).  Projections,
reflections and graph maps are computed in the coordinates of the
stored bases, and the generalized cross-ratio of four subspaces is
returned both as a raw endomorphism of the first subspace (in its
stored basis) and as the characteristic polynomial, which is the
basis-independent conjugacy invariant.

The characteristic polynomial convention throughout is ``det(M - x I)``
with coefficients listed in ascending degree.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, fields
from pathlib import Path

import numpy as np

from .errors import (DimensionMismatch, NotInvertible, NotTransverse,
                     ZeroMatrix)

__all__ = [
    "Tolerances", "DEFAULT_TOLERANCES", "Subspace", "CrossRatioClass",
    "as_matrix", "charpoly", "projection", "reflection", "as_graph",
    "graph_subspace", "cross_ratio", "scalar_deviation",
    "projective_order", "finite_order_grid",
]


@dataclass(frozen=True)
class Tolerances:
    """Numerical thresholds shared by every module.

    All fields must be strictly positive.  Operations take an instance
    explicitly; :data:`DEFAULT_TOLERANCES` holds the documented defaults.
    """

    rank_tol: float = 1e-9
    scalar_tol: float = 1e-9
    grid_tol: float = 1e-6
    relation_tol: float = 1e-12
    conj_tol: float = 1e-8
    cond_max: float = 1e8

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if not (isinstance(value, (int, float)) and math.isfinite(value)
                    and value > 0):
                raise ValueError(f"tolerance {f.name} must be a positive "
                                 f"finite number, got {value!r}")

    def replace(self, **changes) -> "Tolerances":
        return Tolerances(**{**asdict(self), **changes})

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "Tolerances":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown tolerance keys: {sorted(unknown)}")
        return cls(**{k: float(v) for k, v in data.items()})

    @classmethod
    def load(cls, path) -> "Tolerances":
        """Read overrides from a JSON object; missing keys keep defaults."""
        with open(Path(path)) as fh:
            return cls.from_dict(json.load(fh))


DEFAULT_TOLERANCES = Tolerances()


def as_matrix(a, name="matrix") -> np.ndarray:
    """Return ``a`` as a 2-d float array, rejecting NaN and Inf."""
    m = np.array(a, dtype=float)
    if m.ndim == 1:
        m = m.reshape(-1, 1)
    if m.ndim != 2:
        raise DimensionMismatch(f"{name} must be 2-dimensional, got "
                                f"shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{name} has non-finite entries")
    return m


def _full_rank(m: np.ndarray, rank_tol: float) -> bool:
    if m.shape[1] == 1:
        return bool(np.any(m))
    s = np.linalg.svd(m, compute_uv=False)
    return s.size > 0 and s[0] > 0 and s[-1] > rank_tol * s[0]


class Subspace:
    """An n-dimensional subspace of R^{2n}, given by a spanning basis.

    Parameters
    ----------
    basis : array_like, shape (2n, n)
        Columns span the subspace.  A 1-d array is read as a single
        column (a line in the plane).
    tol : Tolerances, optional
        Only ``rank_tol`` is used, to reject rank-deficient bases.
    """

    __slots__ = ("_basis", "_onb")

    def __init__(self, basis, tol: Tolerances = DEFAULT_TOLERANCES):
        b = as_matrix(basis, "basis")
        rows, cols = b.shape
        if rows != 2 * cols:
            raise DimensionMismatch(
                f"basis must have shape (2n, n), got {b.shape}")
        if not _full_rank(b, tol.rank_tol):
            raise NotInvertible("basis does not have full column rank")
        b.setflags(write=False)
        self._basis = b
        self._onb = None

    @property
    def basis(self) -> np.ndarray:
        return self._basis

    @property
    def n(self) -> int:
        return self._basis.shape[1]

    @property
    def ambient_dim(self) -> int:
        return self._basis.shape[0]

    @property
    def orthonormal_basis(self) -> np.ndarray:
        if self._onb is None:
            if self._basis.shape[1] == 1:
                q = self._basis / np.sqrt(np.sum(self._basis ** 2))
            else:
                q, _ = np.linalg.qr(self._basis)
            q.setflags(write=False)
            self._onb = q
        return self._onb

    def _check_compatible(self, other: "Subspace"):
        if self.ambient_dim != other.ambient_dim or self.n != other.n:
            raise DimensionMismatch(
                f"subspaces of shapes {self._basis.shape} and "
                f"{other._basis.shape} are not comparable")

    def is_transverse(self, other: "Subspace",
                      tol: Tolerances = DEFAULT_TOLERANCES) -> bool:
        """Rank test on ``[U | W]`` with orthonormal bases.

        Its singular values are sqrt(1 +- cos(theta_i)) for the principal
        angles theta_i, so only the largest cosine is needed.
        """
        self._check_compatible(other)
        cos = self.orthonormal_basis.T @ other.orthonormal_basis
        if cos.size == 1:
            c = abs(float(cos[0, 0]))
        else:
            c = float(np.linalg.svd(cos, compute_uv=False)[0])
        c = min(c, 1.0)
        return bool(np.sqrt(1.0 - c) > tol.rank_tol * np.sqrt(1.0 + c))

    def equals(self, other: "Subspace",
               tol: Tolerances = DEFAULT_TOLERANCES) -> bool:
        """Span equality: the concatenated bases have rank n."""
        self._check_compatible(other)
        both = np.hstack([self.orthonormal_basis, other.orthonormal_basis])
        s = np.linalg.svd(both, compute_uv=False)
        return bool(s[self.n] <= tol.rank_tol * s[0])

    def transform(self, g) -> "Subspace":
        """Image of the subspace under the linear map ``g``."""
        return Subspace(np.asarray(g, dtype=float) @ self._basis)

    def __repr__(self):
        return f"Subspace(n={self.n}, basis={self._basis.tolist()!r})"


def charpoly(m) -> np.ndarray:
    """Coefficients of ``det(M - x I)`` in ascending degree."""
    m = as_matrix(m)
    d = m.shape[0]
    if d == 1:
        return np.array([m[0, 0], -1.0])
    if d == 2:
        det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
        return np.array([det, -(m[0, 0] + m[1, 1]), 1.0])
    # np.poly gives det(x I - M), descending.
    return (-1) ** d * np.real_if_close(np.poly(m))[::-1].astype(float)


@dataclass(frozen=True, eq=False)
class CrossRatioClass:
    """Generalized cross-ratio of a quadruple of subspaces.

    ``endo`` is the endomorphism of the first subspace in its stored
    basis; ``charpoly`` is its conjugacy invariant; ``method`` records
    whether the graph formula or the projection definition was used.
    """

    endo: np.ndarray
    charpoly: np.ndarray
    method: str = "direct"

    @classmethod
    def from_endo(cls, endo, method="direct") -> "CrossRatioClass":
        e = as_matrix(endo, "endo")
        e.setflags(write=False)
        c = charpoly(e)
        c.setflags(write=False)
        return cls(e, c, method)

    @property
    def n(self) -> int:
        return self.endo.shape[0]

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvals(self.endo)

    def same_class(self, other: "CrossRatioClass", atol: float = 1e-8) -> bool:
        """Conjugacy-class comparison through the characteristic polynomial."""
        if self.n != other.n:
            return False
        scale = max(1.0, float(np.max(np.abs(self.charpoly))))
        return bool(np.max(np.abs(self.charpoly - other.charpoly))
                    <= atol * scale)

    def scalar_value(self, tol: float = 1e-9):
        """The scalar c if ``endo`` is c*I within ``tol``, else ``None``."""
        c = np.trace(self.endo) / self.n
        dev = np.linalg.norm(self.endo - c * np.eye(self.n))
        if dev <= tol * max(1.0, abs(c)):
            return float(c)
        return None


def _split(U: Subspace, W: Subspace, tol: Tolerances) -> np.ndarray:
    """Inverse of the basis matrix ``[U | W]``; raises if not transverse."""
    U._check_compatible(W)
    if not U.is_transverse(W, tol):
        raise NotTransverse("subspaces are not transverse")
    return np.linalg.inv(np.hstack([U.basis, W.basis]))


def _split_orthonormal(U: Subspace, W: Subspace, tol: Tolerances):
    """Like :func:`_split` but in orthonormal bases, which keeps the
    inverse as well conditioned as the pair itself allows."""
    U._check_compatible(W)
    if not U.is_transverse(W, tol):
        raise NotTransverse("subspaces are not transverse")
    qu, qw = U.orthonormal_basis, W.orthonormal_basis
    return qu, qw, np.linalg.inv(np.hstack([qu, qw]))


def projection(U: Subspace, W: Subspace,
               tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """Projection onto ``U`` along ``W`` for the splitting R^{2n} = U + W."""
    Q = _split_orthonormal(U, W, tol)
    return Q[0] @ Q[2][:U.n]


def reflection(U: Subspace, W: Subspace,
               tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """The involution acting by +1 on ``U`` and -1 on ``W``."""
    qu, qw, inv = _split_orthonormal(U, W, tol)
    n = U.n
    return qu @ inv[:n] - qw @ inv[n:]


def as_graph(X: Subspace, U: Subspace, W: Subspace,
             tol: Tolerances = DEFAULT_TOLERANCES) -> np.ndarray:
    """Write ``X`` as the graph of a map U -> W.

    Returns the n x n matrix ``f`` taking coordinates in U's stored basis
    to coordinates in W's stored basis, so that
    ``X = span(U.basis + W.basis @ f)``.
    """
    inv = _split(U, W, tol)
    X._check_compatible(U)
    if not X.is_transverse(W, tol):
        raise NotTransverse("subspace is not transverse to the target "
                            "complement, it is not a graph")
    coords = inv @ X.basis
    n = U.n
    a, b = coords[:n], coords[n:]
    return np.linalg.solve(a.T, b.T).T


def graph_subspace(f, U: Subspace, W: Subspace) -> Subspace:
    """The subspace ``{u + f(u)}`` for ``f`` in stored-basis coordinates."""
    f = as_matrix(f, "graph map")
    return Subspace(U.basis + W.basis @ f)


def cross_ratio(U1: Subspace, U2: Subspace, U3: Subspace, U4: Subspace,
                tol: Tolerances = DEFAULT_TOLERANCES,
                method: str = "auto") -> CrossRatioClass:
    """Generalized cross-ratio ``[U1, U2; U3, U4]``.

    The endomorphism of ``U1`` is ``pi_{U1}^{U2} o pi_{U3}^{U4}`` restricted
    to ``U1``.  Only the pairs (U1, U2) and (U3, U4) must be transverse.

    Parameters
    ----------
    method : {"auto", "graph", "direct"}
        ``"graph"`` writes U2 and U4 as graphs over U1 + U3 and returns
        ``f^{-1} g``; it needs all four pairwise transversalities.
        ``"direct"`` composes the two projections.  ``"auto"`` uses the
        graph formula when it applies and falls back to the definition.
    """
    if method not in ("auto", "graph", "direct"):
        raise ValueError(f"unknown method {method!r}")
    if not U1.is_transverse(U2, tol):
        raise NotTransverse("U1 and U2 are not transverse")
    if not U3.is_transverse(U4, tol):
        raise NotTransverse("U3 and U4 are not transverse")

    if method != "direct":
        # U2 ~ U1 and U4 ~ U3 are already known; f invertible iff U2 ~ U1.
        if U1.is_transverse(U3, tol) and U2.is_transverse(U3, tol):
            # as_graph for U2 and U4 over U1 + U3, sharing one split
            inv = np.linalg.inv(np.hstack([U1.basis, U3.basis]))
            n = U1.n
            a2, b2 = np.vsplit(inv @ U2.basis, [n])
            a4, b4 = np.vsplit(inv @ U4.basis, [n])
            f = np.linalg.solve(a2.T, b2.T).T
            g = np.linalg.solve(a4.T, b4.T).T
            return CrossRatioClass.from_endo(np.linalg.solve(f, g), "graph")
        if method == "graph":
            raise NotTransverse("graph formula needs U1 and U2 transverse "
                                "to U3")

    image = projection(U1, U2, tol) @ (projection(U3, U4, tol) @ U1.basis)
    endo = np.linalg.lstsq(U1.basis, image, rcond=None)[0]
    return CrossRatioClass.from_endo(endo, "direct")


def scalar_deviation(W, d: int | None = None) -> float:
    """Relative distance of ``W`` from the scalar matrices.

    ``||W - (tr W / d) I||_F / ||W||_F``; zero exactly for nonzero
    multiples of the identity.
    """
    W = as_matrix(W)
    if d is None:
        d = W.shape[0]
    if W.shape != (d, d):
        raise DimensionMismatch(f"expected a {d}x{d} matrix, got {W.shape}")
    norm = np.linalg.norm(W)
    if norm == 0:
        raise ZeroMatrix("scalar deviation of the zero matrix")
    dev = W.copy()
    dev[np.diag_indices(d)] -= np.trace(W) / d
    return float(np.linalg.norm(dev) / norm)


def projective_order(W, max_k: int,
                     tol: float = DEFAULT_TOLERANCES.scalar_tol,
                     cond_max: float = DEFAULT_TOLERANCES.cond_max):
    """Smallest k <= max_k with W^k scalar (within ``tol``), else ``None``."""
    W = as_matrix(W)
    if W.shape[0] != W.shape[1]:
        raise DimensionMismatch("projective order needs a square matrix")
    if not np.linalg.cond(W) < cond_max:
        raise NotInvertible("matrix is singular or too ill-conditioned")
    W = W / np.linalg.norm(W)
    power = np.eye(W.shape[0])
    for k in range(1, max_k + 1):
        power = power @ W
        power /= np.linalg.norm(power)
        if scalar_deviation(power) < tol:
            return k
    return None


def finite_order_grid(N: int) -> list[float]:
    """Admissible cross-ratio eigenvalues for a product of order N.

    The values ``sin^2(k pi / (2N))`` for k = 0..N, ascending.
    """
    if int(N) != N or N < 2:
        raise ValueError(f"order must be an integer >= 2, got {N!r}")
    N = int(N)
    values = sorted(math.sin(k * math.pi / (2 * N)) ** 2
                    for k in range(N + 1))
    out = []
    for v in values:
        if not out or abs(v - out[-1]) > 1e-15:
            out.append(v)
    return out
