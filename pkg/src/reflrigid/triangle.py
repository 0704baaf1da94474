"""Hyperbolic triangle groups and their geometric representation.

Index convention: the product ``R_i R_j`` of two generators has
projective order ``k_l`` where ``{i, j, l} = {1, 2, 3}``, and the
cross-ratio ``C_l`` is built from the eigenspaces of ``R_i`` and ``R_j``::

    C1 = [U2+, U2-; U3+, U3-]    R2 R3 has order k1
    C2 = [U1+, U1-; U3+, U3-]    R1 R3 has order k2
    C3 = [U1+, U1-; U2+, U2-]    R1 R2 has order k3

For the geometric representation ``C_l = sin^2(pi / (2 k_l))``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (ConstructionFailed, DegenerateCoefficients,
                     NonRealRoots, NotHyperbolic)
from .linalg import (DEFAULT_TOLERANCES, Subspace, Tolerances, cross_ratio,
                     reflection)

__all__ = [
    "TriangleParams", "Rep", "PAIRS", "KINDS", "gram_matrix", "q_form",
    "phi", "quadratic_coefficients", "quadratic_roots",
    "geometric_representation", "eigenline_slopes", "cross_ratio_values",
    "has_projective_order",
]

KINDS = ("diagonal", "symplectic", "sympower")

# l -> (i, j), zero-based: R_i R_j has order k_l and defines C_l.
PAIRS = {0: (1, 2), 1: (0, 2), 2: (0, 1)}


@dataclass(frozen=True)
class TriangleParams:
    """Orders (k1, k2, k3) of a hyperbolic triangle group."""

    k1: int
    k2: int
    k3: int

    def __post_init__(self):
        for k in self.k:
            if int(k) != k or k < 2:
                raise NotHyperbolic(f"orders must be integers >= 2, got "
                                    f"{self.k}")
        k1, k2, k3 = self.k
        # 1/k1 + 1/k2 + 1/k3 < 1, cleared of denominators.
        if k2 * k3 + k1 * k3 + k1 * k2 >= k1 * k2 * k3:
            raise NotHyperbolic(f"triangle group {self.k} is not hyperbolic")

    @classmethod
    def of(cls, k) -> "TriangleParams":
        if isinstance(k, TriangleParams):
            return k
        k1, k2, k3 = (int(v) for v in k)
        return cls(k1, k2, k3)

    @property
    def k(self) -> tuple[int, int, int]:
        return (self.k1, self.k2, self.k3)

    @property
    def lambdas(self) -> np.ndarray:
        """Cross-ratio targets sin^2(pi / (2 k_l))."""
        return np.sin(np.pi / (2 * np.array(self.k, dtype=float))) ** 2


@dataclass(frozen=True, eq=False)
class Rep:
    """Three reflections in pairs of half-dimensional subspaces.

    ``eigenspaces[i] = (U_i^+, U_i^-)``; ``generators[i]`` is the
    reflection in that pair.  Symplectic reps also carry the invariant
    form ``omega`` and the signature (p, q) used to build them.
    """

    kind: str
    params: TriangleParams
    generators: tuple
    eigenspaces: tuple
    signature: tuple | None = None
    omega: np.ndarray | None = None
    _cache: dict = field(default_factory=dict, init=False, repr=False,
                         compare=False)

    @classmethod
    def from_eigenspaces(cls, kind, params, eigenspaces, signature=None,
                         omega=None, tol: Tolerances = DEFAULT_TOLERANCES):
        gens = []
        for plus, minus in eigenspaces:
            r = reflection(plus, minus, tol)
            r.setflags(write=False)
            gens.append(r)
        return cls(kind, TriangleParams.of(params), tuple(gens),
                   tuple(tuple(p) for p in eigenspaces), signature, omega)

    @property
    def ambient_dim(self) -> int:
        return self.generators[0].shape[0]

    @property
    def n(self) -> int:
        return self.ambient_dim // 2

    @property
    def group(self) -> str:
        return "PSp+-" if self.kind == "symplectic" else "PGL"

    def with_eigenspaces(self, eigenspaces,
                         tol: Tolerances = DEFAULT_TOLERANCES) -> "Rep":
        return Rep.from_eigenspaces(self.kind, self.params, eigenspaces,
                                    self.signature, self.omega, tol)

    def products(self):
        """``[(l, R_i R_j)]`` for l = 0, 1, 2 with R_i R_j of order k_l."""
        return [(l, self.generators[i] @ self.generators[j])
                for l, (i, j) in PAIRS.items()]

    def cross_ratios(self, tol: Tolerances = DEFAULT_TOLERANCES):
        """The three cross-ratios (C1, C2, C3) of the eigenspace 6-tuple."""
        key = ("cross_ratios", tol)
        if key in self._cache:
            return self._cache[key]
        out = []
        for l in range(3):
            i, j = PAIRS[l]
            (pi, mi), (pj, mj) = self.eigenspaces[i], self.eigenspaces[j]
            out.append(cross_ratio(pi, mi, pj, mj, tol))
        self._cache[key] = tuple(out)
        return self._cache[key]

    def check(self, tol: Tolerances = DEFAULT_TOLERANCES):
        """Raise :class:`ConstructionFailed` unless every invariant holds."""
        eye = np.eye(self.ambient_dim)
        for i, r in enumerate(self.generators):
            if np.linalg.norm(r @ r - eye) > 1e-10 * max(1.0, np.linalg.norm(r)) ** 2:
                raise ConstructionFailed(f"generator {i + 1} is not an "
                                         "involution")
            # R = reflection(U+, U-) iff R fixes U+ and negates U-; a
            # common vector would satisfy v = -v, so this also implies
            # transversality.
            plus, minus = self.eigenspaces[i]
            scale = 1e-10 * max(1.0, np.linalg.norm(r))
            P, M = plus.orthonormal_basis, minus.orthonormal_basis
            if (np.linalg.norm(r @ P - P) > scale
                    or np.linalg.norm(r @ M + M) > scale):
                raise ConstructionFailed(f"generator {i + 1} is not the "
                                         "reflection in its eigenspaces")
        for l, w in self.products():
            if not has_projective_order(w, self.params.k[l], tol.scalar_tol):
                i, j = PAIRS[l]
                raise ConstructionFailed(
                    f"R{i + 1}R{j + 1} does not have projective order "
                    f"{self.params.k[l]}")
        return self


def _divisors(k: int):
    return [d for d in range(1, k) if k % d == 0]


def has_projective_order(w, k: int, tol: float) -> bool:
    """True iff the smallest scalar power of ``w`` is exactly the k-th.

    Equivalent to ``projective_order(w, max_k) == k`` for any
    ``max_k >= k``: if w^k is scalar the order divides k, so only the
    proper divisors need to be excluded.
    """
    w = np.asarray(w, dtype=float)
    d = w.shape[0]
    checks = set(_divisors(k)) | {k}
    p = np.eye(d)
    w = w / np.linalg.norm(w)
    for e in range(1, k + 1):
        p = p @ w
        p /= np.linalg.norm(p)
        if e in checks:
            dev = p - (np.trace(p) / d) * np.eye(d)
            if (np.linalg.norm(dev) < tol) != (e == k):
                return False
    return True


def gram_matrix(k) -> np.ndarray:
    """Gram matrix with unit diagonal and off-diagonal -cos(pi/k_i)."""
    k = TriangleParams.of(k)
    x, y, z = np.cos(np.pi / np.array(k.k, dtype=float))
    return np.array([[1.0, -x, -y],
                     [-x, 1.0, -z],
                     [-y, -z, 1.0]])


def q_form(x, y, z):
    """Determinant of the Gram matrix as a polynomial: 1-x^2-y^2-z^2-2xyz."""
    return 1 - x * x - y * y - z * z - 2 * x * y * z


def phi(l1, l2, l3):
    """Discriminant of the quadratic satisfied by N^{-1} M1."""
    return (1 - 2 * (l1 + l2 + l3) + 2 * (l1 * l2 + l2 * l3 + l1 * l3)
            + l1 * l1 + l2 * l2 + l3 * l3 - 4 * l1 * l2 * l3)


def quadratic_coefficients(l1, l2, l3):
    """(a, b, c) of a x^2 + b x + c with a = l3 (1 - l2), b = l1+l2-l3-1,
    c = 1 - l1."""
    return l3 * (1 - l2), l1 + l2 - l3 - 1, 1 - l1


def quadratic_roots(l1, l2, l3):
    """Roots (r_plus, r_minus) of the quadratic, r_plus on the +sqrt branch.

    Raises :class:`DegenerateCoefficients` when the leading coefficient
    vanishes and :class:`NonRealRoots` unless the discriminant is positive.
    """
    a, b, _ = quadratic_coefficients(l1, l2, l3)
    if a == 0:
        raise DegenerateCoefficients("l3 (1 - l2) = 0, the quadratic "
                                     "degenerates")
    disc = phi(l1, l2, l3)
    if not disc > 0:
        raise NonRealRoots(f"discriminant phi = {disc!r} is not positive")
    s = math.sqrt(disc)
    return (-b + s) / (2 * a), (-b - s) / (2 * a)


def geometric_representation(k, tol: Tolerances = DEFAULT_TOLERANCES) -> Rep:
    """Geometric representation of a hyperbolic triangle group in PGL(2, R).

    Eigenlines are normalized as U1+ = <e1>, U2+ = <e2>, U3+ = Graph(1)
    and U_i^- = Graph(m_i), with m1 the +sqrt(phi) root of the quadratic,
    m2 = l3 m1 and m3 = ((l1 - 1) + l3 m1) / l1.
    """
    k = TriangleParams.of(k)
    m1, m2, m3 = eigenline_slopes(k)

    def line(slope):
        return Subspace([1.0, slope])

    eig = ((Subspace([1.0, 0.0]), line(m1)),
           (Subspace([0.0, 1.0]), line(m2)),
           (line(1.0), line(m3)))
    rep = Rep.from_eigenspaces("diagonal", k, eig, tol=tol)
    rep.check(tol)
    for l, c in enumerate(rep.cross_ratios(tol)):
        if abs(c.endo[0, 0] - k.lambdas[l]) > 1e-10:
            raise ConstructionFailed(f"cross-ratio C{l + 1} = {c.endo[0, 0]}"
                                     f" differs from {k.lambdas[l]}")
    return rep


def eigenline_slopes(k) -> tuple[float, float, float]:
    """(m1, m2, m3) of the normalized geometric representation."""
    k = TriangleParams.of(k)
    l1, l2, l3 = k.lambdas
    m1, _ = quadratic_roots(l1, l2, l3)
    # l1 = sin^2(pi / 2 k1) > 0 for every k1 >= 2.
    assert l1 > 0
    return m1, l3 * m1, ((l1 - 1) + l3 * m1) / l1


def cross_ratio_values(rep: Rep, tol: Tolerances = DEFAULT_TOLERANCES):
    """Scalar cross-ratio values of a rep whose cross-ratios are scalar."""
    vals = []
    for c in rep.cross_ratios(tol):
        v = c.scalar_value()
        if v is None:
            raise ValueError("cross-ratio is not a scalar matrix")
        vals.append(v)
    return vals

