"""Numerical local-rigidity experiments.

A trial perturbs every eigenspace of a representation, projects the
result back onto the set of generator triples satisfying the triangle
relations projectively (by Levenberg-Marquardt in graph coordinates of
the six eigenspaces), and then looks for a matrix conjugating the base
representation to the projected one.  The reflections are always
rebuilt from eigenspace pairs, so involutivity holds exactly and only
the relations ``(R_i R_j)^{k_l} = scalar`` (plus anti-symplecticity for
symplectic reps) enter the residual.

Gauge freedom is left unfixed during the projection; the conjugacy
witness absorbs it afterwards.
"""
from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.optimize import least_squares

from .errors import DimensionMismatch, NoConvergence, ReflRigidError
from .linalg import DEFAULT_TOLERANCES, Subspace, Tolerances
from .symplectic import maslov
from .triangle import PAIRS, Rep

__all__ = [
    "ProbeParams", "TrialRecord", "ProbeReport", "ProjectionResult",
    "WitnessResult", "relation_residual", "relation_residual_vector",
    "perturb", "project_to_relation_variety", "conjugacy_witness",
    "find_conjugacy", "invariant_drift", "rigidity_probe",
]


@dataclass(frozen=True)
class ProbeParams:
    trials: int = 100
    magnitude: float = 1e-3
    seed: int = 0
    max_iter: int = 200
    relation_tol: float = 1e-12
    conj_tol: float = 1e-8

    def __post_init__(self):
        if int(self.trials) != self.trials or self.trials < 1:
            raise ValueError("trials must be a positive integer")
        if not self.magnitude > 0:
            raise ValueError("magnitude must be positive")
        if int(self.max_iter) != self.max_iter or self.max_iter < 1:
            raise ValueError("max_iter must be a positive integer")
        if not (self.relation_tol > 0 and self.conj_tol > 0):
            raise ValueError("tolerances must be positive")
        if int(self.seed) != self.seed or not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be a 64-bit unsigned integer")


# -- relation residual ---------------------------------------------------

def _reflection_arrays(plus: np.ndarray, minus: np.ndarray) -> np.ndarray:
    n = plus.shape[1]
    inv = np.linalg.inv(np.hstack([plus, minus]))
    return plus @ inv[:n] - minus @ inv[n:]


def _residual_from_generators(gens, ks, omega) -> np.ndarray:
    d = gens[0].shape[0]
    parts = []
    for l, (i, j) in PAIRS.items():
        w = gens[i] @ gens[j]
        w = np.linalg.matrix_power(w / np.linalg.norm(w), ks[l])
        w = w / np.linalg.norm(w)
        w[np.diag_indices(d)] -= np.trace(w) / d
        parts.append(w.ravel())
    if omega is not None:
        scale = np.linalg.norm(omega)
        for r in gens:
            parts.append(((r.T @ omega @ r + omega) / scale).ravel())
    return np.concatenate(parts)


def relation_residual_vector(rep: Rep) -> np.ndarray:
    """Residual entries whose squared sum is :func:`relation_residual`."""
    omega = rep.omega if rep.kind == "symplectic" else None
    return _residual_from_generators(rep.generators, rep.params.k, omega)


def relation_residual(rep: Rep) -> float:
    """Sum of squared scalar deviations of ``(R_i R_j)^{k_l}``.

    Symplectic reps add ``||R^T omega R + omega||^2 / ||omega||^2`` for
    each generator.  Zero exactly at a representation.
    """
    v = relation_residual_vector(rep)
    return float(v @ v)


# -- perturbation -------------------------------------------------------

def perturb(rep: Rep, magnitude: float, seed=None,
            tol: Tolerances = DEFAULT_TOLERANCES) -> Rep:
    """Move each eigenspace to a nearby graph over its own pair.

    ``U+ -> Graph(Z+)`` over ``U+ + U-`` and ``U- -> Graph(Z-)`` over
    ``U- + U+``, with ``Z`` Gaussian rescaled to Frobenius norm
    ``magnitude``.  Graph coordinates are taken in orthonormal bases of
    the two subspaces, so when U- is orthogonal to U+ the principal
    angles satisfy ``||tan(theta)||_F = magnitude``.  ``seed`` is
    anything accepted by ``numpy.random.default_rng``.
    """
    if magnitude == 0:
        return rep
    if magnitude < 0:
        raise ValueError("magnitude must be nonnegative")
    rng = np.random.default_rng(seed)
    n = rep.n
    new = []
    for plus, minus in rep.eigenspaces:
        moved = []
        for a, b in ((plus, minus), (minus, plus)):
            z = rng.standard_normal((n, n))
            z *= magnitude / np.linalg.norm(z)
            moved.append(Subspace(a.orthonormal_basis
                                  + b.orthonormal_basis @ z, tol))
        new.append(tuple(moved))
    return rep.with_eigenspaces(new, tol)


# -- projection ----------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ProjectionResult:
    rep: Rep
    residual: float
    nfev: int


def _graph_eigenspaces(rep: Rep, x: np.ndarray):
    n = rep.n
    blocks = x.reshape(6, n, n)
    out = []
    for idx, (plus, minus) in enumerate(rep.eigenspaces):
        P, M = plus.basis, minus.basis
        out.append((P + M @ blocks[2 * idx], M + P @ blocks[2 * idx + 1]))
    return out


def project_to_relation_variety(rep: Rep, params: ProbeParams = ProbeParams(),
                                tol: Tolerances = DEFAULT_TOLERANCES
                                ) -> ProjectionResult:
    """Levenberg-Marquardt projection onto the relation variety.

    The unknowns are the 6 n^2 graph coordinates of the six eigenspaces
    relative to their current position.  Succeeds when the final
    :func:`relation_residual` is below ``params.relation_tol``;
    otherwise raises :class:`NoConvergence` carrying the best iterate.
    """
    start = relation_residual(rep)
    if not np.isfinite(start):
        raise ValueError("relation residual of the input is not finite")
    if start < params.relation_tol:
        return ProjectionResult(rep, start, 1)

    omega = rep.omega if rep.kind == "symplectic" else None
    ks = rep.params.k

    def fun(x):
        try:
            gens = [_reflection_arrays(p, m)
                    for p, m in _graph_eigenspaces(rep, x)]
        except np.linalg.LinAlgError:
            return np.full(fun.size, 1e3)
        r = _residual_from_generators(gens, ks, omega)
        if not np.all(np.isfinite(r)):
            return np.full(r.size, 1e3)
        return r

    fun.size = relation_residual_vector(rep).size
    x0 = np.zeros(6 * rep.n ** 2)
    sol = least_squares(fun, x0, method="lm", xtol=1e-15, ftol=1e-15,
                        gtol=1e-15,
                        max_nfev=params.max_iter * (x0.size + 1))
    residual = float(sol.fun @ sol.fun)
    try:
        new_rep = rep.with_eigenspaces(
            [(Subspace(p, tol), Subspace(m, tol))
             for p, m in _graph_eigenspaces(rep, sol.x)], tol)
    except ReflRigidError:
        new_rep = None
    if new_rep is None or not residual < params.relation_tol:
        raise NoConvergence(f"projection stopped at residual {residual:.3e}",
                            rep=new_rep, residual=residual, nfev=sol.nfev)
    return ProjectionResult(new_rep, relation_residual(new_rep), sol.nfev)


# -- conjugacy -----------------------------------------------------------

@dataclass(frozen=True, eq=False)
class WitnessResult:
    """Outcome of a conjugacy search; ``matrix`` is None when none found."""

    matrix: np.ndarray | None
    cond: float
    residual: float
    null_dim: int


def _intertwiner_space(a: Rep, b: Rep, conj_tol: float):
    """Basis of {X : X a.R_i = b.R_i X}, as a list of 2n x 2n matrices.

    X intertwines the first generators iff it maps the eigenspaces of
    a.R_1 to those of b.R_1, i.e. X = Eb diag(P, Q) Ea^-1; the remaining
    two generators give linear equations in (P, Q).
    """
    n, d = a.n, a.ambient_dim
    Ea = np.hstack([s.basis for s in a.eigenspaces[0]])
    Eb = np.hstack([s.basis for s in b.eigenspaces[0]])
    Ea_inv = np.linalg.inv(Ea)
    xmap = np.hstack([np.kron(Eb[:, :n], Ea_inv[:n].T),
                      np.kron(Eb[:, n:], Ea_inv[n:].T)])
    eye = np.eye(d)
    rows = []
    for i in (1, 2):
        ra, rb = a.generators[i], b.generators[i]
        rows.append((np.kron(eye, ra.T) - np.kron(rb, eye)) @ xmap)
    K = np.vstack(rows)
    # Column scaling keeps the rank decision independent of basis scale.
    colnorm = np.linalg.norm(xmap, axis=0)
    _, s, vt = np.linalg.svd(K / colnorm, full_matrices=True)
    s_full = np.concatenate([s, np.zeros(vt.shape[0] - s.size)])
    null = vt[s_full <= conj_tol * max(s_full[0], 1e-300)]
    return [(xmap @ (v / colnorm)).reshape(d, d) for v in null]


def _intertwining_residual(X, a: Rep, b: Rep) -> float:
    nx = np.linalg.norm(X)
    return max(float(np.linalg.norm(X @ ra - rb @ X) / nx)
               for ra, rb in zip(a.generators, b.generators))


def _maslov_signature(rep: Rep, tol: Tolerances):
    plus = [pair[0] for pair in rep.eigenspaces]
    return maslov(plus[0], plus[1], plus[2], rep.omega, tol).signature


def _similitude_refine(basis, t0, a: Rep, b: Rep, conj_tol: float):
    """Solve X^T omega_b X = sign * omega_a for X in span(basis)."""
    wa, wb = a.omega, b.omega
    scale = np.linalg.norm(wa)
    stack = np.stack(basis)
    best = None
    for sign in (1.0, -1.0):
        X0 = np.tensordot(t0, stack, axes=1)
        c = np.vdot(X0.T @ wb @ X0, wa) / scale ** 2
        if c * sign <= 0:
            continue
        t_start = t0 / np.sqrt(abs(c))

        def fun(t):
            X = np.tensordot(t, stack, axes=1)
            return ((X.T @ wb @ X - sign * wa) / scale).ravel()

        sol = least_squares(fun, t_start, method="lm", xtol=1e-15,
                            ftol=1e-15, gtol=1e-15, max_nfev=2000)
        X = np.tensordot(sol.x, stack, axes=1)
        defect = float(np.linalg.norm(fun(sol.x)))
        if best is None or defect < best[1]:
            best = (X, defect)
        if defect < conj_tol:
            break
    return best


def find_conjugacy(a: Rep, b: Rep, tol: Tolerances = DEFAULT_TOLERANCES,
                   attempts: int = 8) -> WitnessResult:
    """Search for X with X a.R_i X^-1 = b.R_i, reporting diagnostics.

    For symplectic reps X must also be a symplectic similitude
    (``X^T omega_b X = +-omega_a``); a mismatch of Maslov indices of the
    generator eigenspace triples, up to swap, rules this out at once.
    """
    if a.ambient_dim != b.ambient_dim:
        raise DimensionMismatch("representations live in different "
                                "dimensions")
    if a.kind != b.kind:
        raise DimensionMismatch(f"cannot compare kinds {a.kind!r} and "
                                f"{b.kind!r}")
    symplectic = a.kind == "symplectic"
    if symplectic:
        sa, sb = _maslov_signature(a, tol), _maslov_signature(b, tol)
        if sb not in (sa, sa[::-1]):
            return WitnessResult(None, float("inf"), float("inf"), 0)

    basis = _intertwiner_space(a, b, tol.conj_tol)
    if not basis:
        return WitnessResult(None, float("inf"), float("inf"), 0)
    stack = np.stack(basis)
    d = a.ambient_dim
    flat = stack.reshape(len(basis), -1).T
    starts = [np.linalg.lstsq(flat, np.eye(d).ravel(), rcond=None)[0]]
    rng = np.random.default_rng(0)
    starts += [rng.standard_normal(len(basis)) for _ in range(attempts)]

    best = WitnessResult(None, float("inf"), float("inf"), len(basis))
    for t in starts:
        if not np.any(t):
            continue
        if symplectic:
            refined = _similitude_refine(basis, t, a, b, tol.conj_tol)
            if refined is None or refined[1] >= tol.conj_tol:
                continue
            X = refined[0]
        else:
            X = np.tensordot(t, stack, axes=1)
        X = X * (np.sqrt(d) / np.linalg.norm(X))
        cond = float(np.linalg.cond(X))
        res = _intertwining_residual(X, a, b)
        if cond < tol.cond_max and res < tol.conj_tol:
            return WitnessResult(X, cond, res, len(basis))
        if cond < best.cond:
            best = WitnessResult(None, cond, res, len(basis))
    return best


def conjugacy_witness(a: Rep, b: Rep,
                      tol: Tolerances = DEFAULT_TOLERANCES):
    """A matrix X conjugating ``a`` to ``b`` generator-wise, or ``None``.

    The witness is normalized to Frobenius norm sqrt(2n), so that
    comparing a rep with itself returns +-I.
    """
    return find_conjugacy(a, b, tol).matrix


def invariant_drift(base: Rep, other: Rep,
                    tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    """Largest coefficient change among the three cross-ratio charpolys."""
    drift = 0.0
    for c0, c1 in zip(base.cross_ratios(tol), other.cross_ratios(tol)):
        drift = max(drift, float(np.max(np.abs(c0.charpoly - c1.charpoly))))
    return drift


# -- experiment ----------------------------------------------------------

@dataclass(frozen=True)
class TrialRecord:
    seed_offset: int
    converged: bool
    residual: float
    conjugate: bool
    conjugacy_residual: float | None = None
    witness_cond: float | None = None
    invariant_drift: float | None = None
    nfev: int = 0


@dataclass(frozen=True, eq=False)
class ProbeReport:
    rep_info: dict
    params: ProbeParams
    trials: tuple = field(default_factory=tuple)

    @property
    def trials_run(self) -> int:
        return len(self.trials)

    @property
    def converged(self) -> int:
        return sum(t.converged for t in self.trials)

    @property
    def conjugate_to_base(self) -> int:
        return sum(t.conjugate for t in self.trials)

    @property
    def max_invariant_drift(self):
        values = [t.invariant_drift for t in self.trials
                  if t.invariant_drift is not None]
        return max(values) if values else None

    def summary(self) -> dict:
        return {
            "trials_run": self.trials_run,
            "converged": self.converged,
            "conjugate_to_base": self.conjugate_to_base,
            "max_invariant_drift": self.max_invariant_drift,
        }

    def to_dict(self) -> dict:
        return {
            "rep": dict(self.rep_info),
            "params": asdict(self.params),
            "trials": [asdict(t) for t in self.trials],
            "summary": self.summary(),
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


def _rep_info(rep: Rep) -> dict:
    return {
        "kind": rep.kind,
        "k": list(rep.params.k),
        "n": rep.n,
        "signature": None if rep.signature is None else list(rep.signature),
    }


def _run_trial(rep: Rep, params: ProbeParams, tol: Tolerances,
               index: int, seed_seq) -> TrialRecord:
    rng = np.random.default_rng(seed_seq)
    try:
        moved = perturb(rep, params.magnitude, rng, tol)
        result = project_to_relation_variety(moved, params, tol)
    except NoConvergence as exc:
        return TrialRecord(index, False, float(exc.residual), False,
                           nfev=int(exc.nfev))
    except ReflRigidError:
        return TrialRecord(index, False, float("inf"), False)
    try:
        witness = find_conjugacy(rep, result.rep, tol)
    except (ReflRigidError, np.linalg.LinAlgError):
        witness = WitnessResult(None, float("inf"), float("inf"), 0)
    try:
        drift = invariant_drift(rep, result.rep, tol)
    except (ReflRigidError, np.linalg.LinAlgError):
        # cross-ratios are undefined when eigenspaces fail transversality
        drift = None
    return TrialRecord(
        seed_offset=index,
        converged=True,
        residual=result.residual,
        conjugate=witness.matrix is not None,
        conjugacy_residual=(witness.residual
                            if np.isfinite(witness.residual) else None),
        witness_cond=witness.cond if np.isfinite(witness.cond) else None,
        invariant_drift=drift,
        nfev=int(result.nfev),
    )


def rigidity_probe(rep: Rep, params: ProbeParams = ProbeParams(),
                   tol: Tolerances | None = None,
                   workers: int = 1) -> ProbeReport:
    """Run ``params.trials`` perturb-project-conjugate trials.

    Trial t draws from the t-th child of ``SeedSequence(params.seed)``,
    so the report depends only on (rep, params) and not on ``workers``.
    ``params.relation_tol`` and ``params.conj_tol`` override the
    corresponding entries of ``tol``.
    """
    tol = (tol or DEFAULT_TOLERANCES).replace(
        relation_tol=params.relation_tol, conj_tol=params.conj_tol)
    children = np.random.SeedSequence(params.seed).spawn(params.trials)
    jobs = list(enumerate(children))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(
                lambda job: _run_trial(rep, params, tol, *job), jobs))
    else:
        records = [_run_trial(rep, params, tol, *job) for job in jobs]
    records.sort(key=lambda r: r.seed_offset)
    return ProbeReport(_rep_info(rep), params, tuple(records))
