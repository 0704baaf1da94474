"""Command-line front end; every subcommand prints one JSON document.

Exit codes: 0 success, 1 domain error (``{"error": name, "detail": ...}``
on stdout), 2 usage error (argparse message on stderr).
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .configurations import (config_cross_ratios, extract_and_normalize,
                             loads_configs, solve_scalar_config)
from .embed import build_rep, expected_dimension_diagonal
from .errors import ReflRigidError
from .linalg import DEFAULT_TOLERANCES, Tolerances, finite_order_grid
from .probe import ProbeParams, relation_residual, rigidity_probe
from .symplectic import maslov
from .triangle import (PAIRS, TriangleParams, eigenline_slopes,
                       geometric_representation, has_projective_order, phi)

__all__ = ["run", "main"]


class _UsageError(Exception):
    pass


def _int_triple(text: str):
    try:
        vals = [int(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected k1,k2,k3 integers, got "
                                         f"{text!r}")
    if len(vals) != 3:
        raise argparse.ArgumentTypeError("expected exactly three integers")
    return tuple(vals)


def _float_triple(text: str):
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected three numbers, got "
                                         f"{text!r}")
    if len(vals) != 3:
        raise argparse.ArgumentTypeError("expected exactly three numbers")
    return tuple(vals)


def _signature(text: str):
    try:
        p, q = (int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected p,q, got {text!r}")
    if p < 0 or q < 0:
        raise argparse.ArgumentTypeError("signature entries must be >= 0")
    return (p, q)


def _positive_int(text: str):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError("expected a positive integer")
    return v


def _positive_float(text: str):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}")
    if not v > 0:
        raise argparse.ArgumentTypeError("expected a positive number")
    return v


def _seed(text: str):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return v


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol-file", metavar="PATH",
                        help="JSON object overriding tolerance defaults")
    common.add_argument("--out", metavar="PATH",
                        help="write the JSON document here instead of stdout")

    parser = argparse.ArgumentParser(
        prog="reflrigid",
        description="Cross-ratios, configuration spaces and rigidity probes "
                    "for reflection representations of triangle groups.")
    sub = parser.add_subparsers(dest="command", required=True)

    def rep_flags(p, need_n=True):
        p.add_argument("--k", type=_int_triple, required=True,
                       metavar="K1,K2,K3")
        p.add_argument("--kind", choices=("diagonal", "symplectic",
                                          "sympower"), default="diagonal")
        p.add_argument("--n", type=_positive_int, required=need_n)
        p.add_argument("--signature", type=_signature, metavar="P,Q")

    p = sub.add_parser("geom", parents=[common],
                       help="geometric representation in PGL(2, R)")
    p.add_argument("--k", type=_int_triple, required=True, metavar="K1,K2,K3")

    p = sub.add_parser("embed", parents=[common],
                       help="embedded representation in dimension 2n")
    rep_flags(p)

    p = sub.add_parser("invariants", parents=[common],
                       help="cross-ratios of a configuration file or a rep")
    p.add_argument("--config", metavar="PATH",
                   help="configuration JSON (as written by conf6)")
    p.add_argument("--k", type=_int_triple, metavar="K1,K2,K3")
    p.add_argument("--kind", choices=("diagonal", "symplectic", "sympower"),
                   default="diagonal")
    p.add_argument("--n", type=_positive_int)
    p.add_argument("--signature", type=_signature, metavar="P,Q")

    p = sub.add_parser("conf6", parents=[common],
                       help="enumerate configurations with scalar "
                            "cross-ratios")
    p.add_argument("--lambda", dest="lam", type=_float_triple,
                   metavar="L1,L2,L3")
    p.add_argument("--k", type=_int_triple, metavar="K1,K2,K3",
                   help="use lambda_i = sin^2(pi / 2 k_i)")
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--symmetric", action="store_true",
                   help="Lagrangian (symmetric) variant")
    p.add_argument("--signature", type=_signature, metavar="P,Q",
                   help="signature of N in the symmetric variant")

    p = sub.add_parser("maslov", parents=[common],
                       help="Maslov index of the generator eigenspaces of a "
                            "symplectic rep")
    p.add_argument("--k", type=_int_triple, required=True, metavar="K1,K2,K3")
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--signature", type=_signature, metavar="P,Q")

    p = sub.add_parser("probe", parents=[common],
                       help="perturb-project-conjugate rigidity experiment")
    rep_flags(p)
    p.add_argument("--trials", type=_positive_int, default=100)
    p.add_argument("--magnitude", type=_positive_float, default=1e-3)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--max-iter", type=_positive_int, default=200)
    p.add_argument("--workers", type=_positive_int, default=1)

    p = sub.add_parser("expected-dim", parents=[common],
                       help="expected dimension of the diagonal component")
    p.add_argument("--n", type=_positive_int, required=True)
    return parser


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if np.isfinite(v) else None
    return obj


def _cross_ratio_entry(c):
    ev = np.linalg.eigvals(c.endo)
    return {
        "charpoly": c.charpoly,
        "eigenvalues_real": np.sort(ev.real),
        "eigenvalues_imag_max": float(np.max(np.abs(ev.imag))),
        "scalar": c.scalar_value(),
    }


def _order_report(rep, tol):
    out = []
    for l, w in rep.products():
        i, j = PAIRS[l]
        k = rep.params.k[l]
        out.append({"product": f"R{i + 1}R{j + 1}", "expected_order": k,
                    "verified": has_projective_order(w, k, tol.scalar_tol)})
    return out


def _cmd_geom(args, tol):
    k = TriangleParams.of(args.k)
    rep = geometric_representation(k, tol)
    crs = rep.cross_ratios(tol)
    lam = k.lambdas
    return {
        "cross_ratios": [float(c.endo[0, 0]) for c in crs],
        "expected_cross_ratios": lam,
        "phi": phi(*lam),
        "eigenline_slopes": list(eigenline_slopes(k)),
        "generators": rep.generators,
        "orders": _order_report(rep, tol),
    }


def _build(args, tol):
    return build_rep(args.kind, args.k, args.n, args.signature, tol)


def _cmd_embed(args, tol):
    rep = _build(args, tol)
    return {
        "kind": rep.kind,
        "ambient_dim": rep.ambient_dim,
        "signature": rep.signature,
        "generators": rep.generators,
        "cross_ratios": [_cross_ratio_entry(c) for c in rep.cross_ratios(tol)],
        "orders": _order_report(rep, tol),
        "relation_residual": relation_residual(rep),
    }


def _load_config_file(path):
    with open(path) as fh:
        data = json.load(fh)
    if isinstance(data, dict) and "results" in data:
        data = data["results"]
    return loads_configs(json.dumps(data))


def _cmd_invariants(args, tol):
    if args.config:
        if args.k is not None:
            raise _UsageError("give either --config or --k, not both")
        try:
            configs = _load_config_file(args.config)
        except (OSError, ValueError, KeyError, TypeError) as exc:
            if isinstance(exc, ReflRigidError):
                raise
            raise _UsageError(f"cannot read configuration file: {exc}")
        out = []
        for c in configs:
            crs = config_cross_ratios(c, tol)
            entry = {"n": c.n, "symmetric": c.symmetric,
                     "cross_ratios": [_cross_ratio_entry(x) for x in crs],
                     "lambda": [x.scalar_value() for x in crs]}
            if c.lambdas is not None:
                entry["target_lambda"] = list(c.lambdas)
            out.append(entry)
        return {"configurations": out}
    if args.k is None or args.n is None:
        raise _UsageError("invariants needs --config or both --k and --n")
    rep = _build(args, tol)
    config = extract_and_normalize(rep, tol=tol)
    crs = rep.cross_ratios(tol)
    return {
        "cross_ratios": [_cross_ratio_entry(c) for c in crs],
        "lambda": [c.scalar_value() for c in crs],
        "finite_order_grids": [finite_order_grid(k) for k in rep.params.k],
        "normalized_config": config.to_dict(),
    }


def _cmd_conf6(args, tol):
    if (args.lam is None) == (args.k is None):
        raise _UsageError("conf6 needs exactly one of --lambda and --k")
    if args.signature is not None and not args.symmetric:
        raise _UsageError("--signature requires --symmetric")
    lam = args.lam if args.lam is not None else \
        tuple(TriangleParams.of(args.k).lambdas)
    configs = solve_scalar_config(*lam, args.n, symmetric=args.symmetric,
                                  signature=args.signature, tol=tol)
    return {
        "lambda": lam,
        "phi": phi(*lam),
        "count": len(configs),
        "configurations": [c.to_dict() for c in configs],
    }


def _cmd_maslov(args, tol):
    rep = build_rep("symplectic", args.k, args.n, args.signature, tol)
    plus = [pair[0] for pair in rep.eigenspaces]
    data = maslov(plus[0], plus[1], plus[2], rep.omega, tol)
    return {
        "rep_signature": rep.signature,
        "maslov_form": data.form,
        "maslov_index": data.signature,
    }


def _cmd_probe(args, tol):
    rep = _build(args, tol)
    params = ProbeParams(trials=args.trials, magnitude=args.magnitude,
                         seed=args.seed, max_iter=args.max_iter,
                         relation_tol=tol.relation_tol, conj_tol=tol.conj_tol)
    report = rigidity_probe(rep, params, tol, workers=args.workers)
    return report.to_dict()


def _cmd_expected_dim(args, tol):
    return {"expected_dimension": expected_dimension_diagonal(args.n)}


_COMMANDS = {
    "geom": _cmd_geom,
    "embed": _cmd_embed,
    "invariants": _cmd_invariants,
    "conf6": _cmd_conf6,
    "maslov": _cmd_maslov,
    "probe": _cmd_probe,
    "expected-dim": _cmd_expected_dim,
}


def _inputs(args) -> dict:
    skip = {"command", "out", "tol_file"}
    rename = {"lam": "lambda"}
    return {rename.get(k, k): v for k, v in vars(args).items()
            if k not in skip}


def _emit(doc, out_path):
    text = json.dumps(_jsonable(doc), indent=2)
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def run(argv=None) -> int:
    """Parse ``argv``, run one subcommand, return the exit code."""
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    try:
        tol = Tolerances.load(args.tol_file) if args.tol_file \
            else DEFAULT_TOLERANCES
    except (OSError, ValueError) as exc:
        parser.print_usage(sys.stderr)
        print(f"reflrigid: error: bad --tol-file: {exc}", file=sys.stderr)
        return 2

    try:
        results = _COMMANDS[args.command](args, tol)
    except _UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"reflrigid {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except ReflRigidError as exc:
        _emit({"error": type(exc).__name__, "detail": str(exc)}, args.out)
        return 1

    _emit({"command": args.command, "inputs": _inputs(args),
           "results": results, "tolerances": tol.to_dict()}, args.out)
    return 0


def main():
    sys.exit(run())
