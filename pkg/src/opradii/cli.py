"""Command-line front end.

Exit codes: 0 ok, 1 usage or input error, 2 inconclusive radius,
3 a hard inequality check failed.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from . import __version__
from .complexmat import load_matrix, op_norm
from .fock import (
    check_popescu_bounds, eval_nc_poly, joint_numerical_radius, nc_sup_norm, ncpoly_from_json,
)
from .functions import parse_family, scaled, sup_norm_disc
from .mobius import drury_constant, homothety_alpha, k_from_ktilde, ktilde_from_k
from .radii import RhoParams, w_rho
from .spectral_sets import check_named_inequalities, check_positivity_lemmas, verify_main_theorem

EXIT_OK, EXIT_USAGE, EXIT_INCONCLUSIVE, EXIT_VIOLATION = 0, 1, 2, 3


@dataclass
class RunConfig:
    seed: int = 0
    tol: float = 1e-6
    zeta_samples: int = 256
    fock_m: int = 6
    family_spec: str = "mobius+blaschke:deg=4"
    output_path: Optional[str] = None

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.zeta_samples < 16:
            raise ValueError("zeta_samples must be >= 16")


def _sig12(x):
    return float(f"{x:.12g}")


def _emit(report: dict, path: Optional[str] = None) -> None:
    text = json.dumps(report, indent=2, sort_keys=True, default=_json_default) + "\n"
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json_default(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    raise TypeError(f"not JSON serialisable: {type(obj).__name__}")


def _seed(arg_seed: int) -> int:
    env = os.environ.get("RADII_SEED")
    return int(env) if env is not None else arg_seed


def cmd_radius(args) -> int:
    T = load_matrix(args.file)
    config = {"rho": args.rho, "tol": args.tol, "zeta_samples": args.zeta_samples}
    if args.norm:
        v = op_norm(T)
        report = {"value": v, "lower": v, "upper": v, "method": "norm", "converged": True}
    else:
        rep = w_rho(T, RhoParams(args.rho, args.zeta_samples), tol=args.tol)
        report = rep.to_dict()
    report.update(config=config, version=__version__)
    _emit(report)
    return EXIT_OK if report["converged"] else EXIT_INCONCLUSIVE


def cmd_convert(args) -> int:
    if args.invert:
        Kt = args.k
        K = k_from_ktilde(Kt, args.rho)
    else:
        K = args.k
        Kt = ktilde_from_k(K, args.rho)
    alpha = 1.0 if K == 1 else homothety_alpha(K, args.rho)
    _emit({
        "K": _sig12(K), "rho": _sig12(args.rho), "Ktilde": _sig12(Kt),
        "alpha": _sig12(alpha), "drury_C": _sig12(drury_constant(args.rho)),
        "version": __version__,
    })
    return EXIT_OK


def _lemma_family(family, K):
    out = []
    for f in family:
        nf = sup_norm_disc(f)
        if nf > 0:
            out.append(scaled(f, 1.0 / (K * nf)))
    return out


def cmd_verify(args) -> int:
    seed = _seed(args.seed)
    cfg = RunConfig(seed=seed, tol=args.tol, zeta_samples=args.zeta_samples,
                    family_spec=args.family, output_path=args.output)
    T = load_matrix(args.file)
    if T.shape[0] != T.shape[1]:
        raise ValueError("matrix must be square")
    params = RhoParams(args.rho, cfg.zeta_samples)
    family = parse_family(cfg.family_spec, seed)
    main = verify_main_theorem(T, args.rho, family, K_known=args.k_known, tol=cfg.tol,
                               params=params, bound_scale=args.bound_scale)
    named = check_named_inequalities(T, args.rho, family, tol=cfg.tol, params=params,
                                     bound_scale=args.bound_scale, normalize=True)
    K_lemma = max(args.k_known or main["K_est"]["value"], 1.0) * 1.01
    lemmas = check_positivity_lemmas(T, K_lemma, _lemma_family(family, K_lemma), tol=cfg.tol)
    hard = list(main["hard_checks"]) + list(named["hard_checks"])
    hard += [{"name": "positivity_lemmas", "margin": 0.0 if r["agree"] else -1.0,
              "passed": r["agree"], "witness": {"index": r["index"]}} for r in lemmas["rows"]]
    violations = [c for c in hard if not c["passed"]]
    report = {
        "constant_estimates": {
            "K_est": main["K_est"], "Ktilde_est": main["Ktilde_est"],
            "Ktilde_predicted": main["Ktilde_predicted"], "K_known": main["K_known"],
            "sharpness_ratio": main["sharpness_ratio"],
            "numerical_radius": named["numerical_radius"], "w_rho": named["w_rho"],
            "drury_C": named["drury_C"],
        },
        "hard_checks": hard,
        "violations": len(violations),
        "seed": seed,
        "config": {**asdict(cfg), "rho": args.rho, "k_known": args.k_known,
                   "bound_scale": args.bound_scale, "family_size": len(family)},
        "version": __version__,
    }
    _emit(report, cfg.output_path)
    return EXIT_VIOLATION if violations else EXIT_OK


def cmd_fock(args) -> int:
    with open(args.poly) as fh:
        p = ncpoly_from_json(json.load(fh))
    Ts = [load_matrix(f) for f in args.matrices]
    if len(Ts) != p.n:
        raise ValueError(f"polynomial has n = {p.n} but {len(Ts)} matrices were given")
    rep = joint_numerical_radius(Ts, args.m)
    scale = rep.upper if rep.upper > 0 else 1.0
    normed = [T / scale for T in Ts]
    s, gap = nc_sup_norm(p, max(args.m, p.degree + 2))
    checks = check_popescu_bounds(normed, [p], m=args.m, tol=args.tol,
                                  bound_scale=args.bound_scale)
    report = {
        "w_J": rep.to_dict(),
        "p_of_S_norm": s,
        "conv_gap": gap,
        "p_of_T_norm": op_norm(eval_nc_poly(p, Ts)),
        "normalisation": scale,
        "hard_checks": checks["hard_checks"],
        "violations": len(checks["violations"]),
        "config": {"m": args.m, "tol": args.tol, "bound_scale": args.bound_scale},
        "version": __version__,
    }
    _emit(report)
    return EXIT_VIOLATION if checks["violations"] else EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="opradii", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    r = sub.add_parser("radius", help="operator rho-radius of a matrix")
    r.add_argument("file")
    r.add_argument("--rho", type=float, default=2.0)
    r.add_argument("--tol", type=float, default=1e-8)
    r.add_argument("--zeta-samples", type=int, default=256)
    r.add_argument("--norm", action="store_true", help="report the operator norm instead")
    r.set_defaults(func=cmd_radius)

    c = sub.add_parser("convert", help="K <-> Ktilde conversion constants")
    c.add_argument("--k", type=float, required=True)
    c.add_argument("--rho", type=float, default=2.0)
    c.add_argument("--invert", action="store_true", help="treat --k as Ktilde and solve for K")
    c.set_defaults(func=cmd_convert)

    v = sub.add_parser("verify", help="spectral-set verification suite")
    v.add_argument("file")
    v.add_argument("--rho", type=float, default=2.0)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--family", default="mobius+blaschke:deg=4")
    v.add_argument("--k-known", type=float, default=None,
                   help="certified K-spectral constant (e.g. kappa(L) of a similarity model)")
    v.add_argument("--tol", type=float, default=1e-6)
    v.add_argument("--zeta-samples", type=int, default=256)
    v.add_argument("--bound-scale", type=float, default=1.0, help=argparse.SUPPRESS)
    v.add_argument("--output", default=None)
    v.set_defaults(func=cmd_verify)

    f = sub.add_parser("fock", help="joint numerical radius and disc-algebra bounds")
    f.add_argument("matrices", nargs="+")
    f.add_argument("--poly", required=True)
    f.add_argument("--m", type=int, default=6)
    f.add_argument("--tol", type=float, default=1e-6)
    f.add_argument("--bound-scale", type=float, default=1.0, help=argparse.SUPPRESS)
    f.set_defaults(func=cmd_fock)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
