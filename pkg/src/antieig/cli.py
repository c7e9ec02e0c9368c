"""Command-line front end.

Every subcommand prints one JSON document (or CSV for ``regions``) on
stdout. Exit codes: 0 success, 2 invalid input, 3 numerical failure,
4 violated precondition.
"""
from __future__ import annotations

import argparse
import sys

import numpy as np

from . import antieigen, dissipativity, io, ou_kernel, regions
from .errors import InputError, NumericalFailure, PreconditionError

DEFAULT_SEED = 20150101

EXIT_INPUT, EXIT_NUMERICAL, EXIT_PRECONDITION = 2, 3, 4


def _complex(text: str) -> complex:
    try:
        parts = [float(s) for s in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected RE,IM, got {text!r}") from None
    if len(parts) == 1:
        return complex(parts[0], 0.0)
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected RE,IM, got {text!r}")
    return complex(*parts)


def _vector(text: str) -> np.ndarray:
    try:
        return np.array([float(s) for s in text.split(",")])
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated reals, got {text!r}") from None


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="antieig", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def optimizer_flags(p):
        p.add_argument("--restarts", type=_positive_int, default=64)
        p.add_argument("--max-iters", type=_positive_int, default=10000)
        p.add_argument("--tol", type=float, default=1e-10)
        p.add_argument("--seed", type=int, default=DEFAULT_SEED)
        p.add_argument("--field", choices=("complex", "real"), default="complex")

    def grid_flags(p):
        p.add_argument("--grid-n", type=int, default=None)
        p.add_argument("--grid-L", type=float, default=None)

    p = sub.add_parser("mu1", help="first antieigenvalue and real angle")
    p.add_argument("--matrix", required=True)
    p.add_argument("--method", choices=("auto", "brute", "hermitian", "normal"), default="auto")
    optimizer_flags(p)

    p = sub.add_parser("gamma", help="best Lp-dissipativity constant")
    p.add_argument("--matrix", required=True)
    p.add_argument("--p", type=float, required=True)
    optimizer_flags(p)

    p = sub.add_parser("check", help="dissipativity vs antieigenvalue verdicts")
    p.add_argument("--matrix", required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--band", type=float, default=dissipativity.DECISION_BAND)
    optimizer_flags(p)

    p = sub.add_parser("prange", help="exponents p satisfying the antieigenvalue condition")
    p.add_argument("--matrix", required=True)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)

    p = sub.add_parser("regions", help="sector half-angles or condition-number window on a p grid")
    p.add_argument("--kind", choices=("sector", "kappa"), required=True)
    p.add_argument("--grid", required=True, help="'start:stop:num' or 'p1,p2,...'")
    p.add_argument("--out", choices=("json", "csv"), default="csv")

    p = sub.add_parser("kernel-eval", help="heat kernel H(x, xi, t)")
    p.add_argument("--spec", required=True)
    p.add_argument("--x", type=_vector, required=True)
    p.add_argument("--xi", type=_vector, required=True)
    p.add_argument("--t", type=float, required=True)

    p = sub.add_parser("kernel-mass", help="int H dxi against exp(-Bt)")
    p.add_argument("--spec", required=True)
    p.add_argument("--x", type=_vector, default=None)
    p.add_argument("--t", type=float, required=True)
    grid_flags(p)

    p = sub.add_parser("kernel-chapman", help="semigroup (Chapman-Kolmogorov) probe")
    p.add_argument("--spec", required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--s", type=float, required=True)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    grid_flags(p)

    p = sub.add_parser("kernel-resolvent", help="resolvent estimate probe with a Gaussian g")
    p.add_argument("--spec", required=True)
    p.add_argument("--lambda", dest="lam", type=_complex, required=True)
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--n-time", type=_positive_int, default=200)
    p.add_argument("--T-max", type=float, default=None)
    p.add_argument("--out-stride", type=_positive_int, default=1)
    grid_flags(p)

    p = sub.add_parser("echo", help="parse a matrix and write it back")
    p.add_argument("--matrix", required=True)

    for name, sp in sub.choices.items():
        if name != "regions":
            sp.add_argument("--out", choices=("json", "csv"), default="json")
    return parser


def _spec(path) -> ou_kernel.OUOperatorSpec:
    raw = io.load_spec_json(io.load_json(path))
    return ou_kernel.OUOperatorSpec.from_matrices(raw["A"], raw["B"], raw["S"], raw["d"])


def _grid(args, spec) -> ou_kernel.GridSpec:
    g = ou_kernel.default_grid(spec.d)
    return ou_kernel.GridSpec(spec.d, args.grid_L if args.grid_L is not None else g.L,
                              args.grid_n if args.grid_n is not None else g.n)


def _opt(args) -> dict:
    return {"restarts": args.restarts, "max_iters": args.max_iters, "tol": args.tol,
            "seed": args.seed}


def _run(args) -> object:
    cmd = args.command
    if cmd == "echo":
        return io.matrix_to_json(io.load_matrix(args.matrix))
    if cmd == "mu1":
        A = io.load_matrix(args.matrix)
        if args.field == "real":
            res = antieigen.mu1_brute(A, field="real", **_opt(args))
        elif args.method == "brute":
            res = antieigen.mu1_brute(A, **_opt(args))
        else:
            res = antieigen.mu1(A, method=args.method, seed=args.seed,
                                restarts=args.restarts, max_iters=args.max_iters, tol=args.tol)
        return res.to_dict()
    if cmd == "gamma":
        A = io.load_matrix(args.matrix)
        return dissipativity.gamma_best(A, args.p, field=args.field, **_opt(args)).to_dict()
    if cmd == "check":
        A = io.load_matrix(args.matrix)
        rep = dissipativity.gamma_best(A, args.p, field=args.field, **_opt(args))
        return dissipativity.check_equivalence(A, args.p, band=args.band, field=args.field,
                                               report=rep)
    if cmd == "prange":
        A = io.load_matrix(args.matrix)
        rng_ = dissipativity.p_range(A, seed=args.seed)
        if rng_ is None:
            return {"p_lower": None, "p_upper": None, "empty": True}
        return {"p_lower": rng_[0], "p_upper": rng_[1], "empty": False}
    if cmd == "regions":
        if args.out == "csv":
            return regions.emit_region_table(args.kind, args.grid)
        cols = ("p", "C_L", "C_R") if args.kind == "kappa" else ("p", "half_angle")
        return [dict(zip(cols, row)) for row in regions.region_rows(args.kind, args.grid)]
    spec = _spec(args.spec)
    if cmd == "kernel-eval":
        return {"H": ou_kernel.kernel_eval(spec, args.x, args.xi, args.t)}
    if cmd == "kernel-mass":
        x = np.zeros(spec.d) if args.x is None else args.x
        res = ou_kernel.mass_check(spec, x, args.t, _grid(args, spec))
        return res
    if cmd == "kernel-chapman":
        dev = ou_kernel.chapman_check(spec, args.t, args.s, _grid(args, spec), seed=args.seed)
        return {"deviation": dev}
    if cmd == "kernel-resolvent":
        grid = _grid(args, spec)
        g = lambda P: np.repeat(np.exp(-0.5 * np.sum(P**2, axis=1))[:, None], spec.N, axis=1)
        res = ou_kernel.resolvent_probe(spec, args.lam, g, grid, p=args.p, T_max=args.T_max,
                                        n_time=args.n_time, out_stride=args.out_stride)
        return res.to_dict()
    raise InputError(f"unknown command {cmd}")  # pragma: no cover


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        result = _run(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NumericalFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except PreconditionError as exc:
        print(f"precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    if isinstance(result, str):
        sys.stdout.write(result)
    else:
        sys.stdout.write(io.dumps(result) + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
