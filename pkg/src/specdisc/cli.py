"""Command-line interface.

Exit codes: 0 on success, 2 when an input violates a precondition, 3 when a
numerical routine fails (the library error message is printed).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .errors import SpecdiscError

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 2, 3

_P_LOWER = {"so3": -3.0, "g24": -4.0}


class InputError(ValueError):
    """Raised by the argument checks below; mapped to exit code 2."""


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise InputError(f"expected a comma separated list of numbers, got {text!r}") from exc


def _ints(text: str) -> list[int]:
    return [int(v) for v in _floats(text)]


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_coeffs(args) -> int:
    from .spectra import coeff_table, kernel_table

    if args.max < 0:
        raise InputError("--max must be nonnegative")
    if args.manifold == "sphere":
        if args.d < 2:
            raise InputError("--d must be at least 2")
        if not args.p > 1 - args.d:
            raise InputError(f"sphere coefficients need p > 1 - d = {1 - args.d}")
    elif not args.p > _P_LOWER[args.manifold]:
        raise InputError(f"{args.manifold} coefficients need p > {_P_LOWER[args.manifold]:g}")
    if args.kernel:
        table = kernel_table(args.manifold, args.max, args.d)
    else:
        table = coeff_table(args.manifold, args.p, args.max, args.d)
    _emit(table.to_json(), args.out)
    return EXIT_OK


def cmd_kernel(args) -> int:
    from .kernels import KernelId, eval_kernel, verify_askey_3d

    if args.verify_askey:
        grid = np.linspace(0.0, 1.2, args.grid)
        err = verify_askey_3d(grid)
        _emit(json.dumps({"max_error": err, "points": int(args.grid)}), args.out)
        return EXIT_OK
    if args.x is None or args.y is None:
        raise InputError("--x and --y are required unless --verify-askey is given")
    ctor = {
        "brownian": lambda: KernelId.brownian(args.s),
        "interval": lambda: KernelId.interval(args.s),
        "askey": lambda: KernelId.askey(args.d),
        "sphere_dist": lambda: KernelId.sphere_dist(args.d),
        "ball_dist": lambda: KernelId.ball_dist(args.d, args.s),
        "ball_lens": lambda: KernelId.ball_lens(args.r, args.d),
    }[args.kind]
    kid = ctor()
    x, y = _floats(args.x), _floats(args.y)
    val = eval_kernel(kid, np.array(x), np.array(y))
    _emit(json.dumps({"kernel": args.kind, "value": np.atleast_1d(val).tolist()}), args.out)
    return EXIT_OK


def cmd_ball_eigs(args) -> int:
    from .ball_eigen import BallProblem, find_eigs, residual

    prob = BallProblem(args.d, args.p, args.m)
    pairs = find_eigs(prob, args.count)
    rows = []
    for pair in pairs:
        row = pair.to_dict()
        row["residual"] = residual(pair, prob)
        rows.append(row)
    _emit(json.dumps(rows, indent=1), args.out)
    return EXIT_OK


def cmd_nufft_bench(args) -> int:
    from .discrepancy import random_points
    from .nufft import forward, make_plan
    from .specfun import sph_size

    rng = np.random.default_rng(args.seed or 0)
    S = sph_size(args.M)
    f = rng.standard_normal((S, S)) + 1j * rng.standard_normal((S, S))
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(["mode", "n", "M", "epsilon", "seconds", "max_err"])
    for n in _ints(args.n):
        nodes = random_points("g24", n, rng)
        direct = make_plan("s2xs2", args.M, nodes)
        t0 = time.perf_counter()
        ref = forward(direct, f)
        wr.writerow(["direct", n, args.M, "", f"{time.perf_counter() - t0:.6f}", 0.0])
        for eps in _floats(args.eps):
            plan = make_plan("s2xs2", args.M, nodes, epsilon=eps, mode="fast")
            t0 = time.perf_counter()
            val = forward(plan, f)
            secs = time.perf_counter() - t0
            err = float(np.max(np.abs(val - ref)) / np.sum(np.abs(f)))
            wr.writerow(["fast", n, args.M, eps, f"{secs:.6f}", f"{err:.3e}"])
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


def _discrepancy_table(manifold, p, M):
    from .spectra import coeff_table, kernel_table

    if p == 1:
        return kernel_table(manifold, M)
    if not 0 < p < 2:
        raise InputError("minimization supports 0 < p < 2")
    # -||x-y||^p is conditionally positive definite; the degree-zero weight is irrelevant
    # for probability measures, so any positive value works
    table = coeff_table(manifold, p, M)
    table.entries = {k: -v for k, v in table.entries.items()}
    table.entries[(0, 0) if manifold == "g24" else (0,)] = 1.0
    return table


def _build_target(manifold, M, spec):
    from . import discrepancy as dc

    kind = spec.get("kind", "uniform")
    if kind == "uniform":
        return dc.target_uniform(manifold, M)
    if kind == "discrete":
        return dc.target_discrete(manifold, np.array(spec["points"], float), spec["weights"], M)
    if kind == "two_circles":
        if manifold != "sphere":
            raise InputError("the two_circles target lives on the sphere")
        return dc.two_circle_scenario(M)
    if kind == "circles":
        if manifold != "sphere":
            raise InputError("circle targets live on the sphere")
        target = None
        for c in spec["circles"]:
            target = dc.target_circle_s2(c["axis"], c["polar"], c["weight"], M, base=target)
        return target
    if kind == "so3_demo":
        if manifold != "so3":
            raise InputError("the so3_demo target lives on SO(3)")
        return dc.so3_scenario(M)
    raise InputError(f"unknown target kind {kind!r}")


def _load_config(args) -> dict:
    cfg = {"manifold": "sphere", "M": 8, "n": 10, "p": 1, "target": {"kind": "uniform"},
           "seed": 0, "max_iters": 500, "tol": 1e-9, "restarts": 3}
    if args.config:
        try:
            cfg.update(json.loads(Path(args.config).read_text()))
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read config: {exc}") from exc
    for key in ("manifold", "M", "n", "seed", "max_iters", "restarts"):
        val = getattr(args, key, None)
        if val is not None:
            cfg[key] = val
    if args.target is not None:
        cfg["target"] = {"kind": args.target}
    if cfg["manifold"] not in ("sphere", "so3", "g24"):
        raise InputError(f"unknown manifold {cfg['manifold']!r}")
    if int(cfg["M"]) < 0 or int(cfg["n"]) < 1:
        raise InputError("need M >= 0 and n >= 1")
    return cfg


def cmd_minimize(args) -> int:
    from . import discrepancy as dc

    cfg = _load_config(args)
    manifold, M, n = cfg["manifold"], int(cfg["M"]), int(cfg["n"])
    table = _discrepancy_table(manifold, float(cfg["p"]), M)
    target = _build_target(manifold, M, cfg["target"])
    res = dc.minimize(table, target, n, max_iters=int(cfg["max_iters"]), tol=float(cfg["tol"]),
                      seed=int(cfg["seed"]), restarts=int(cfg["restarts"]))
    summary = {"manifold": manifold, "M": M, "n": n, "objective": res.objective,
               "converged": res.converged, "iterations": len(res.trace) - 1}
    kind = cfg["target"].get("kind")
    if kind == "two_circles":
        summary["split"] = list(dc.circle_split(res.points.points))
    elif kind == "so3_demo":
        summary["split"] = list(dc.so3_split(res.points.points))
    outdir = Path(args.outdir) if args.outdir else None
    if outdir:
        outdir.mkdir(parents=True, exist_ok=True)
        (outdir / "points.json").write_text(res.points.to_json())
        (outdir / "trace.csv").write_text(res.trace_csv())
        summary["points_file"] = str(outdir / "points.json")
        summary["trace_file"] = str(outdir / "trace.csv")
    else:
        summary["points"] = res.points.points.tolist()
    _emit(json.dumps(summary, indent=1), args.out)
    return EXIT_OK


def cmd_convergence(args) -> int:
    from .discrepancy import convergence_study, fit_slope

    ns = _ints(args.n_list)
    if any(n < 1 for n in ns):
        raise InputError("point counts must be positive")
    rows = convergence_study(args.manifold, ns, seed=args.seed or 0, restarts=args.restarts)
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(["n", "M", "discrepancy"])
    for row in rows:
        wr.writerow([row["n"], row["M"], f"{row['discrepancy']:.10e}"])
    _emit(buf.getvalue(), args.out)
    if len(rows) > 1:
        slope = fit_slope([r["n"] for r in rows], [r["discrepancy"] for r in rows])
        print(f"fitted slope: {slope:.4f}", file=sys.stderr)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="random seed (default 0)")
    common.add_argument("--threads", type=int, default=None, help="cap on worker threads")
    common.add_argument("--out", default=None, help="output file (default: stdout)")

    parser = argparse.ArgumentParser(prog="specdisc", description="Spectral discrepancy toolkit.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("coeffs", parents=[common], help="Fourier coefficient table as JSON")
    p.add_argument("--manifold", choices=["sphere", "so3", "g24"], required=True)
    p.add_argument("--d", type=int, default=3, help="sphere S^{d-1} (sphere only)")
    p.add_argument("--p", type=float, default=1.0)
    p.add_argument("--max", type=int, required=True, help="truncation degree M")
    p.add_argument("--kernel", action="store_true", help="coefficients of the discrepancy kernel instead")
    p.set_defaults(func=cmd_coeffs)

    p = sub.add_parser("kernel", parents=[common], help="evaluate a closed-form kernel")
    p.add_argument("--kind", choices=["brownian", "interval", "askey", "sphere_dist", "ball_dist", "ball_lens"],
                   default="askey")
    p.add_argument("--x", help="first point (comma separated)")
    p.add_argument("--y", help="second point (comma separated)")
    p.add_argument("--s", type=float, default=1.0)
    p.add_argument("--r", type=float, default=1.0)
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--verify-askey", action="store_true", help="check the Askey integral identity in R^3")
    p.add_argument("--grid", type=int, default=25)
    p.set_defaults(func=cmd_kernel)

    p = sub.add_parser("ball-eigs", parents=[common], help="eigenpairs of the radial ball kernels")
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--p", type=int, default=1)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--count", type=int, default=5)
    p.set_defaults(func=cmd_ball_eigs)

    p = sub.add_parser("nufft-bench", parents=[common], help="fast vs direct S2xS2 transform timing (CSV)")
    p.add_argument("--n", default="1000,10000")
    p.add_argument("--M", type=int, default=8)
    p.add_argument("--eps", default="1e-4,1e-8")
    p.set_defaults(func=cmd_nufft_bench)

    p = sub.add_parser("minimize", parents=[common], help="minimize the discrepancy of an n-point set")
    p.add_argument("--config", help="JSON run configuration")
    p.add_argument("--manifold", choices=["sphere", "so3", "g24"], default=None)
    p.add_argument("--M", type=int, default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--target", default=None, help="uniform | two_circles | so3_demo")
    p.add_argument("--max-iters", dest="max_iters", type=int, default=None)
    p.add_argument("--restarts", type=int, default=None)
    p.add_argument("--outdir", default=None, help="directory for points.json and trace.csv")
    p.set_defaults(func=cmd_minimize)

    p = sub.add_parser("convergence", parents=[common], help="discrepancy versus n with M = n^(1/4) (CSV)")
    p.add_argument("--manifold", choices=["sphere", "so3", "g24"], default="g24")
    p.add_argument("--n-list", dest="n_list", default="16,81,256")
    p.add_argument("--restarts", type=int, default=3)
    p.set_defaults(func=cmd_convergence)
    return parser


def _set_threads(count):
    if count is None:
        return
    if count < 1:
        raise InputError("--threads must be positive")
    import numba

    numba.set_num_threads(min(count, numba.config.NUMBA_NUM_THREADS))


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _set_threads(args.threads)
        return args.func(args)
    except (ValueError, IndexError, KeyError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ArithmeticError, OverflowError, SpecdiscError) as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
