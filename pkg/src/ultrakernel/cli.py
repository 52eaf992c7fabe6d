"""Command-line front end.

Subcommands
-----------
eval      W_n^lam on a point or grid of x
kernel    one kernel value by series and/or double integral
figure    kernel surface m(x; y) over a grid (CSV)
compare   series vs double integral, with timings (JSON)
validate  randomized identity sweep; exit status 1 if any check fails
walk      lift a Schoenberg sequence to a higher index

Exit codes: 0 success, 1 failed validation, 2 invalid or inadmissible input.
Parallelism is capped by the ``ULTRAKERNEL_THREADS`` environment variable;
results are assembled in grid order, so output does not depend on it.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .dimwalk import SchoenbergSeq, eval_mixture, lift
from .errors import UltrakernelError
from .gegenbauer import INDEX_INFINITY, eval_W, eval_W_infinity
from .identities import DEFAULT_TOLERANCE, reports_to_json, run_sweep
from .kernel import GRADED_NODES, KernelParams, kernel_integral, kernel_integral_values, kernel_series

FIGURE_GRID = "-0.95:0.95:0.05"
FIGURE_LEVELS = 16


class UsageError(Exception):
    """Bad command-line input; reported with exit code 2."""


def _fmt(value):
    return f"{value:.17g}"


def parse_range(text):
    """``"lo:hi:step"`` -> grid points, rounded so that symmetric ranges stay symmetric."""
    try:
        lo, hi, step = (float(p) for p in text.split(":"))
    except ValueError as exc:
        raise UsageError(f"bad range {text!r}; expected lo:hi:step") from exc
    if not step > 0.0:
        raise UsageError(f"grid step must be > 0, got {step}")
    if hi < lo:
        raise UsageError(f"empty grid range {text!r}")
    count = int(np.floor((hi - lo) / step + 1e-9)) + 1
    return [round(lo + k * step, 12) for k in range(count)]


def parse_grid(text):
    """``"x-range[,y-range]"``; the y-range defaults to the x-range."""
    parts = text.split(",")
    if len(parts) > 2:
        raise UsageError(f"bad grid {text!r}")
    xs = parse_range(parts[0])
    ys = parse_range(parts[1]) if len(parts) == 2 else list(xs)
    return xs, ys


def parse_int_list(text):
    try:
        values = [int(p) for p in str(text).split(",")]
    except ValueError as exc:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from exc
    return values


def _threads():
    cap = os.environ.get("ULTRAKERNEL_THREADS")
    n = os.cpu_count() or 1
    if cap:
        try:
            n = max(1, min(n, int(cap)))
        except ValueError as exc:
            raise UsageError(f"ULTRAKERNEL_THREADS must be an integer, got {cap!r}") from exc
    return n


def _ordered_map(fn, items):
    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        return list(pool.map(fn, items))


def _write(args, text):
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)


def _csv(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def _records(args, header, rows):
    if args.format == "csv":
        return _csv(header, rows)
    return json.dumps([dict(zip(header, row)) for row in rows], indent=1) + "\n"


def _admissible(lam, nu, r):
    if abs(r) == 1.0 and lam <= nu + 1.0:
        raise UsageError(
            f"r={r:+g} with nu < lam <= nu + 1 (lam={lam}, nu={nu}) is the singular "
            "range: the kernel is infinite on the diagonal and the double integral "
            "does not apply; use |r| < 1 or lam > nu + 1"
        )


def _kernel_row(lam, nu, r, x, ys, qu, qv):
    if abs(r) == 1.0:
        # graded rules: plain tensor rules stall near y = x at |r| = 1
        return kernel_integral_values(lam, nu, r, x, ys, qu or GRADED_NODES, qv or GRADED_NODES, levels=FIGURE_LEVELS)
    return kernel_integral_values(lam, nu, r, x, ys, qu or 64, qv or 64)


def cmd_eval(args):
    xs = parse_range(args.grid.split(",")[0]) if args.grid else [args.x]
    if args.lam_inf:
        vals = [eval_W_infinity(args.n, x) for x in xs]
        lam = "infinity"
    else:
        vals = eval_W(args.n, args.lam, np.array(xs)).tolist()
        lam = args.lam
    rows = [(args.n, lam, float(x), float(v)) for x, v in zip(xs, vals)]
    _write(args, _records(args, ["n", "lambda", "x", "W"], rows))
    return 0


def cmd_kernel(args):
    p = KernelParams(args.lam, args.nu, args.r, args.x, args.y)
    out = {"lambda": p.lam, "nu": p.nu, "r": p.r, "x": p.x, "y": p.y}
    if args.method in ("series", "both"):
        ev = kernel_series(p, args.n_trunc[-1])
        out["series"] = {"value": ev.value, "N": ev.truncation_or_nodes[0], "est_error": ev.est_error}
    if args.method in ("integral", "both"):
        if args.qu or args.qv:
            ev = kernel_integral(p, args.qu, args.qv)
        else:
            ev = kernel_integral(p)
        out["integral"] = {"value": ev.value, "nodes": list(ev.truncation_or_nodes), "est_error": ev.est_error}
    _write(args, json.dumps(out, indent=1) + "\n")
    return 0


def cmd_figure(args):
    _admissible(args.lam, args.nu, args.r)
    xs, ys = parse_grid(args.grid or FIGURE_GRID)
    for x in xs:
        KernelParams(args.lam, args.nu, args.r, x, ys[0])
    for y in ys:
        KernelParams(args.lam, args.nu, args.r, xs[0], y)
    y_arr = np.array(ys)
    rows_by_x = _ordered_map(lambda x: _kernel_row(args.lam, args.nu, args.r, x, y_arr, args.qu, args.qv), xs)
    rows = [(x, y, float(m)) for x, vals in zip(xs, rows_by_x) for y, m in zip(ys, vals)]
    _write(args, _records(args, ["x", "y", "m"], rows))
    return 0


def _points(args):
    if args.grid:
        xs, ys = parse_grid(args.grid)
        return [(x, y) for x in xs for y in ys]
    return [(args.x, args.y)]


def cmd_compare(args):
    _admissible(args.lam, args.nu, args.r)
    n_list = args.n_trunc
    q_list = parse_int_list(args.qu) if args.qu else [32, 64, 96]
    records = []
    for x, y in _points(args):
        p = KernelParams(args.lam, args.nu, args.r, x, y)
        rec = {"x": x, "y": y, "series": [], "integral": []}
        if not (abs(p.r) == 1.0 and p.singular_range):
            for n in n_list:
                t0 = time.perf_counter()
                ev = kernel_series(p, n)
                rec["series"].append(
                    {"N": n, "value": ev.value, "est_error": ev.est_error, "seconds": time.perf_counter() - t0}
                )
        for q in q_list:
            t0 = time.perf_counter()
            if abs(p.r) == 1.0:
                ev = kernel_integral(p, q, q, levels=FIGURE_LEVELS)
            else:
                ev = kernel_integral(p, q, q)
            rec["integral"].append(
                {"nodes": list(ev.truncation_or_nodes), "value": ev.value, "est_error": ev.est_error,
                 "seconds": time.perf_counter() - t0}
            )
        if rec["series"]:
            rec["abs_difference"] = abs(rec["series"][-1]["value"] - rec["integral"][-1]["value"])
        records.append(rec)
    _write(args, json.dumps(records, indent=1) + "\n")
    return 0


def cmd_validate(args):
    reports = run_sweep(args.seed, args.count, args.tolerance)
    _write(args, reports_to_json(reports))
    failed = sum(not r.passed for r in reports)
    if failed:
        print(f"{failed} of {len(reports)} checks failed", file=sys.stderr)
        return 1
    return 0


def cmd_walk(args):
    if args.seq:
        with open(args.seq) as fh:
            seq = SchoenbergSeq.from_json(fh.read())
    elif args.geometric is not None:
        seq = SchoenbergSeq.geometric(args.geometric, args.nu)
    else:
        raise UsageError("walk needs --seq FILE or --geometric Q")
    target = INDEX_INFINITY if args.lam_inf else args.lam
    lifted = lift(seq, target)
    if args.grid:
        xs = parse_range(args.grid.split(",")[0])
        rows = [(x, float(eval_mixture(seq, x)), float(eval_mixture(lifted, x))) for x in xs]
        _write(args, _records(args, ["x", "f_before", "f_after"], rows))
    else:
        _write(args, lifted.to_json() + "\n")
    return 0


COMMANDS = {
    "eval": cmd_eval,
    "kernel": cmd_kernel,
    "figure": cmd_figure,
    "compare": cmd_compare,
    "validate": cmd_validate,
    "walk": cmd_walk,
}


def build_parser():
    parser = argparse.ArgumentParser(prog="ultrakernel", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--lambda", dest="lam", type=float, default=None)
    parser.add_argument("--lambda-infinity", dest="lam_inf", action="store_true",
                        help="use the infinite index (eval, walk)")
    parser.add_argument("--nu", type=float, default=None)
    parser.add_argument("--r", type=float, default=None)
    parser.add_argument("--x", type=float, default=0.0)
    parser.add_argument("--y", type=float, default=0.0)
    parser.add_argument("--n", type=int, default=0, help="polynomial degree (eval)")
    parser.add_argument("--grid", default=None, help="xmin:xmax:step[,ymin:ymax:step]")
    parser.add_argument("--qu", default=None, help="u-rule nodes (compare: comma list)")
    parser.add_argument("--qv", type=int, default=None)
    parser.add_argument("--n-trunc", dest="n_trunc", default="150,300,600",
                        help="series truncation(s), comma separated")
    parser.add_argument("--out", default=None, help="output path (default stdout)")
    parser.add_argument("--format", choices=["csv", "json"], default=None)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--count", type=int, default=200, help="tuples per identity (validate)")
    parser.add_argument("--tolerance", type=float, default=DEFAULT_TOLERANCE)
    parser.add_argument("--method", choices=["series", "integral", "both"], default="both")
    parser.add_argument("--seq", default=None, help="Schoenberg sequence JSON file (walk)")
    parser.add_argument("--geometric", type=float, default=None, help="geometric spectrum ratio q (walk)")
    return parser


_DEFAULTS = {
    "figure": {"lam": 3.0, "nu": 0.5, "r": 1.0, "format": "csv"},
    "kernel": {"r": 1.0},
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    for key, value in _DEFAULTS.get(args.command, {}).items():
        if getattr(args, key) is None:
            setattr(args, key, value)
    if args.format is None:
        args.format = "csv" if args.command in ("figure", "eval") else "json"
    try:
        args.n_trunc = parse_int_list(args.n_trunc)
        if args.command != "compare" and args.qu is not None:
            args.qu = parse_int_list(args.qu)[0]
        needed = {
            "eval": ["lam"] if not args.lam_inf else [],
            "kernel": ["lam", "nu", "r"],
            "figure": ["lam", "nu", "r"],
            "compare": ["lam", "nu", "r"],
            "walk": (["lam"] if not args.lam_inf else []) + (["nu"] if args.geometric is not None else []),
            "validate": [],
        }[args.command]
        missing = [f"--{'lambda' if k == 'lam' else k}" for k in needed if getattr(args, k) is None]
        if missing:
            raise UsageError(f"{args.command} requires {', '.join(missing)}")
        return COMMANDS[args.command](args)
    except (UsageError, UltrakernelError) as exc:
        print(f"ultrakernel {args.command}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
