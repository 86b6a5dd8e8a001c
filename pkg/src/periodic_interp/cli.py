"""Command-line interface emitting CSV / JSON-lines tables.

Exit status: 0 on success, 2 for usage errors, 3 for malformed input data,
4 when a series cannot be certified or a numerical step breaks down.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from contextlib import contextmanager

import numpy as np

from .coefficients import LatticeGrid, coefficient_matrix
from .errors import ConvergenceError, DataError, DomainError, NumericError
from .interpolator import SampledPeriodicFunction, batch_interpolate, error_profile
from .kernel import SeriesControl, reduce_point
from .quadrature import integrate_interpolant, rectangle_rule

EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_NUMERIC = 4

_B10 = (
    (10, 1.0),
    (9, -5.0),
    (8, 7.5),
    (6, -7.0),
    (4, 5.0),
    (2, -1.5),
    (0, 5.0 / 66.0),
)


def sin2pi(x):
    return np.sin(2 * np.pi * np.asarray(x, dtype=float))


def bernoulli10(x):
    """Degree-10 Bernoulli polynomial of the fractional part of ``x``."""
    t = reduce_point(np.asarray(x, dtype=float))
    return sum(c * t**p for p, c in _B10)


BUILTINS = {"sin2pi": sin2pi, "bernoulli10": bernoulli10}


class UsageError(Exception):
    pass


def parse_samples(path):
    """Read samples from a CSV file.

    Two layouts are accepted: a ``beta,value`` header followed by one row
    per node in any order, or a single headerless column of values in node
    order ``beta = 1..N``.

    Raises
    ------
    DataError
        With the offending line number for malformed rows, duplicate or
        missing ``beta`` and non-finite values.
    """
    try:
        with open(path, newline="") as fh:
            rows = [(i, r) for i, r in enumerate(csv.reader(fh), start=1) if any(c.strip() for c in r)]
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror}") from exc
    if not rows:
        raise DataError(f"{path}: no samples")

    def number(text, line):
        try:
            v = float(text)
        except ValueError:
            raise DataError(f"{path}:{line}: not a number: {text.strip()!r}") from None
        if not math.isfinite(v):
            raise DataError(f"{path}:{line}: non-finite value {text.strip()!r}")
        return v

    header = [c.strip().lower() for c in rows[0][1]]
    if header == ["beta", "value"]:
        seen = {}
        for line, r in rows[1:]:
            if len(r) != 2:
                raise DataError(f"{path}:{line}: expected 2 fields, got {len(r)}")
            try:
                beta = int(r[0])
            except ValueError:
                raise DataError(f"{path}:{line}: beta must be an integer, got {r[0].strip()!r}") from None
            if beta in seen:
                raise DataError(f"{path}:{line}: duplicate beta={beta} (first on line {seen[beta][0]})")
            seen[beta] = (line, number(r[1], line))
        N = len(seen)
        if N < 2:
            raise DataError(f"{path}: need at least 2 samples, got {N}")
        for beta, (line, _) in seen.items():
            if not 1 <= beta <= N:
                raise DataError(f"{path}:{line}: beta={beta} outside 1..{N} (gap in indices)")
        values = [seen[b][1] for b in range(1, N + 1)]
    else:
        values = []
        for line, r in rows:
            if len(r) != 1:
                raise DataError(f"{path}:{line}: expected a single column or a 'beta,value' header")
            values.append(number(r[0], line))
        if len(values) < 2:
            raise DataError(f"{path}: need at least 2 samples, got {len(values)}")
    return SampledPeriodicFunction(LatticeGrid(len(values)), np.array(values))


def _fmt(v):
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if v is None:
        return ""
    return format(float(v), ".17g")


class _Table:
    def __init__(self, stream, fmt, columns):
        self.stream = stream
        self.fmt = fmt
        self.columns = columns
        if fmt == "csv":
            stream.write(",".join(columns) + "\n")

    def row(self, *values):
        if self.fmt == "csv":
            self.stream.write(",".join(_fmt(v) for v in values) + "\n")
        else:
            rec = {}
            for k, v in zip(self.columns, values):
                rec[k] = v if v is None or isinstance(v, (int, np.integer)) else float(v)
            self.stream.write(json.dumps(rec, default=int) + "\n")


def _points(args):
    if args.z is not None:
        return np.array(args.z, dtype=float)
    return np.linspace(0.0, 1.0, args.grid + 1)


def _n_values(args):
    if args.N is None:
        return None
    try:
        ns = [int(s) for s in args.N.split(",")]
    except ValueError:
        raise UsageError(f"--N expects an integer or a comma list, got {args.N!r}") from None
    if any(n < 2 for n in ns):
        raise UsageError("--N values must be >= 2")
    return ns


def _single_n(args):
    ns = _n_values(args)
    if ns is not None and len(ns) != 1:
        raise UsageError("this command takes a single --N")
    return None if ns is None else ns[0]


def _source(args, N):
    if args.builtin is not None and args.input is not None:
        raise UsageError("give either --builtin or --input, not both")
    if args.builtin is not None:
        if N is None:
            raise UsageError("--builtin needs --N")
        return SampledPeriodicFunction.from_function(LatticeGrid(N), BUILTINS[args.builtin])
    if args.input is not None:
        f = parse_samples(args.input)
        if N is not None and N != f.grid.N:
            raise DataError(f"--N {N} does not match {f.grid.N} samples in {args.input}")
        return f
    raise UsageError("an input source is required: --builtin or --input")


def _grid_only(args):
    N = _single_n(args)
    if N is None:
        raise UsageError("--N is required")
    return LatticeGrid(N)


def cmd_coeffs(args, ctl, table_for):
    grid = _grid_only(args)
    zs = _points(args)
    C = coefficient_matrix(args.m, grid, zs, ctl)
    betas = range(1, grid.N + 1) if args.beta is None else [args.beta]
    for b in betas:
        if not 1 <= b <= grid.N:
            raise UsageError(f"--beta must lie in 1..{grid.N}")
    t = table_for(["beta", "z", "C"])
    for b in betas:
        for z, c in zip(zs, C[:, b - 1]):
            t.row(b, z, c)


def cmd_interp(args, ctl, table_for):
    f = _source(args, _single_n(args))
    zs = _points(args)
    P = batch_interpolate(f, args.m, zs, ctl)
    if args.builtin is not None:
        truth = BUILTINS[args.builtin](zs)
        t = table_for(["z", "P_phi", "phi_true", "abs_err"])
        for row in zip(zs, P, truth, np.abs(P - truth)):
            t.row(*row)
    else:
        t = table_for(["z", "P_phi"])
        for row in zip(zs, P):
            t.row(*row)


def cmd_error_norm(args, ctl, table_for):
    grid = _grid_only(args)
    prof = error_profile(args.m, grid, _points(args), ctl)
    t = table_for(["z", "norm_sq"])
    for row in zip(prof.points, prof.norm_sq):
        t.row(*row)


def cmd_convergence(args, ctl, table_for):
    ns = _n_values(args) or [4, 8, 16, 32]
    if args.builtin is None:
        raise UsageError("convergence needs --builtin")
    if args.input is not None:
        raise UsageError("convergence works on builtin functions only")
    func = BUILTINS[args.builtin]
    zs = _points(args)
    t = table_for(["N", "max_abs_err", "max_norm_sq", "empirical_order"])
    prev = None
    for N in ns:
        f = SampledPeriodicFunction.from_function(LatticeGrid(N), func)
        err = float(np.abs(batch_interpolate(f, args.m, zs, ctl) - func(zs)).max())
        nsq = float(error_profile(args.m, f.grid, zs, ctl).norm_sq.max())
        order = None
        if prev is not None and err > 0 and prev > 0:
            order = math.log2(prev / err)
        t.row(N, err, nsq, order)
        prev = err


def cmd_quad(args, ctl, table_for):
    f = _source(args, _single_n(args))
    rect = rectangle_rule(f)
    integral = integrate_interpolant(f, args.m, ctl, args.panels)
    t = table_for(["rectangle_value", "interpolant_integral", "abs_diff"])
    t.row(rect, integral, abs(integral - rect))


COMMANDS = {
    "coeffs": cmd_coeffs,
    "interp": cmd_interp,
    "error-norm": cmd_error_norm,
    "convergence": cmd_convergence,
    "quad": cmd_quad,
}


def _positive_float(text):
    v = float(text)
    if not v > 0 or not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"must be a positive number, got {text!r}")
    return v


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {text!r}")
    return v


def _point_list(text):
    try:
        return [float(s) for s in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--m", type=int, default=2, help="smoothness order (default 2)")
    common.add_argument("--N", help="node count; convergence accepts a comma list such as 4,8,16,32")
    pts = common.add_mutually_exclusive_group()
    pts.add_argument("--z", type=_point_list, help="comma-separated evaluation points")
    pts.add_argument("--grid", type=_positive_int, default=500,
                     help="use K+1 uniform points on [0, 1] (default 500)")
    common.add_argument("--beta", type=int, help="coeffs: emit only this node index")
    common.add_argument("--builtin", choices=sorted(BUILTINS), help="built-in test function")
    common.add_argument("--input", help="CSV file of samples")
    common.add_argument("--output", help="output file (default: standard output)")
    common.add_argument("--tol", type=_positive_float, default=1e-12, help="series tail tolerance")
    common.add_argument("--max-terms", type=_positive_int, default=100_000,
                        help="largest truncation radius for any series")
    common.add_argument("--panels", type=_positive_int, help="quad: midpoint panels (default 10 N)")
    common.add_argument("--format", choices=("csv", "json-lines"), default="csv")

    parser = argparse.ArgumentParser(
        prog="periodic-interp",
        description="Optimal interpolation of 1-periodic functions on uniform grids.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    helps = {
        "coeffs": "coefficient curves C(beta; z)",
        "interp": "interpolant values (with errors for builtins)",
        "error-norm": "squared error-functional norm",
        "convergence": "error decay over a list of N",
        "quad": "integral of the interpolant vs. the rectangle rule",
    }
    for name, text in helps.items():
        sub.add_parser(name, parents=[common], help=text, description=text)
    return parser


@contextmanager
def _open_output(path):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        ctl = SeriesControl(max_terms=args.max_terms, abs_tol=args.tol)
        with _open_output(args.output) as out:
            COMMANDS[args.command](args, ctl, lambda cols: _Table(out, args.format, cols))
    except (UsageError, DomainError) as exc:
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"{parser.prog}: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (ConvergenceError, NumericError) as exc:
        print(f"{parser.prog}: numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return EXIT_DATA
    return 0


if __name__ == "__main__":
    sys.exit(main())
