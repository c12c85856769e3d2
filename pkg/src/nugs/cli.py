"""Command-line front end.

Subcommands::

    nugs scheme            write a sampling scheme as JSON
    nugs reconstruct       measure, solve and report errors (JSON, optional CSV)
    nugs constants         stability constants of a (scheme, space) pair (JSON)
    nugs table {1,2,3,4}   reproduce one of the experiment tables (CSV)
    nugs compare-gridding  gridding versus NUGS on the same data (CSV)

``--config FILE`` reads flat ``key=value`` lines (``#`` comments allowed);
command-line flags override the file.  Exit codes: 0 success, 2 invalid
configuration, 3 numerical failure.
"""

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import constants as cst
from . import experiments as exps
from .operators import (
    condition_number,
    dense_matrix,
    evaluate_reconstruction,
    measure,
    perturb_measurements,
    projection_error,
    reconstruct,
    reconstruction_error,
)
from .sampling import SamplingScheme, jittered_scheme, log_scheme, seip_scheme, uniform_scheme
from .signals import QuadratureError, parse_signal
from .wavelets.filters import make_filter
from .wavelets.space import build_space

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_NUMERICAL = 3


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------------------
# argument handling
# ---------------------------------------------------------------------------


def _add_scheme_args(p):
    g = p.add_argument_group("sampling scheme")
    g.add_argument("--scheme-file", help="read the scheme from a JSON file")
    g.add_argument("--scheme", choices=("jittered", "log", "seip", "uniform"), default="log")
    g.add_argument("--K", type=float, default=32.0, help="bandwidth")
    g.add_argument("--delta", type=float, default=0.8, help="log-scheme density")
    g.add_argument("--nu", type=float, default=0.4, help="log-scheme offset")
    g.add_argument("--eps", type=float, default=0.6, help="jittered/uniform spacing")
    g.add_argument("--eta", type=float, default=0.1, help="jitter amplitude")
    g.add_argument("--N", type=int, default=38, help="frame truncation index")
    g.add_argument("--seed", type=int, default=0)


def _add_space_args(p):
    g = p.add_argument_group("reconstruction space")
    g.add_argument("--family", default="haar", help="haar, daubechies, db2, db3, db4")
    g.add_argument("--p", type=int, default=None, help="Daubechies order")
    g.add_argument("--R", type=int, default=6, help="scale (dimension 2^R)")
    g.add_argument("--J", type=int, default=None, help="coarse scale")
    g.add_argument("--type", default="periodic", help="periodic, folded or boundary")


def build_parser():
    parser = argparse.ArgumentParser(prog="nugs", description="Nonuniform generalized sampling in wavelet spaces")
    parser.add_argument("--config", help="key=value configuration file")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("scheme", help="generate a sampling scheme")
    _add_scheme_args(p)
    p.add_argument("--out", help="output path (default stdout)")

    p = sub.add_parser("reconstruct", help="reconstruct a signal")
    _add_scheme_args(p)
    _add_space_args(p)
    p.add_argument("--signal", default="table3")
    p.add_argument("--noise", default="table4-noise", help="noise signal h")
    p.add_argument("--noise-level", type=float, default=0.0, help="noise amplitude (measurements of f + level*h)")
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--max-iter", type=int, default=None)
    p.add_argument("--out", help="JSON report path (default stdout)")
    p.add_argument("--csv", help="write x, f, f~, |f-f~| samples here")
    p.add_argument("--dump-matrix", help="write A as column-major (re, im) CSV")

    p = sub.add_parser("constants", help="stability constants")
    _add_scheme_args(p)
    _add_space_args(p)
    p.add_argument("--tol", type=float, default=1e-3, help="C2 estimate tolerance")
    p.add_argument("--cap", type=int, default=4096, help="C2 estimate dimension cap")
    p.add_argument("--z", type=float, action="append", default=[], help="z-residual abscissa (repeatable)")
    p.add_argument("--out")

    p = sub.add_parser("table", help="reproduce an experiment table")
    p.add_argument("number", type=int, choices=(1, 2, 3, 4))
    p.add_argument("--family", action="append", default=None, help="wavelet family (tables 1 and 2, repeatable)")
    p.add_argument("--R", type=int, default=None, help="largest scale (table 1) or scale (table 2)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")

    p = sub.add_parser("compare-gridding", help="gridding versus NUGS")
    p.add_argument("--K", type=float, default=256.0)
    p.add_argument("--eps", type=float, default=0.7)
    p.add_argument("--eta", type=float, default=0.14)
    p.add_argument("--R", type=int, default=9)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--signal", default="gridding")
    p.add_argument("--out", help="summary CSV")
    p.add_argument("--samples", help="plot data CSV")
    return parser


def read_config(path):
    out = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from exc
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, val = line.partition("=")
        if not sep or not key.strip():
            raise ConfigError(f"{path}:{lineno}: expected key=value")
        out[key.strip().lstrip("-").replace("-", "_")] = val.strip()
    return out


def _subparser(parser, name):
    for action in parser._subparsers._group_actions:
        if name in action.choices:
            return action.choices[name]
    raise ConfigError(f"unknown command {name!r}")


def parse_args(argv):
    parser = build_parser()
    args = parser.parse_args(argv)
    if not args.config:
        return args
    conf = read_config(args.config)
    conf.pop("command", None)
    sub = _subparser(parser, args.command)
    known = {a.dest: a for a in sub._actions}
    defaults = {}
    for key, val in conf.items():
        if key not in known:
            raise ConfigError(f"unknown config key {key!r} for command {args.command!r}")
        act = known[key]
        try:
            conv = act.type(val) if act.type else val
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad value for {key}: {val!r}") from exc
        if act.choices is not None and conv not in act.choices:
            raise ConfigError(f"bad value for {key}: {val!r}")
        defaults[key] = [conv] if isinstance(act, argparse._AppendAction) else conv
    sub.set_defaults(**defaults)
    return parser.parse_args(argv)


# ---------------------------------------------------------------------------
# builders
# ---------------------------------------------------------------------------


def scheme_from_args(a):
    if getattr(a, "scheme_file", None):
        try:
            return SamplingScheme.load(a.scheme_file)
        except OSError as exc:
            raise ConfigError(f"cannot read scheme file: {exc}") from exc
    if a.scheme == "jittered":
        return jittered_scheme(a.K, a.eps, a.eta, a.seed)
    if a.scheme == "log":
        return log_scheme(a.K, a.delta, a.nu)
    if a.scheme == "seip":
        return seip_scheme(a.N)
    return uniform_scheme(a.K, a.eps)


def space_from_args(a):
    return build_space(make_filter(a.family, a.p), a.R, a.J, a.type)


def _emit(text, path):
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".10g")
    return str(v)


def rows_to_csv(rows):
    buf = io.StringIO()
    if not rows:
        return ""
    cols = list(rows[0])
    for r in rows[1:]:
        cols += [k for k in r if k not in cols]
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for r in rows:
        w.writerow([_fmt(r.get(c)) for c in cols])
    return buf.getvalue()


def matrix_csv(A, scheme, space):
    """Column-major ``re,im`` rows after a header with N, M, scheme and space."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    desc = ";".join(f"{k}:{v}" for k, v in space.descriptor().items())
    w.writerow([f"N={A.shape[0]}", f"M={A.shape[1]}", f"scheme={scheme.label}", f"space={desc}"])
    for z in np.asarray(A).ravel(order="F"):
        w.writerow([repr(float(z.real)), repr(float(z.imag))])
    return buf.getvalue()


def _json(obj):
    return json.dumps(obj, indent=2, default=lambda v: v.item() if hasattr(v, "item") else str(v)) + "\n"


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_scheme(a):
    _emit(scheme_from_args(a).to_json() + "\n", a.out)


def cmd_reconstruct(a):
    scheme = scheme_from_args(a)
    space = space_from_args(a)
    f = parse_signal(a.signal)
    b = measure(f, scheme)
    if a.noise_level:
        b = perturb_measurements(b, parse_signal(a.noise), a.noise_level, scheme)
    A = dense_matrix(scheme, space)
    kappa = condition_number(A)
    if not math.isfinite(kappa):
        raise np.linalg.LinAlgError(f"singular system: {scheme.N} samples, {space.M} unknowns")
    res = reconstruct(scheme, space, b, tol=a.tol, max_iter=a.max_iter, kappa=kappa)
    err = reconstruction_error(f, space, res.coeffs)
    perr = projection_error(f, space)
    report = {
        "scheme": scheme.label,
        "N": scheme.N,
        "space": space.descriptor(),
        "M": space.M,
        "signal": str(a.signal),
        "noise_level": a.noise_level,
        "error": err,
        "projection_error": perr,
        "ratio": err / perr if perr > 0 else (math.inf if err > 0 else 1.0),
        "kappa": kappa,
        "iterations": res.iterations,
        "converged": res.converged,
        "residual": res.residual,
        "solver": res.method,
        "tol": a.tol,
    }
    _emit(_json(report), a.out)
    if a.csv:
        n = 2 ** (space.R + 4)
        x = (np.arange(n) + 0.5) / n
        fx = np.real(f(x))
        gx = np.real(evaluate_reconstruction(space, res.coeffs, x))
        rows = [{"x": xi, "f": u, "f_tilde": v, "abs_error": abs(u - v)} for xi, u, v in zip(x, fx, gx)]
        _emit(rows_to_csv(rows), a.csv)
    if a.dump_matrix:
        _emit(matrix_csv(A, scheme, space), a.dump_matrix)


def cmd_constants(a):
    scheme = scheme_from_args(a)
    space = space_from_args(a)
    delta = None
    if scheme.generator.get("family") == "log" and not a.scheme_file:
        delta = a.delta
    rep = cst.constants_report(scheme, space, delta=delta, c2_tol=a.tol, cap=a.cap, z_values=a.z)
    _emit(rep.to_json() + "\n", a.out)
    if not rep.c1 > 0:
        raise cst.InstabilityError("C1 vanishes: the reconstruction is unstable")


def cmd_table(a):
    n = a.number
    if n == 1:
        fams = tuple(a.family or ["haar"])
        rmax = a.R or 10
        rows = exps.table1(fams, range(5, rmax + 1))
    elif n == 2:
        fams = tuple(a.family or ["haar", "db4"])
        rows = exps.table2(fams, R=a.R or 6, seed=a.seed)
    elif n == 3:
        rows = exps.table3(seed=a.seed)
    else:
        rows = exps.table4()
    _emit(rows_to_csv(rows), a.out)


def cmd_compare_gridding(a):
    rows, samples = exps.compare_gridding(a.K, a.eps, a.eta, a.R, a.seed, a.signal)
    _emit(rows_to_csv(rows), a.out)
    if a.samples:
        keys = list(samples)
        table = [dict(zip(keys, vals)) for vals in zip(*(samples[k] for k in keys))]
        _emit(rows_to_csv(table), a.samples)


COMMANDS = {
    "scheme": cmd_scheme,
    "reconstruct": cmd_reconstruct,
    "constants": cmd_constants,
    "table": cmd_table,
    "compare-gridding": cmd_compare_gridding,
}


def main(argv=None):
    try:
        args = parse_args(sys.argv[1:] if argv is None else argv)
        COMMANDS[args.command](args)
    except SystemExit as exc:  # argparse
        return int(exc.code or 0)
    except (np.linalg.LinAlgError, ArithmeticError, MemoryError, QuadratureError) as exc:
        print(f"nugs: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValueError, KeyError, TypeError) as exc:
        print(f"nugs: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
