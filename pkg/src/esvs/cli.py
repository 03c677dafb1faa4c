"""Command-line front end: ``esvs <subcommand> [options]``.

Exit codes: 0 success, 1 usage or invalid input, 2 numerical failure
(non-convergence, insufficient Fock dimension, overflow), 3 verification
failure. Data go to stdout or ``--out``; diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import metrics, oracle, verify
from .errors import (
    DegreeOverflowError,
    EsvsError,
    NonConvergenceError,
    ZeroMeanPhotonNumberError,
)
from .optimize import optimal_fidelity
from .reports import PhasePoint
from .states import EsvsParams, PssvsParams

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_VERIFY = 0, 1, 2, 3
SIG_DIGITS = 9


class UsageError(Exception):
    pass


def fmt(x) -> str:
    """Fixed 9-significant-digit rendering used for every CSV cell."""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if x == 0:
        return "0"
    return f"{x:.{SIG_DIGITS}g}"


def _round(obj):
    """Round every float in a nested structure to 9 significant digits."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return float(f"{x:.{SIG_DIGITS}g}") if math.isfinite(x) else x
    if isinstance(obj, dict):
        return {str(k): _round(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_round(v) for v in obj]
    raise TypeError(f"cannot encode {type(obj).__name__}")


@dataclass
class MetricReport:
    """Machine-readable result; floats are stored already rounded, so JSON round-trips exactly."""

    metric: str
    params: dict
    method: str
    values: object
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.params = _round(self.params)
        self.values = _round(self.values)
        meta = {"fock_dim": None, "tolerance": None, "terms_used": None, "warnings": []}
        meta.update(self.meta)
        self.meta = _round(meta)

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "MetricReport":
        return cls(**json.loads(text))


# --------------------------------------------------------------------------
# argument helpers


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _grid_spec(text: str) -> np.ndarray:
    """``start:stop:count`` (inclusive linspace) or a comma-separated list."""
    try:
        if ":" in text:
            start, stop, count = text.split(":")
            count = int(count)
            if count < 1:
                raise ValueError
            return np.linspace(float(start), float(stop), count)
        return np.array([float(t) for t in text.split(",")])
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad grid spec {text!r}; use start:stop:count or a,b,c") from None


def _r_values(args) -> tuple[np.ndarray, bool]:
    """Returns the r values and whether a sweep was requested."""
    sweep = (args.r_from, args.r_to, args.r_steps)
    if args.r is not None:
        if any(v is not None for v in sweep):
            raise UsageError("give either --r or --r-from/--r-to/--r-steps, not both")
        return np.array([args.r]), False
    if any(v is None for v in sweep):
        raise UsageError("give --r or all of --r-from, --r-to, --r-steps")
    if args.r_steps < 1:
        raise UsageError("--r-steps must be positive")
    return np.linspace(args.r_from, args.r_to, args.r_steps), True


def _add_r(p):
    p.add_argument("--r", type=float)
    p.add_argument("--r-from", type=float)
    p.add_argument("--r-to", type=float)
    p.add_argument("--r-steps", type=int)


def _pmap(fn, items, threads: int) -> list:
    """Order-preserving map, threaded when ``threads > 1``."""
    items = list(items)
    if threads <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _method_name(args) -> str:
    return "oracle" if args.method == "oracle" else "closed_form"


def _fock_dim_meta(args, r: float, n: int):
    return oracle.default_dim(r, n) if args.method == "oracle" else None


# --------------------------------------------------------------------------
# output


@dataclass
class Table:
    columns: list
    rows: list


def _emit(args, report: MetricReport, table: Table | None, default_format: str) -> None:
    kind = args.format or default_format
    if kind == "csv" and table is not None:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(table.columns)
        for row in table.rows:
            writer.writerow([fmt(v) for v in row])
        text = buf.getvalue()
    elif kind == "csv":
        values = report.values if isinstance(report.values, dict) else {"value": report.values}
        flat = {k: v for k, v in values.items() if not isinstance(v, (list, dict))}
        text = ",".join(flat) + "\n" + ",".join(fmt(v) for v in flat.values()) + "\n"
    else:
        text = report.to_json()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _table_values(table: Table) -> dict:
    return {"columns": table.columns, "rows": table.rows}


# --------------------------------------------------------------------------
# subcommands


def cmd_wigner(args) -> int:
    p = EsvsParams(args.r, args.n)
    if args.steps < 2:
        raise UsageError("--steps must be at least 2")
    if not (args.qmin < args.qmax and args.pmin < args.pmax):
        raise UsageError("need qmin < qmax and pmin < pmax")
    if args.method == "oracle":
        qs = np.linspace(args.qmin, args.qmax, args.steps)
        ps = np.linspace(args.pmin, args.pmax, args.steps)
        v = oracle.esvs_vector(p)
        rows = _pmap(lambda q: [oracle.oracle_wigner(v, PhasePoint(q, pm)) for pm in ps], qs, args.threads)
        w = np.array(rows)
    else:
        grid = metrics.wigner_grid(p, (args.qmin, args.qmax), (args.pmin, args.pmax), args.steps)
        qs, ps, w = grid.q, grid.p, grid.w
    table = Table(["q", "p", "w"], [[q, pm, w[i, j]] for i, q in enumerate(qs) for j, pm in enumerate(ps)])
    report = MetricReport(
        "wigner",
        {"n": args.n, "r": args.r, "qmin": args.qmin, "qmax": args.qmax, "pmin": args.pmin,
         "pmax": args.pmax, "steps": args.steps},
        _method_name(args),
        {"q": qs, "p": ps, "w": w},
        {"fock_dim": _fock_dim_meta(args, args.r, args.n)},
    )
    _emit(args, report, table, "csv")
    return EXIT_OK


def cmd_pnd(args) -> int:
    p = EsvsParams(args.r, args.n)
    if args.mmax < 0:
        raise UsageError("--mmax must be non-negative")
    ms = range(args.mmax + 1)
    if args.method == "oracle":
        v = oracle.esvs_vector(p)
        probs = [oracle.oracle_pnd(v, m) for m in ms]
    else:
        probs = [metrics.pnd(p, m) for m in ms]
    table = Table(["m", "p"], [[m, pr] for m, pr in zip(ms, probs)])
    report = MetricReport(
        "pnd",
        {"n": args.n, "r": args.r, "mmax": args.mmax},
        _method_name(args),
        _table_values(table),
        {"fock_dim": _fock_dim_meta(args, args.r, args.n)},
    )
    _emit(args, report, table, "csv")
    return EXIT_OK


def _scan(args, metric: str, columns: list, compute, default_scalar: str = "json") -> int:
    """Evaluate ``compute(EsvsParams) -> list`` over every (n, r) pair."""
    rs, is_sweep = _r_values(args)
    pairs = [(n, float(r)) for n in args.n for r in rs]
    results = _pmap(lambda nr: compute(EsvsParams(nr[1], nr[0])), pairs, args.threads)
    table = Table(["n", "r"] + columns, [[n, r] + res for (n, r), res in zip(pairs, results)])
    if not is_sweep and len(args.n) == 1:
        values = dict(zip(columns, results[0]))
        default = default_scalar
    else:
        values = _table_values(table)
        default = "csv"
    params = {"n": args.n}
    params.update({"r": args.r} if not is_sweep else {"r_from": args.r_from, "r_to": args.r_to, "r_steps": args.r_steps})
    if hasattr(args, "tol"):
        params.update({"tol": args.tol, "max_terms": args.max_terms})
    dims = sorted({oracle.default_dim(r, n) for n, r in pairs}) if args.method == "oracle" else None
    meta = {"fock_dim": dims[-1] if dims else None}
    if metric == "nongauss" and args.method != "oracle":
        meta.update({"tolerance": args.tol, "terms_used": max(int(res[5]) for res in results)})
    report = MetricReport(metric, params, _method_name(args), values, meta)
    _emit(args, report, table, default)
    return EXIT_OK


def cmd_mandel_q(args) -> int:
    if args.method == "oracle":
        fn = lambda p: [oracle.oracle_mandel_q(oracle.esvs_vector(p))]
    else:
        fn = lambda p: [metrics.mandel_q(p)]
    return _scan(args, "mandel-q", ["q"], fn)


QUAD_FIELDS = ["var_x", "var_y", "product", "snr_x", "snr_y", "snr_xy", "m_val", "n_val"]


def cmd_quadrature(args) -> int:
    def fn(p):
        rep = oracle.oracle_quadrature(oracle.esvs_vector(p)) if args.method == "oracle" else metrics.quadrature(p)
        return [getattr(rep, f) for f in QUAD_FIELDS]

    return _scan(args, "quadrature", QUAD_FIELDS, fn)


NG_FIELDS = ["delta", "varsigma", "nbar", "kappa", "mu_tau", "terms_used", "tail_bound"]


def cmd_nongauss(args) -> int:
    if args.tol <= 0 or args.max_terms < 16:
        raise UsageError("--tol must be positive and --max-terms at least 16")

    def fn(p):
        if args.method == "oracle":
            rep = oracle.oracle_nongauss(oracle.esvs_vector(p))
        else:
            rep = metrics.non_gaussianity(p, args.tol, args.max_terms)
        return [rep.delta, rep.ref.varsigma, rep.ref.nbar, rep.kappa, rep.mu_tau, rep.terms_used, rep.tail_bound]

    return _scan(args, "nongauss", NG_FIELDS, fn)


def cmd_fidelity(args) -> int:
    e, s = EsvsParams(args.r, args.n), PssvsParams(args.lam, args.m)
    value = oracle.oracle_fidelity(e, s) if args.method == "oracle" else metrics.fidelity(e, s)
    dim = max(oracle.default_dim(args.r, args.n), oracle.default_dim(args.lam, args.m))
    report = MetricReport(
        "fidelity",
        {"n": args.n, "m": args.m, "lambda": args.lam, "r": args.r},
        _method_name(args),
        {"f": value},
        {"fock_dim": dim if args.method == "oracle" else None},
    )
    _emit(args, report, None, "json")
    return EXIT_OK


def cmd_fidelity_opt(args) -> int:
    if args.method == "oracle":
        raise UsageError("fidelity-opt supports only --method closed")
    res = optimal_fidelity(args.n, args.m, args.lam, args.r_lo, args.r_hi, args.tol)
    warnings = []
    if res.boundary:
        warnings.append("maximum lies on the bracket boundary")
    if res.degenerate:
        warnings.append("n + m is odd: fidelity vanishes identically")
    report = MetricReport(
        "fidelity-opt",
        {"n": args.n, "m": args.m, "lambda": args.lam, "r_lo": args.r_lo, "r_hi": args.r_hi, "tol": args.tol},
        "closed_form",
        {"r_star": res.r_star, "f_star": res.f_star, "evals": res.evals, "bracket": list(res.bracket),
         "boundary": res.boundary, "degenerate": res.degenerate},
        {"tolerance": args.tol, "warnings": warnings},
    )
    for w in warnings:
        print(f"warning: {w}", file=sys.stderr)
    _emit(args, report, None, "json")
    return EXIT_OK


def cmd_fidelity_sweep(args) -> int:
    lams, rs = args.lambda_grid, args.r_grid
    for x in np.concatenate([lams, rs]):
        if not math.isfinite(x) or abs(x) < 1e-6:
            raise UsageError("grid values must be finite with |x| >= 1e-6")
    if args.method == "oracle":
        fn = lambda pair: oracle.oracle_fidelity(EsvsParams(pair[1], args.n), PssvsParams(pair[0], args.m))
    else:
        fn = lambda pair: metrics.fidelity(EsvsParams(pair[1], args.n), PssvsParams(pair[0], args.m))
    pairs = [(float(lam), float(r)) for lam in lams for r in rs]
    values = _pmap(fn, pairs, args.threads)
    table = Table(["lambda", "r", "f"], [[lam, r, f] for (lam, r), f in zip(pairs, values)])
    report = MetricReport(
        "fidelity-sweep",
        {"n": args.n, "m": args.m, "lambda_grid": lams, "r_grid": rs},
        _method_name(args),
        _table_values(table),
    )
    _emit(args, report, table, "csv")
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        rep = verify.run(args.suite, args.tol, args.fock_dim)
    except EsvsError as exc:
        print(f"verification could not complete: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    text = json.dumps(rep.to_dict(), indent=2) + "\n" if args.format == "json" else rep.text()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if not rep.passed:
        print("verification failed", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--method", choices=("closed", "oracle"), default="closed")
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("--out", metavar="PATH")
    common.add_argument("--threads", type=int, default=os.cpu_count() or 1)

    parser = _Parser(prog="esvs", description="Photon-added squeezed vacuum state metrics.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("wigner", parents=[common], help="Wigner function on a grid")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=float, required=True)
    for name in ("qmin", "qmax", "pmin", "pmax"):
        p.add_argument(f"--{name}", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.set_defaults(func=cmd_wigner)

    p = sub.add_parser("pnd", parents=[common], help="photon-number distribution")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--mmax", type=int, required=True)
    p.set_defaults(func=cmd_pnd)

    for name, func, helptext in (
        ("mandel-q", cmd_mandel_q, "Mandel Q parameter"),
        ("quadrature", cmd_quadrature, "quadrature variances and SNR"),
        ("nongauss", cmd_nongauss, "Hilbert-Schmidt non-Gaussianity"),
    ):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--n", type=int, nargs="+", required=True)
        _add_r(p)
        if name == "nongauss":
            p.add_argument("--tol", type=float, default=1e-12)
            p.add_argument("--max-terms", type=int, default=4096)
        p.set_defaults(func=func)

    p = sub.add_parser("fidelity", parents=[common], help="fidelity with a photon-subtracted state")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--r", type=float, required=True)
    p.set_defaults(func=cmd_fidelity)

    p = sub.add_parser("fidelity-opt", parents=[common], help="maximise fidelity over r")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--r-lo", type=float)
    p.add_argument("--r-hi", type=float)
    p.add_argument("--tol", type=float, default=1e-6)
    p.set_defaults(func=cmd_fidelity_opt)

    p = sub.add_parser("fidelity-sweep", parents=[common], help="fidelity table over (lambda, r)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--lambda-grid", type=_grid_spec, required=True, metavar="SPEC")
    p.add_argument("--r-grid", type=_grid_spec, required=True, metavar="SPEC")
    p.set_defaults(func=cmd_fidelity_sweep)

    p = sub.add_parser("verify", parents=[common], help="closed form vs Fock-space oracle")
    p.add_argument("--suite", choices=("all",) + verify.SUITES, default="all")
    p.add_argument("--fock-dim", type=int)
    p.add_argument("--tol", type=float, default=verify.DEFAULT_TOL)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.threads < 1:
            raise UsageError("--threads must be at least 1")
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ZeroMeanPhotonNumberError, DegreeOverflowError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NonConvergenceError as exc:
        print(f"non-convergence: {exc} (partial={exc.partial}, bound={exc.bound})", file=sys.stderr)
        return EXIT_NUMERIC
    except EsvsError as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, TypeError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
