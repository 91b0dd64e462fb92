"""Command-line front end.

Subcommands: ``asym``, ``sweep``, ``simulate``, ``compare`` and ``optimize``.
Exit codes: 0 success, 1 usage error, 2 numeric-domain error.
"""

import argparse
import csv
import io
import json
import math
import sys
from typing import List, Optional

import numpy as np

from . import __version__
from .asymptotic import AsymptoticParams, LN2, rho
from .channel import SystemConfig
from .errors import InvalidArgumentError, NumericDomainError, SingularMatrixError
from .selection import s_opt_finite, sbar_opt
from .svgplot import line_plot
from .zfbf import zfbf_throughput_mc
from .zfdpc import throughput_mc

EXIT_USAGE = 1
EXIT_NUMERIC = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def fmt(x) -> str:
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    return format(float(x), ".17g")


def _db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def _powers(args) -> List[float]:
    if args.p is not None:
        return list(args.p)
    return [_db_to_linear(v) for v in args.p_db]


def _scale(units: str) -> float:
    return 1.0 if units == "bits" else LN2


def _write_csv(path: Optional[str], header, rows) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) if isinstance(v, (float, int, np.floating, np.integer)) else v for v in row])
    text = buf.getvalue()
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _add_power(p: argparse.ArgumentParser, multi: bool, required: bool = True):
    g = p.add_mutually_exclusive_group(required=required)
    nargs = "+" if multi else None
    g.add_argument("--p", type=float, nargs=nargs, help="total transmit power (linear)")
    g.add_argument("--p-db", type=float, nargs=nargs, help="total transmit power in dB")


def _add_units(p):
    p.add_argument("--units", choices=("bits", "nats"), default="bits")


def cmd_asym(args) -> int:
    P = args.p if args.p is not None else _db_to_linear(args.p_db)
    val = rho(AsymptoticParams(P, args.sbar, args.rbar), args.tol) * _scale(args.units)
    print(fmt(val))
    return 0


def cmd_sweep(args) -> int:
    powers = sorted(_powers(args))
    rbars = sorted(args.rbar)
    scale = _scale(args.units)
    rows = []
    if args.optimize:
        for P in powers:
            for rb in rbars:
                sb, val = sbar_opt(P, rb, args.opt_tol)
                rows.append((P, rb, sb, val * scale))
    else:
        if not args.sbar:
            raise UsageError("sweep needs --sbar values or --optimize")
        for P in powers:
            for rb in rbars:
                for sb in sorted(args.sbar):
                    rows.append((P, rb, sb, rho(AsymptoticParams(P, sb, rb), args.tol) * scale))
    _write_csv(args.out, ["P", "rbar", "sbar", f"rho_{args.units}"], rows)
    if args.svg:
        series = {}
        for P, rb, sb, val in rows:
            if args.optimize:
                key, x, y = f"rbar={fmt(rb)}", 10 * math.log10(P) if P > 0 else -math.inf, sb
            else:
                key, x, y = f"P={fmt(P)}, rbar={fmt(rb)}", sb, val
            series.setdefault(key, ([], []))
            series[key][0].append(x)
            series[key][1].append(y)
        if args.optimize:
            line_plot(series, args.svg, "P (dB)", "optimal user fraction", "optimal user fraction vs P")
        else:
            line_plot(series, args.svg, "user fraction", f"throughput ({args.units})", "asymptotic throughput")
    return 0


def _config_dict(cfg: SystemConfig) -> dict:
    return {"K": cfg.K, "P": cfg.P, "s": cfg.s, "r": None if math.isinf(cfg.r) else cfg.r}


def cmd_simulate(args) -> int:
    P = args.p if args.p is not None else _db_to_linear(args.p_db)
    r = math.inf if args.perfect_csit else args.r
    if r is None:
        raise UsageError("simulate needs --r or --perfect-csit")
    s_values = args.s or list(range(1, args.K + 1))
    scale = _scale(args.units)
    rows, summaries = [], []
    for s in s_values:
        cfg = SystemConfig(args.K, P, s, r)
        if args.scheme == "zfdpc":
            est = throughput_mc(cfg, args.trials, args.inner, args.seed, workers=args.workers)
        else:
            est = zfbf_throughput_mc(cfg, args.trials, args.seed, workers=args.workers)
        rows.append((args.scheme, cfg.K, "inf" if math.isinf(r) else r, s, P,
                     est.mean * scale, est.stderr * scale, est.max_interference))
        summaries.append({
            "config": _config_dict(cfg) | {"trials": args.trials,
                                           "inner": args.inner if args.scheme == "zfdpc" else None,
                                           "units": args.units},
            "seed": args.seed,
            "scheme": args.scheme,
            "mean": est.mean * scale,
            "stderr": est.stderr * scale,
            "per_user": [float(v) * scale for v in est.per_user],
            "max_interference": est.max_interference,
            "version": __version__,
        })
    _write_csv(args.out, ["scheme", "K", "r", "s", "P", f"mean_{args.units}", "stderr", "max_interference"],
               rows)
    if args.json:
        with open(args.json, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(summaries, fh, indent=2, sort_keys=True)
            fh.write("\n")
    if args.svg:
        line_plot({args.scheme: ([row[3] for row in rows], [row[5] for row in rows])}, args.svg,
                  "number of active users s", f"throughput ({args.units})",
                  f"K={args.K}, P={fmt(P)}")
    return 0


def compare_rows(K: int, rbar: float, powers_db, trials: int, seed: int, dpc: str = "mc",
                 inner: int = 50, floor: float = 0.02, workers: int = 1):
    """Percentage throughput improvement of ZFDPC over the best-``s`` ZFBF, per power.

    Rows are ``(P_dB, impr_pct, stderr, flag)``; a row is flagged instead of
    divided when the ZFBF throughput does not exceed ``floor`` bits. With
    ``dpc="mc"`` both schemes are simulated at the same ``K``; the asymptotic
    side leaves out finite-``K`` gains that the ZFBF simulation keeps.
    """
    r = rbar * K
    out = []
    for pdb in powers_db:
        P = _db_to_linear(pdb)
        bf = [zfbf_throughput_mc(SystemConfig(K, P, s, r), trials, seed, workers)
              for s in range(1, K + 1)]
        best_bf = max(bf, key=lambda e: e.mean)
        if dpc == "asymptotic":
            _, d_mean = sbar_opt(P, rbar)
            d_se = 0.0
        else:
            s_dpc = s_opt_finite(K, r, P)
            est = throughput_mc(SystemConfig(K, P, s_dpc, r), trials, inner, seed, workers)
            d_mean, d_se = est.mean, est.stderr
        if not best_bf.mean > floor:
            out.append((pdb, math.nan, math.nan, "zfbf_below_floor"))
            continue
        impr = 100.0 * (d_mean - best_bf.mean) / best_bf.mean
        se = 100.0 * math.hypot(d_se / best_bf.mean, d_mean * best_bf.stderr / best_bf.mean ** 2)
        out.append((pdb, impr, se, ""))
    return out


def cmd_compare(args) -> int:
    powers_db = args.p_db if args.p_db is not None else [10 * math.log10(p) for p in args.p]
    rows = compare_rows(args.K, args.rbar, powers_db, args.trials, args.seed, args.dpc,
                        args.inner, args.floor, args.workers)
    _write_csv(args.out, ["P_dB", "impr_pct", "stderr", "flag"], rows)
    if args.svg:
        line_plot({f"rbar={fmt(args.rbar)}": ([r[0] for r in rows], [r[1] for r in rows])}, args.svg,
                  "P (dB)", "improvement (%)", f"ZFDPC over ZFBF, K={args.K}")
    return 0


def cmd_optimize(args) -> int:
    scale = _scale(args.units)
    rows = []
    header = ["P", "rbar", "sbar_opt", f"rho_opt_{args.units}"]
    if args.K is not None:
        header += ["K", "r", "s_opt"]
    for P in _powers(args):
        if args.K is not None:
            if args.r is None:
                raise UsageError("--K needs --r")
            rb = args.r / args.K
        elif args.rbar is not None:
            rb = args.rbar
        else:
            raise UsageError("optimize needs --rbar or --K/--r")
        sb, val = sbar_opt(P, rb, args.tol)
        row = [P, rb, sb, val * scale]
        if args.K is not None:
            row += [args.K, args.r, s_opt_finite(args.K, args.r, P, args.tol)]
        rows.append(row)
    _write_csv(args.out, header, rows)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="dpcbc", description="ZFDPC throughput of the finite-feedback broadcast channel")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("asym", help="asymptotic throughput for one (P, sbar, rbar)")
    _add_power(p, multi=False)
    p.add_argument("--sbar", type=float, required=True)
    p.add_argument("--rbar", type=float, required=True)
    p.add_argument("--tol", type=float, default=1e-8)
    _add_units(p)
    p.set_defaults(func=cmd_asym)

    p = sub.add_parser("sweep", help="asymptotic throughput over a grid (CSV)")
    _add_power(p, multi=True)
    p.add_argument("--rbar", type=float, nargs="+", required=True)
    p.add_argument("--sbar", type=float, nargs="+")
    p.add_argument("--optimize", action="store_true", help="report the optimal sbar per (P, rbar)")
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--opt-tol", type=float, default=1e-4)
    p.add_argument("--out", help="CSV path (default stdout)")
    p.add_argument("--svg", help="also write an SVG plot")
    _add_units(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("simulate", help="Monte Carlo throughput at finite K")
    p.add_argument("--K", type=int, required=True)
    p.add_argument("--r", type=float, help="feedback bits per user")
    p.add_argument("--perfect-csit", action="store_true")
    p.add_argument("--s", type=int, nargs="+", help="numbers of active users (default 1..K)")
    _add_power(p, multi=False)
    p.add_argument("--trials", type=int, default=500)
    p.add_argument("--inner", type=int, default=200)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--scheme", choices=("zfdpc", "zfbf"), default="zfdpc")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", help="CSV path (default stdout)")
    p.add_argument("--json", help="JSON summary path")
    p.add_argument("--svg", help="also write an SVG plot")
    _add_units(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("compare", help="percentage improvement of ZFDPC over ZFBF")
    p.add_argument("--K", type=int, required=True)
    p.add_argument("--rbar", type=float, required=True)
    _add_power(p, multi=True)
    p.add_argument("--trials", type=int, default=500)
    p.add_argument("--inner", type=int, default=50)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--dpc", choices=("mc", "asymptotic"), default="mc",
                   help="ZFDPC side from Monte Carlo at K with s_opt users (default), "
                        "or from the asymptotic formula at the optimal user fraction")
    p.add_argument("--floor", type=float, default=0.02,
                   help="flag rows whose ZFBF throughput (bits) does not exceed this")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", help="CSV path (default stdout)")
    p.add_argument("--svg", help="also write an SVG plot")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("optimize", help="optimal user fraction and finite-K user count")
    _add_power(p, multi=True)
    p.add_argument("--rbar", type=float)
    p.add_argument("--K", type=int)
    p.add_argument("--r", type=float)
    p.add_argument("--tol", type=float, default=1e-4)
    p.add_argument("--out", help="CSV path (default stdout)")
    _add_units(p)
    p.set_defaults(func=cmd_optimize)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, InvalidArgumentError) as exc:
        print(f"dpcbc {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NumericDomainError, SingularMatrixError, FloatingPointError, OverflowError) as exc:
        print(f"dpcbc {args.command}: numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"dpcbc {args.command}: cannot write output: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
