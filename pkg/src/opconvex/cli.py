"""``opconvex`` command line.

Exit codes: 0 when every report is PASS or REJECTED, 1 on any FAIL,
2 on configuration errors.
"""

from __future__ import annotations

import argparse
import logging
import sys

from . import families as fm
from . import functionals as fn
from . import inequalities as iq
from .harness import CHECKS, ConfigError, SweepConfig, run_sweep, summarize
from .reports import emit_report, exit_status
from .repro import CLAIMS, DEFAULT_SEED, run_claim

log = logging.getLogger("opconvex")


def _floats(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of numbers, got {text!r}") from None


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--family", default="bernstein")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--order", type=int, default=None)


def _output(p: argparse.ArgumentParser) -> None:
    p.add_argument("--output", default=None)
    p.add_argument("--format", choices=("csv", "jsonl"), default="csv")


def _checks(p: argparse.ArgumentParser) -> None:
    _common(p)
    _output(p)
    p.add_argument("--functional", default="dirac")
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--xs", type=_floats, default=None)
    p.add_argument("--x", type=float, default=None)
    p.add_argument("--y", type=float, default=None)
    p.add_argument("--f", default="e2", help="comma-separated test function names")
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--tail-target", type=float, default=None)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="opconvex", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("coeffs", help="weights a_{n,k}(x)")
    _common(p)
    p.add_argument("--x", type=float, required=True)

    p = sub.add_parser("beta", help="beta_{n,k}(x,y) and its sign verdict")
    _common(p)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--y", type=float, required=True)
    p.add_argument("--tol", type=float, default=None)

    p = sub.add_parser("em", help="E_m or its (z-1)^power quotient and sign verdict")
    _common(p)
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--xs", type=_floats, required=True)
    p.add_argument("--power", type=int, choices=(0, 1, 2), default=2)
    p.add_argument("--tol", type=float, default=None)

    for name in ("check-a", "check-cm", "check-bm", "jensen"):
        _checks(sub.add_parser(name, help=f"{name} reports"))

    p = sub.add_parser("sweep", help="run a JSON sweep config")
    p.add_argument("--config", default=None)
    p.add_argument("--family", action="append", default=None)
    p.add_argument("--functional", action="append", default=None)
    p.add_argument("--quantity", action="append", default=None, choices=("A", "C_m", "B_m", "jensen"))
    p.add_argument("--n", type=int, action="append", default=None)
    p.add_argument("--m", type=int, action="append", default=None)
    p.add_argument("--f", default=None)
    p.add_argument("--grid", type=_floats, default=None, help="start,stop,step")
    p.add_argument("--count", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--order", type=int, default=None)
    p.add_argument("--tail-target", type=float, default=None)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--output", default=None)
    p.add_argument("--format", choices=("csv", "jsonl"), default=None)

    p = sub.add_parser("repro", help="run the canned scenario for one claim")
    p.add_argument("--claim", choices=sorted(CLAIMS), required=True)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    _output(p)
    return ap


def _print_series(coeffs, trailer: str) -> None:
    print("k,coefficient")
    for k, c in enumerate(coeffs):
        print(f"{k},{float(c)!r}")
    print(trailer)


def _cmd_coeffs(a) -> int:
    fam = fm.parse_family(a.family)
    N = fm.default_order(fam, a.n, a.x) if a.order is None else a.order
    _print_series(fm.coefficients(fam, a.n, a.x, N), f"tail_mass,{fm.tail_mass(fam, a.n, a.x, N)!r}")
    return 0


def _cmd_beta(a) -> int:
    fam = fm.parse_family(a.family)
    q = iq.beta_series(fam, a.n, a.x, a.y, a.order)
    s = iq.classify_signs(q.coeffs, a.tol or iq.default_tol(fam))
    _print_series(q.coeffs, f"verdict,{s.verdict}")
    return 0


def _cmd_em(a) -> int:
    fam = fm.parse_family(a.family)
    if len(a.xs) != a.m:
        raise ConfigError(f"--xs has {len(a.xs)} values but --m is {a.m}")
    tol = a.tol or iq.default_tol(fam)
    if a.power == 0:
        e = iq.em_series(fam, a.n, a.m, a.xs, a.order)
        s = iq.classify_signs(e.coeffs, tol)
        coeffs = e.coeffs
    else:
        q, s = iq.em_quotient(fam, a.n, a.m, a.xs, a.order, power=a.power, tol=tol)
        coeffs = q.coeffs
    _print_series(coeffs, f"verdict,{s.verdict}")
    return 0


def _cmd_check(a) -> int:
    fam = fm.parse_family(a.family)
    A = fn.parse_functional(a.functional)
    fs = [fn.test_function(name) for name in a.f.split(",") if name.strip()]
    reports = []
    for f in fs:
        if a.command == "check-a":
            if a.xs is not None and len(a.xs) == 2:
                x, y = a.xs
            elif a.x is not None and a.y is not None:
                x, y = a.x, a.y
            else:
                raise ConfigError("check-a needs --x and --y (or --xs x,y)")
            reports.append(CHECKS["A"](fam, A, a.n, f, x, y, a.order, a.tol, a.tail_target))
        else:
            if a.xs is None or len(a.xs) != a.m:
                raise ConfigError(f"--xs must list exactly --m={a.m} points")
            key = {"check-cm": "C_m", "check-bm": "B_m", "jensen": "jensen"}[a.command]
            reports.append(CHECKS[key](fam, A, a.n, a.m, f, a.xs, a.order, a.tol, a.tail_target))
    _emit(reports, a.format, a.output)
    return exit_status(reports)


def _sweep_config(a) -> SweepConfig:
    cfg = SweepConfig.from_json(a.config) if a.config else SweepConfig()
    over = {
        "families": a.family, "functionals": a.functional, "quantities": a.quantity,
        "n_values": a.n, "m_values": a.m, "order": a.order, "tail_target": a.tail_target,
        "tol": a.tol, "workers": a.workers, "output": a.output, "format": a.format,
    }
    for k, v in over.items():
        if v is not None:
            setattr(cfg, k, v)
    if a.f is not None:
        cfg.functions = [s for s in a.f.split(",") if s.strip()]
    if a.grid is not None:
        if len(a.grid) != 3:
            raise ConfigError("--grid takes start,stop,step")
        cfg.grid, cfg.random = dict(zip(("start", "stop", "step"), a.grid)), None
    if a.count is not None or a.seed is not None:
        r = dict(cfg.random or {})
        if a.count is not None:
            r["count"] = a.count
        if a.seed is not None:
            r["seed"] = a.seed
        cfg.random, cfg.grid = r, None
    if cfg.grid is None and cfg.random is None:
        cfg.grid = {"start": 0.0, "stop": 1.0, "step": 0.1}
    return cfg


def _cmd_sweep(a) -> int:
    cfg = _sweep_config(a)
    cfg.validate()
    reports = run_sweep(cfg)
    _emit(reports, cfg.format, cfg.output)
    for q, s in sorted(summarize(reports).items()):
        print(f"# {q}: count={s['count']} fail={s['fail']} rejected={s['rejected']} "
              f"min={s['min']!r} at {s['argmin']}", file=sys.stderr)
    return exit_status(reports)


def _cmd_repro(a) -> int:
    reports = run_claim(a.claim, a.seed)
    _emit(reports, a.format, a.output)
    s = summarize(reports)
    fails = sum(v["fail"] for v in s.values())
    print(f"# claim {a.claim}: {len(reports)} reports, {fails} FAIL", file=sys.stderr)
    return exit_status(reports)


def _emit(reports, fmt, output) -> None:
    if output:
        emit_report(reports, fmt, output)
    else:
        emit_report(reports, fmt, sys.stdout)


COMMANDS = {
    "coeffs": _cmd_coeffs,
    "beta": _cmd_beta,
    "em": _cmd_em,
    "check-a": _cmd_check,
    "check-cm": _cmd_check,
    "check-bm": _cmd_check,
    "jensen": _cmd_check,
    "sweep": _cmd_sweep,
    "repro": _cmd_repro,
}


def main(argv=None) -> int:
    ap = build_parser()
    try:
        a = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    logging.basicConfig(level=logging.DEBUG if a.verbose else logging.WARNING, format="%(name)s: %(message)s")
    try:
        return COMMANDS[a.command](a)
    except (ConfigError, ValueError) as err:
        print(f"opconvex: error: {err}", file=sys.stderr)
        return 2
    except OSError as err:
        print(f"opconvex: I/O error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
