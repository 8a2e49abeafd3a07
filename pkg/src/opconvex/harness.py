"""Checks that turn functional values into verdicts, batch sweeps, and the
canned reproduction scenarios behind ``opconvex repro``."""

from __future__ import annotations

import itertools
import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from typing import Sequence

import numpy as np

from . import families as fm
from . import functionals as fn
from . import inequalities as iq
from . import values as vals
from .reports import FAIL, PASS, CheckReport, rejected

log = logging.getLogger(__name__)

QUANTITIES = ("A", "C_m", "B_m", "jensen")
RANDOM_CAP = 4.0


class ConfigError(ValueError):
    pass


# ------------------------------------------------------------------ verdicts

def inequality_verdict(value: float, tail_bound: float, tol: float, sense: str) -> str:
    """PASS / FAIL / REJECTED(inconclusive_tail) for value >= 0, <= 0 or == 0.

    PASS needs the claim to hold for every value within tail_bound;
    FAIL needs it to break for every such value.
    """
    if not math.isfinite(value) or not math.isfinite(tail_bound):
        return rejected("inconclusive_tail")
    lo, hi = value - tail_bound, value + tail_bound
    if sense == ">=":
        ok, broken = lo >= -tol, hi < -tol
    elif sense == "<=":
        ok, broken = hi <= tol, lo > tol
    elif sense == "==0":
        ok, broken = abs(value) + tail_bound <= tol, abs(value) - tail_bound > tol
    else:
        raise ValueError(f"unknown sense {sense!r}")
    if ok:
        return PASS
    return FAIL if broken else rejected("inconclusive_tail")


def _report(fam, A, n, m, xs, f, quantity, value, tail, tol, verdict, method, detail=""):
    return CheckReport(
        family=fam.name,
        functional=A.name,
        n=int(n),
        m=int(m),
        xs=tuple(float(x) for x in xs),
        f=f.name,
        quantity=quantity,
        value=float(value),
        tail_bound=float(tail),
        tolerance=float(tol),
        verdict=verdict,
        method=method,
        detail=detail,
    )


def _precondition(fam, A, f, den, N, tol):
    """Divided differences of A_t(f) on the grid k/den the functional samples."""
    return fn.divided_difference_condition(A, f, den, max(N, 0), tol)


def _tol(fam, tol):
    return iq.default_tol(fam) if tol is None else tol


def check_a(fam, A, n, f, x, y, N=None, tol=None, tail_target=None) -> CheckReport:
    tol = _tol(fam, tol)
    v = vals.rasa_functional(fam, A, n, f, x, y, N, tail_target)
    dd = _precondition(fam, A, f, 2 * n, v.truncation_order, tol)
    if not dd.ok:
        return _report(fam, A, n, 2, (x, y), f, "divided_difference", dd.min_value, 0.0, tol,
                       rejected("precondition"), vals.DIRECT, f"k={dd.witness_k}")
    return _report(fam, A, n, 2, (x, y), f, "A", v.value, v.tail_bound, tol,
                   inequality_verdict(v.value, v.tail_bound, tol, ">="), v.method)


def check_cm(fam, A, n, m, f, xs, N=None, tol=None, tail_target=None) -> CheckReport:
    tol = _tol(fam, tol)
    v = vals.cm_value(fam, A, n, m, f, xs, N, tail_target)
    dd = _precondition(fam, A, f, m * n, v.truncation_order, tol)
    if not dd.ok:
        return _report(fam, A, n, m, xs, f, "divided_difference", dd.min_value, 0.0, tol,
                       rejected("precondition"), vals.DIRECT, f"k={dd.witness_k}")
    return _report(fam, A, n, m, xs, f, "C_m", v.value, v.tail_bound, tol,
                   inequality_verdict(v.value, v.tail_bound, tol, ">="), v.method)


def check_jensen(fam, A, n, m, f, xs, N=None, tol=None, tail_target=None) -> CheckReport:
    tol = _tol(fam, tol)
    v = vals.jensen_gap(fam, A, n, m, f, xs, N, tail_target)
    dd = _precondition(fam, A, f, m * n, v.truncation_order, tol)
    if not dd.ok:
        return _report(fam, A, n, m, xs, f, "divided_difference", dd.min_value, 0.0, tol,
                       rejected("precondition"), vals.DIRECT, f"k={dd.witness_k}")
    return _report(fam, A, n, m, xs, f, "jensen_gap", v.value, v.tail_bound, tol,
                   inequality_verdict(v.value, v.tail_bound, tol, ">="), v.method)


_EXPECTED_SENSE = {
    iq.ALL_NONNEGATIVE: ">=",
    iq.ALL_NONPOSITIVE: "<=",
    iq.ALL_ZERO: "==0",
}


def check_bm(fam, A, n, m, f, xs, N=None, tol=None, tail_target=None) -> CheckReport:
    """B_m(f) against the sign predicted by the E_m / (z-1)^2 coefficients.

    Guard first: B_m(e_0) and B_m(e_1) must vanish, otherwise the report is
    REJECTED and carries the offending moment as its value.
    """
    tol = _tol(fam, tol)
    xs = [float(x) for x in xs]
    try:
        vals.bm_guard(fam, A, n, m, xs, N)
    except vals.GuardError as err:
        return _report(fam, A, n, m, xs, f, f"B_m({err.moment})", err.value, 0.0, vals.GUARD_TOL,
                       rejected(f"guard:B_m({err.moment})"), vals.DIRECT, str(err))
    if not fam.power_form:
        return _report(fam, A, n, m, xs, f, "B_m", math.nan, 0.0, tol, rejected("power_form"), vals.DIRECT)
    v = vals.bm_value(fam, A, n, m, f, xs, N, tail_target)
    dd = _precondition(fam, A, f, m * n, v.truncation_order, tol)
    if not dd.ok:
        return _report(fam, A, n, m, xs, f, "divided_difference", dd.min_value, 0.0, tol,
                       rejected("precondition"), vals.DIRECT, f"k={dd.witness_k}")
    _, signs = iq.em_quotient(fam, n, m, xs, v.truncation_order, power=2)
    sense = _EXPECTED_SENSE.get(signs.verdict)
    if sense is None:
        return _report(fam, A, n, m, xs, f, "B_m", v.value, v.tail_bound, tol,
                       rejected("sign_condition_mixed"), v.method, str(signs))
    return _report(fam, A, n, m, xs, f, "B_m", v.value, v.tail_bound, tol,
                   inequality_verdict(v.value, v.tail_bound, tol, sense), v.method,
                   f"expected {sense} from {signs.verdict}")


CHECKS = {"A": check_a, "C_m": check_cm, "B_m": check_bm, "jensen": check_jensen}


# ------------------------------------------------------------------ sweeps

@dataclass
class SweepConfig:
    families: list = field(default_factory=lambda: ["bernstein"])
    functionals: list = field(default_factory=lambda: ["dirac"])
    quantities: list = field(default_factory=lambda: ["A"])
    n_values: list = field(default_factory=lambda: [1])
    m_values: list = field(default_factory=lambda: [2])
    grid: dict | None = None  # {"start", "stop", "step"}
    random: dict | None = None  # {"count", "seed"}
    functions: list = field(default_factory=lambda: ["e2"])
    order: int | None = None
    tail_target: float | None = None
    tol: float | None = None
    output: str | None = None
    format: str = "csv"
    workers: int = 1

    @classmethod
    def from_dict(cls, data: dict) -> "SweepConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config fields: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def from_json(cls, path: str) -> "SweepConfig":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))

    def to_dict(self) -> dict:
        return asdict(self)

    def validate(self) -> None:
        try:
            for name in self.families:
                fm.parse_family(name)
            for name in self.functionals:
                fn.parse_functional(name)
            for name in self.functions:
                fn.test_function(name)
        except ValueError as err:
            raise ConfigError(str(err)) from err
        bad = [q for q in self.quantities if q not in QUANTITIES]
        if bad:
            raise ConfigError(f"unknown quantities {bad}; choose from {QUANTITIES}")
        if not self.n_values or any(int(n) < 1 for n in self.n_values):
            raise ConfigError("n_values must be a nonempty list of positive integers")
        if not self.m_values or any(int(m) < 2 for m in self.m_values):
            raise ConfigError("m_values must be a nonempty list of integers >= 2")
        if (self.grid is None) == (self.random is None):
            raise ConfigError("give exactly one of grid or random")
        if self.grid is not None:
            g = self.grid
            if not {"start", "stop", "step"} <= set(g) or not g["step"] > 0 or g["stop"] < g["start"]:
                raise ConfigError("grid needs start <= stop and step > 0")
        if self.random is not None:
            r = self.random
            if "seed" not in r or int(r.get("count", 0)) < 1:
                raise ConfigError("random needs a positive count and an explicit seed")
        if self.tol is not None and not self.tol > 0:
            raise ConfigError("tol must be positive")
        if self.tail_target is not None and not self.tail_target > 0:
            raise ConfigError("tail_target must be positive")
        if self.order is not None and int(self.order) < 0:
            raise ConfigError("order must be nonnegative")
        if self.format not in ("csv", "jsonl"):
            raise ConfigError("format must be csv or jsonl")
        if int(self.workers) < 1:
            raise ConfigError("workers must be >= 1")


def _grid_points(fam, grid) -> list[float]:
    lo, hi = fam.domain
    count = int(math.floor((grid["stop"] - grid["start"]) / grid["step"] + 1e-9)) + 1
    pts = [round(grid["start"] + i * grid["step"], 12) for i in range(count)]
    return [p for p in pts if lo <= p <= hi]


def _tuples(fam, cfg: SweepConfig, k: int, salt: int) -> list[tuple]:
    if cfg.grid is not None:
        pts = _grid_points(fam, cfg.grid)
        return list(itertools.product(pts, repeat=k))
    lo, hi = fam.domain
    hi = min(hi, RANDOM_CAP)
    rng = np.random.default_rng([int(cfg.random["seed"]), salt])
    draws = rng.uniform(lo, hi, size=(int(cfg.random["count"]), k))
    return [tuple(float(v) for v in row) for row in draws]


def _instances(cfg: SweepConfig):
    for fi, fam_name in enumerate(cfg.families):
        fam = fm.parse_family(fam_name)
        for A_name in cfg.functionals:
            for q in cfg.quantities:
                ms = [2] if q == "A" else cfg.m_values
                for n in cfg.n_values:
                    for m in ms:
                        # independent, reproducible streams per (family, n, m)
                        salt = fi * 1_000_003 + int(n) * 1009 + int(m)
                        for xs in _tuples(fam, cfg, m, salt):
                            for f_name in cfg.functions:
                                yield (fam_name, A_name, q, int(n), int(m), xs, f_name,
                                       cfg.order, cfg.tol, cfg.tail_target)


def evaluate_instance(inst) -> CheckReport:
    fam_name, A_name, q, n, m, xs, f_name, order, tol, tail_target = inst
    fam = fm.parse_family(fam_name)
    A = fn.parse_functional(A_name)
    f = fn.test_function(f_name)
    if q == "A":
        return check_a(fam, A, n, f, xs[0], xs[1], order, tol, tail_target)
    return CHECKS[q](fam, A, n, m, f, xs, order, tol, tail_target)


def run_sweep(cfg: SweepConfig) -> list[CheckReport]:
    """Evaluate every instance of the config; output sorted by input tuple."""
    cfg.validate()
    insts = list(_instances(cfg))
    if int(cfg.workers) > 1:
        with ProcessPoolExecutor(max_workers=int(cfg.workers)) as pool:
            reports = list(pool.map(evaluate_instance, insts, chunksize=64))
    else:
        reports = [evaluate_instance(i) for i in insts]
    return sorted(reports, key=CheckReport.sort_key)


def summarize(reports: Sequence[CheckReport]) -> dict[str, dict]:
    """Per quantity: count, number of FAILs, and the minimum value with its input."""
    out: dict[str, dict] = {}
    for r in reports:
        s = out.setdefault(r.quantity, {"count": 0, "fail": 0, "rejected": 0, "min": math.inf, "argmin": None})
        s["count"] += 1
        s["fail"] += r.failed
        s["rejected"] += r.is_rejected
        if math.isfinite(r.value) and r.value < s["min"]:
            s["min"], s["argmin"] = r.value, (r.family, r.n, r.m, r.xs, r.f)
    return out
