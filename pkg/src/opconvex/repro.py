"""Canned scenarios, one per claim, for ``opconvex repro --claim``."""

from __future__ import annotations

import logging

import numpy as np

from . import families as fm
from . import functionals as fn
from . import inequalities as iq
from . import values as vals
from .harness import SweepConfig, check_bm, check_cm, inequality_verdict, run_sweep
from .reports import FAIL, PASS, CheckReport

log = logging.getLogger(__name__)

DEFAULT_SEED = 20240517
CONVEX = [f.name for f in fn.CONVEX_REGISTRY]


def _golden(family, functional, n, m, xs, f, quantity, value, expected, tol, method="Direct", detail=""):
    ok = abs(value - expected) <= tol
    return CheckReport(
        family=family, functional=functional, n=n, m=m, xs=tuple(float(x) for x in xs), f=f,
        quantity=quantity, value=float(value), tail_bound=0.0, tolerance=tol,
        verdict=PASS if ok else FAIL, method=method,
        detail=detail or f"expected {expected!r}",
    )


def claim_rasa(seed: int = DEFAULT_SEED) -> list[CheckReport]:
    cfg = SweepConfig(
        families=["bernstein"], quantities=["A"], n_values=list(range(1, 9)),
        grid={"start": 0.0, "stop": 1.0, "step": 0.05}, functions=CONVEX, tol=1e-12,
    )
    reports = run_sweep(cfg)
    v = vals.rasa_functional(fm.bernstein(), fn.DIRAC, 1, fn.E2, 0.0, 1.0)
    reports.append(_golden("bernstein", "dirac", 1, 2, (0, 1), "e2", "A[golden]", v.value, 0.5, 1e-12, v.method))
    return reports


def _random_tuples(rng, count, k, hi):
    return [tuple(float(t) for t in row) for row in rng.uniform(0.0, hi, size=(count, k))]


def claim_miro(seed: int = DEFAULT_SEED, count: int = 100) -> list[CheckReport]:
    rng = np.random.default_rng(seed)
    fam = fm.bernstein()
    reports = []
    for n in range(1, 5):
        for xs in _random_tuples(rng, count, 3, 1.0):
            for name in CONVEX:
                reports.append(check_cm(fam, fn.DIRAC, n, 3, fn.test_function(name), xs, tol=1e-12))
    # brute-force triple sums against the convolution path
    for n in range(1, 4):
        for xs in _random_tuples(rng, 5, 3, 1.0):
            for name in ("e2", "abs:c=0.5", "exp"):
                f = fn.test_function(name)
                a = vals.cm_value(fam, fn.DIRAC, n, 3, f, xs, N=20).value
                b = vals.cm_bruteforce(fam, fn.DIRAC, n, 3, f, xs, 20).value
                reports.append(_golden("bernstein", "dirac", n, 3, xs, name, "C_m[series-brute]",
                                       a - b, 0.0, 1e-11, vals.BRUTE))
    return reports


def claim_abel_rasa(seed: int = DEFAULT_SEED, count: int = 20) -> list[CheckReport]:
    rng = np.random.default_rng(seed)
    fam = fm.bernstein()
    reports = []
    for m in (2, 3):
        for n in range(1, 6):
            for xs in _random_tuples(rng, count, m, 1.0):
                for name in CONVEX:
                    f = fn.test_function(name)
                    reports.append(check_bm(fam, fn.DIRAC, n, m, f, xs, tol=1e-12))
                    direct = vals.bm_value(fam, fn.DIRAC, n, m, f, xs).value
                    rep = vals.bm_value_via_representation(fam, fn.DIRAC, n, m, f, xs).value
                    reports.append(_golden("bernstein", "dirac", n, m, xs, name, "B_m[series-representation]",
                                           direct - rep, 0.0, 1e-10, vals.REPRESENTATION))
    v = vals.bm_value(fam, fn.DIRAC, 1, 2, fn.E2, (0.0, 1.0))
    reports.append(_golden("bernstein", "dirac", 1, 2, (0, 1), "e2", "B_m[golden]", v.value, 0.125, 1e-12, v.method))
    return reports


def claim_szasz_zero(seed: int = DEFAULT_SEED, count: int = 50) -> list[CheckReport]:
    """E_2 vanishes for Szasz, so B_m = 0 while C_m = m * Jensen gap stays positive."""
    rng = np.random.default_rng(seed)
    fam = fm.szasz()
    reports = []
    for _ in range(count):
        n = int(rng.integers(1, 5))
        xs = tuple(float(t) for t in rng.uniform(0.0, 4.0, size=2))
        e = iq.em_series(fam, n, 2, xs, 48)
        worst = float(np.max(np.abs(e.coeffs)))
        reports.append(_golden("szasz", "-", n, 2, xs, "-", "max|E_2|", worst, 0.0, 1e-12, "Direct"))
        f = fn.E2
        b = vals.bm_value(fam, fn.DIRAC, n, 2, f, xs)
        c = vals.cm_value(fam, fn.DIRAC, n, 2, f, xs)
        note = f"B_m={b.value!r} C_m={c.value!r}; B_m = C_m does not hold when C_m > 0"
        reports.append(CheckReport(
            family="szasz", functional="dirac", n=n, m=2, xs=xs, f=f.name, quantity="B_m",
            value=b.value, tail_bound=b.tail_bound, tolerance=1e-9,
            verdict=inequality_verdict(b.value, b.tail_bound, 1e-9, "==0"), method=b.method, detail=note,
        ))
        reports.append(CheckReport(
            family="szasz", functional="dirac", n=n, m=2, xs=xs, f=f.name, quantity="C_m",
            value=c.value, tail_bound=c.tail_bound, tolerance=1e-9,
            verdict=inequality_verdict(c.value, c.tail_bound, 1e-9, ">="), method=c.method, detail=note,
        ))
        if abs(c.value - b.value) > 1e-9:
            log.info("szasz n=%d xs=%s: B_m=%.3e but C_m=%.6g", n, xs, b.value, c.value)
    return reports


def claim_baskakov_reverse(seed: int = DEFAULT_SEED, count: int = 50) -> list[CheckReport]:
    rng = np.random.default_rng(seed)
    fam = fm.baskakov()
    reports = []
    for _ in range(count):
        n = int(rng.integers(1, 4))
        xs = tuple(float(t) for t in rng.uniform(0.0, 4.0, size=2))
        q, signs = iq.em_quotient(fam, n, 2, xs, power=2, tol=1e-9)
        reports.append(CheckReport(
            family="baskakov", functional="-", n=n, m=2, xs=xs, f="-", quantity="E_2/(z-1)^2:max",
            value=float(np.max(q.coeffs)), tail_bound=0.0, tolerance=1e-9,
            verdict=PASS if signs.nonpositive else FAIL, method="Direct", detail=signs.verdict,
        ))
    v = vals.bm_value(fam, fn.DIRAC, 1, 2, fn.E2, (0.0, 1.0), N=64)
    reports.append(_golden("baskakov", "dirac", 1, 2, (0, 1), "e2", "B_m[golden]", v.value, -0.125, 1e-8, v.method))
    q1, s1 = iq.em_quotient(fam, 1, 2, (0.0, 1.0), N=8, power=1)
    for k, want in enumerate((1 / 18, 1 / 108, -1 / 72)):
        reports.append(_golden("baskakov", "-", 1, 2, (0, 1), "-", f"E_2/(z-1)[{k}]", q1.coeffs[k], want, 1e-10,
                               detail=f"power-1 quotient is {s1.verdict}"))
    return reports


def claim_gusic(seed: int = DEFAULT_SEED, count: int = 1000) -> list[CheckReport]:
    rng = np.random.default_rng(seed)
    reports = []
    worst_rel = 0.0
    for a in rng.uniform(0.0, 10.0, size=(count, 2)):
        gap = iq.gusic_gap(2, a)
        ref = (a[0] - a[1]) ** 2
        worst_rel = max(worst_rel, abs(gap - ref) / max(ref, np.finfo(float).tiny))
    reports.append(_golden("-", "-", 0, 2, (), "-", "gusic:m=2:relerr", worst_rel, 0.0, 1e-14))
    for m in range(3, 7):
        low = min(iq.gusic_gap(m, a) for a in rng.uniform(0.0, 10.0, size=(count, m)))
        reports.append(CheckReport(
            family="-", functional="-", n=0, m=m, xs=(), f="-", quantity="gusic:min_gap", value=low,
            tail_bound=0.0, tolerance=1e-12, verdict=inequality_verdict(low, 0.0, 1e-12, ">="), method="Direct",
        ))
    reports.append(_golden("-", "-", 0, 3, (1, 2, 3), "-", "gusic_gap", iq.gusic_gap(3, (1, 2, 3)), 54.0, 0.0))
    return reports


CLAIMS = {
    "rasa": claim_rasa,
    "miro": claim_miro,
    "abel-rasa": claim_abel_rasa,
    "szasz-zero": claim_szasz_zero,
    "baskakov-reverse": claim_baskakov_reverse,
    "gusic": claim_gusic,
}


def run_claim(name: str, seed: int = DEFAULT_SEED) -> list[CheckReport]:
    try:
        fn_ = CLAIMS[name]
    except KeyError:
        raise ValueError(f"unknown claim {name!r}; choose from {sorted(CLAIMS)}") from None
    return fn_(seed)
