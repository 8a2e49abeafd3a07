"""Families of positive functionals A_t and the divided-difference test.

Every family satisfies A_t(e_0) = 1 and A_t(e_1) = a*t + b; the constants
(a, b) travel with the family so they can be checked.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import integrate

QUAD_TOL = 1e-11
EPS = np.finfo(float).eps


class IntegrationError(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class TestFunction:
    """A named, numpy-vectorized test function.

    ``kinks`` lists points where the function is not smooth; quadrature
    splits there.
    """

    __test__ = False  # keep pytest from collecting this class

    name: str
    eval: Callable[[np.ndarray], np.ndarray]
    convex: bool
    kinks: tuple = ()
    domain: tuple = (-math.inf, math.inf)

    def __call__(self, t):
        return self.eval(t)


def _power(k):
    return lambda t: np.asarray(t, dtype=float) ** k


def abs_at(c: float) -> TestFunction:
    return TestFunction(f"abs:c={c:g}", lambda t: np.abs(np.asarray(t, dtype=float) - c), True, (c,))


def hinge_at(c: float) -> TestFunction:
    return TestFunction(f"hinge:c={c:g}", lambda t: np.maximum(0.0, np.asarray(t, dtype=float) - c), True, (c,))


E0 = TestFunction("e0", lambda t: np.ones_like(np.asarray(t, dtype=float)), True)
E1 = TestFunction("e1", _power(1), True)
E2 = TestFunction("e2", _power(2), True)
E3 = TestFunction("e3", _power(3), True, domain=(0.0, math.inf))
EXP = TestFunction("exp", np.exp, True)
EXP_NEG = TestFunction("exp_neg", lambda t: np.exp(-np.asarray(t, dtype=float)), True)
SIN = TestFunction("sin", np.sin, False, domain=(0.0, math.pi))
NEG_E2 = TestFunction("neg_e2", lambda t: -np.asarray(t, dtype=float) ** 2, False)

CONVEX_REGISTRY = (
    E0, E1, E2, E3, EXP, EXP_NEG,
    abs_at(0.25), abs_at(0.5), abs_at(1.0),
    hinge_at(0.5),
)
NONCONVEX_CONTROLS = (SIN, NEG_E2)

_NAMED = {f.name: f for f in CONVEX_REGISTRY + NONCONVEX_CONTROLS}


def test_function(name: str) -> TestFunction:
    """Look up a registry entry; ``abs:c=<v>`` and ``hinge:c=<v>`` accept any c."""
    key = name.strip().lower()
    if key in _NAMED:
        return _NAMED[key]
    m = re.fullmatch(r"(abs|hinge):c=([-+0-9.eE]+)", key)
    if m:
        c = float(m.group(2))
        return abs_at(c) if m.group(1) == "abs" else hinge_at(c)
    raise ValueError(f"unknown test function {name!r}")


test_function.__test__ = False


@dataclass(frozen=True, eq=False)
class FunctionalFamily:
    kind: str
    h: float = 0.0
    custom: Callable[[float, TestFunction], float] | None = None
    affine_a: float = 1.0
    affine_b: float = 0.0
    name_: str = field(default="")

    @property
    def name(self) -> str:
        if self.name_:
            return self.name_
        if self.kind == "avg":
            return f"avg:h={self.h:g}"
        return self.kind


DIRAC = FunctionalFamily("dirac")


def dirac() -> FunctionalFamily:
    return DIRAC


def sliding_average(h: float) -> FunctionalFamily:
    if not h > 0:
        raise ValueError("averaging width must be positive")
    return FunctionalFamily("avg", h=float(h), affine_a=1.0, affine_b=h / 2.0)


def custom_functional(apply_fn, a: float, b: float, name: str = "custom") -> FunctionalFamily:
    return FunctionalFamily("custom", custom=apply_fn, affine_a=a, affine_b=b, name_=name)


def parse_functional(text: str) -> FunctionalFamily:
    t = text.strip().lower()
    if t == "dirac":
        return DIRAC
    m = re.fullmatch(r"avg:h=([0-9.eE+-]+)", t)
    if m:
        return sliding_average(float(m.group(1)))
    raise ValueError(f"unknown functional {text!r}")


def _window_average(f: TestFunction, t: float, h: float) -> float:
    lo, hi = t, t + h
    pts = [c for c in f.kinks if lo < c < hi] or None
    val, err = integrate.quad(lambda s: float(f(s)), lo, hi, points=pts, epsabs=QUAD_TOL, epsrel=0.0, limit=200)
    if not err <= QUAD_TOL:
        raise IntegrationError(f"quadrature of {f.name} on [{lo}, {hi}] reached only {err:.2e}")
    return val / h


def apply(A: FunctionalFamily, t, f: TestFunction):
    """A_t(f); ``t`` may be a scalar or an array."""
    t_arr = np.asarray(t, dtype=float)
    if A.kind == "dirac":
        out = np.asarray(f(t_arr), dtype=float)
    elif A.kind == "avg":
        out = np.array([_window_average(f, float(s), A.h) for s in t_arr.reshape(-1)]).reshape(t_arr.shape)
    else:
        out = np.array([float(A.custom(float(s), f)) for s in t_arr.reshape(-1)]).reshape(t_arr.shape)
    return float(out) if out.ndim == 0 else out


def second_divided_differences(A: FunctionalFamily, f: TestFunction, n: int, K: int) -> np.ndarray:
    """d_k = [k/n, (k+1)/n, (k+2)/n; A_t(f)] for k = 0..K."""
    g = apply(A, np.arange(K + 3) / n, f)
    return (g[:-2] - 2.0 * g[1:-1] + g[2:]) * (n * n / 2.0)


@dataclass(frozen=True)
class DividedDifferenceCheck:
    ok: bool
    min_value: float
    witness_k: int | None
    values: np.ndarray = field(repr=False, compare=False)


def divided_difference_condition(A: FunctionalFamily, f: TestFunction, n: int, K: int, tol: float = 1e-12) -> DividedDifferenceCheck:
    """Certify d_k >= 0 for k <= K.

    Each d_k gets slack ``tol`` plus the rounding error of the three-term
    stencil, which grows with |A_t(f)| at the nodes.
    """
    g = apply(A, np.arange(K + 3) / n, f)
    d = (g[:-2] - 2.0 * g[1:-1] + g[2:]) * (n * n / 2.0)
    scale = (np.abs(g[:-2]) + 2.0 * np.abs(g[1:-1]) + np.abs(g[2:])) * (n * n / 2.0)
    slack = tol + 8.0 * EPS * scale
    if A.kind == "avg":
        slack = slack + 4.0 * QUAD_TOL * n * n
    bad = np.nonzero(d < -slack)[0]
    k = int(bad[np.argmin(d[bad])]) if bad.size else None
    return DividedDifferenceCheck(bad.size == 0, float(d.min()), k, d)


def check_conditions(A: FunctionalFamily, ts, tol: float = 1e-10) -> tuple[bool, float, float]:
    """Conditions i) and ii) on a grid: returns (ok, max |A_t(e0)-1|, max |A_t(e1)-(a t+b)|)."""
    ts = np.asarray(ts, dtype=float)
    d0 = float(np.max(np.abs(np.asarray(apply(A, ts, E0)) - 1.0)))
    d1 = float(np.max(np.abs(np.asarray(apply(A, ts, E1)) - (A.affine_a * ts + A.affine_b))))
    return d0 <= tol and d1 <= tol, d0, d1
