"""Numerical values of the functionals A, C_m, B_m and the Jensen gap.

m-fold sums are evaluated as coefficients of truncated series products.
The brute-force routines at the bottom run the literal index loops and are
kept independent of the series path so they can serve as oracles.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import families as fm
from .families import OperatorFamily
from .functionals import FunctionalFamily, TestFunction, apply, second_divided_differences, E0, E1
from .inequalities import PowerFormError, em_quotient
from .reports import FAIL, PASS, CheckReport
from .series import TruncatedSeries, int_pow, product

PROBE = 8
VALUE_TAIL_TARGET = 1e-11
GUARD_TOL = 1e-8

DIRECT = "Direct"
SERIES = "SeriesConvolution"
REPRESENTATION = "DividedDifferenceRepresentation"
BRUTE = "BruteForce"


class GuardError(ValueError):
    """B_m(e_0) or B_m(e_1) is not negligible: the family breaks the framework."""

    def __init__(self, moment: str, value: float):
        super().__init__(f"guard failed: |B_m({moment})| = {abs(value):.3e} > {GUARD_TOL:g}")
        self.moment = moment
        self.value = value


@dataclass(frozen=True)
class FunctionalValue:
    value: float
    truncation_order: int
    tail_bound: float
    method: str

    def __post_init__(self):
        if not self.tail_bound >= 0:
            raise ValueError("tail bound must be nonnegative")


def _node_values(A: FunctionalFamily, f: TestFunction, den: int, count: int) -> np.ndarray:
    with np.errstate(over="ignore"):
        return np.asarray(apply(A, np.arange(count) / den, f), dtype=float)


def _remainder(t: np.ndarray) -> float:
    """Estimate of sum_{k > M} t_k from the last terms of a nonnegative sequence.

    Accepted only when the last term ratios are below one and not increasing,
    which is what geometric or faster decay looks like; otherwise infinite.
    """
    if not np.all(np.isfinite(t[-3:])):
        return math.inf
    last = float(t[-1])
    if last == 0.0:
        return 0.0
    prev, prev2 = float(t[-2]), float(t[-3])
    if prev == 0.0 or prev2 == 0.0:
        return math.inf
    rho, rho_prev = last / prev, prev / prev2
    if rho >= 1.0 or rho > rho_prev * (1 + 1e-9):
        return math.inf
    return last * rho / (1.0 - rho)


def _choose_order(majorant, A, f, den, start, cap, N=None, tail_target=None, exact=False):
    """Truncation order and a bound on the neglected part of sum_k w_k A_{k/den}(f).

    ``majorant(M)`` returns nonnegative coefficients P_0..P_M with |w_k| <= P_k.
    The bound is sum_{k > N} P_k |A_{k/den}(f)|, summed explicitly out to an
    extended order M plus a ratio-test remainder. When N is not given, the
    smallest N in [start, cap] whose bound meets the target is chosen.
    With ``exact`` the series is a polynomial of degree at most ``start``.
    Returns (N, node values A_{k/den}(f) for k <= M, bound).
    """
    if exact and (N is None or N >= start):
        N = start if N is None else N
        return N, _node_values(A, f, den, N + 1), 0.0
    target = tail_target or VALUE_TAIL_TARGET
    limit = 4 * cap
    M = min(limit, max(start if N is None else N, 2) + PROBE)
    while True:
        P = majorant(M)
        g = _node_values(A, f, den, M + 1)
        with np.errstate(invalid="ignore", over="ignore"):
            t = np.where(P > 0, P * np.abs(g), 0.0)
        rem = _remainder(t)
        if rem <= target / 4 or M >= limit:
            break
        M = min(limit, M + max(16, M // 2))
    with np.errstate(invalid="ignore", over="ignore"):
        suffix = rem + np.concatenate((np.cumsum(t[::-1])[::-1][1:], [0.0]))
    if N is None:
        ok = np.nonzero(suffix[: cap + 1] <= target)[0]
        N = max(int(ok[0]), start) if ok.size else min(cap, M)
    bound = float(suffix[N]) if N <= M else rem
    return N, g, bound if math.isfinite(bound) else math.inf


def _start(fam, pairs) -> tuple[int, int, bool]:
    """Initial order guess, cap and exactness flag from (n, x, d) triples.

    For finite support the guess is the full degree, so it is exact.
    """
    cap = fm.MAX_ORDER * max(d for *_, d in pairs)
    start = min(cap, max(d * fm.default_order(fam, n, x) for n, x, d in pairs))
    return start, cap, fam.finite_support


def _single_majorant(fam, n, x):
    return lambda M: fm.coefficients(fam, n, x, M)


def _rasa_majorant(fam, n, x, y):
    def P(M):
        s = fm.generating_series(fam, n, x, M) + fm.generating_series(fam, n, y, M)
        return (s * s).coeffs
    return P


def _cm_majorant(fam, n, xs):
    m = len(xs)

    def P(M):
        gs = [fm.generating_series(fam, n, x, M) for x in xs]
        return sum(int_pow(g, m).coeffs for g in gs) + m * product(gs).coeffs
    return P


def _bm_majorant(fam, n, xs):
    m = len(xs)
    mean = sum(xs) / m
    return lambda M: fm.coefficients(fam, m * n, mean, M) + _product_series(fam, n, xs, M).coeffs


def operator_value(fam: OperatorFamily, A: FunctionalFamily, n: int, f: TestFunction, x: float, N: int | None = None, tail_target: float | None = None) -> FunctionalValue:
    """L_{n,A}(f)(x) = sum_k a_{n,k}(x) A_{k/n}(f), truncated at N."""
    start, cap, exact = _start(fam, [(n, x, 1)])
    N, g, bound = _choose_order(_single_majorant(fam, n, x), A, f, n, start, cap, N, tail_target, exact)
    w = fm.coefficients(fam, n, x, N)
    return FunctionalValue(float(np.dot(w, g[: N + 1])), N, bound, DIRECT)


def rasa_weights(fam: OperatorFamily, n: int, x: float, y: float, N: int) -> np.ndarray:
    """coeff_k(g_x^2) + coeff_k(g_y^2) - 2 coeff_k(g_x g_y), formed as (g_x - g_y)^2."""
    d = fm.generating_series(fam, n, x, N) - fm.generating_series(fam, n, y, N)
    return (d * d).coeffs


def rasa_functional(fam: OperatorFamily, A: FunctionalFamily, n: int, f: TestFunction, x: float, y: float, N: int | None = None, tail_target: float | None = None) -> FunctionalValue:
    """A(f) = sum_{i,j} [a_i(x)a_j(x) + a_i(y)a_j(y) - 2 a_i(x)a_j(y)] A_{(i+j)/2n}(f)."""
    start, cap, exact = _start(fam, [(n, x, 2), (n, y, 2)])
    N, g, bound = _choose_order(_rasa_majorant(fam, n, x, y), A, f, 2 * n, start, cap, N, tail_target, exact)
    w = rasa_weights(fam, n, x, y, N)
    return FunctionalValue(float(np.dot(w, g[: N + 1])), N, bound, SERIES)


def _product_series(fam, n, xs, N) -> TruncatedSeries:
    return product([fm.generating_series(fam, n, x, N) for x in xs])


def cm_weights(fam: OperatorFamily, n: int, xs: Sequence[float], N: int) -> np.ndarray:
    m = len(xs)
    diag = sum(int_pow(fm.generating_series(fam, n, x, N), m).coeffs for x in xs)
    return diag - m * _product_series(fam, n, xs, N).coeffs


def cm_value(fam: OperatorFamily, A: FunctionalFamily, n: int, m: int, f: TestFunction, xs: Sequence[float], N: int | None = None, tail_target: float | None = None) -> FunctionalValue:
    xs = _points(m, xs)
    start, cap, exact = _start(fam, [(n, x, m) for x in xs])
    N, g, bound = _choose_order(_cm_majorant(fam, n, xs), A, f, m * n, start, cap, N, tail_target, exact)
    w = cm_weights(fam, n, xs, N)
    return FunctionalValue(float(np.dot(w, g[: N + 1])), N, bound, SERIES)


def power_form_discrepancy(fam: OperatorFamily, n: int, m: int, xs: Sequence[float], N: int) -> float:
    """max_k |sum_v coeff_k(g_n(x_v)^m) - sum_v a_{mn,k}(x_v)|."""
    if not fam.power_form:
        raise PowerFormError(f"{fam.name} is not of power form")
    xs = _points(m, xs)
    lhs = sum(int_pow(fm.generating_series(fam, n, x, N), m).coeffs for x in xs)
    rhs = sum(fm.coefficients(fam, m * n, x, N) for x in xs)
    return float(np.max(np.abs(lhs - rhs)))


def _points(m: int, xs) -> list[float]:
    xs = [float(x) for x in xs]
    if m < 2 or len(xs) != m:
        raise ValueError(f"need m >= 2 points, got m={m} with {len(xs)} points")
    return xs


def _bm_order(fam, A, f, n, m, xs, N, tail_target):
    mean = sum(xs) / m
    start, cap, exact = _start(fam, [(m * n, mean, 1)] + [(n, x, m) for x in xs])
    return _choose_order(_bm_majorant(fam, n, xs), A, f, m * n, start, cap, N, tail_target, exact)


def _bm_raw(fam, A, n, m, f, xs, N, tail_target=None):
    mean = sum(xs) / m
    N, g, bound = _bm_order(fam, A, f, n, m, xs, N, tail_target)
    head = fm.coefficients(fam, m * n, mean, N)
    tail = _product_series(fam, n, xs, N).coeffs
    return float(np.dot(head - tail, g[: N + 1])), N, bound


def bm_guard(fam: OperatorFamily, A: FunctionalFamily, n: int, m: int, xs: Sequence[float], N: int | None = None) -> tuple[float, float]:
    """(B_m(e_0), B_m(e_1)) by the direct path; raises GuardError if either is not ~0."""
    xs = _points(m, xs)
    b0, _, _ = _bm_raw(fam, A, n, m, E0, xs, N)
    b1, _, _ = _bm_raw(fam, A, n, m, E1, xs, N)
    for name, v in (("e0", b0), ("e1", b1)):
        if not abs(v) <= GUARD_TOL:
            raise GuardError(name, v)
    return b0, b1


def bm_value(fam: OperatorFamily, A: FunctionalFamily, n: int, m: int, f: TestFunction, xs: Sequence[float], N: int | None = None, tail_target: float | None = None) -> FunctionalValue:
    """B_m(f) = L_{mn,A}(f)(mean) - sum_k coeff_k(prod g_n(x_v,.)) A_{k/mn}(f)."""
    xs = _points(m, xs)
    bm_guard(fam, A, n, m, xs, N)
    if not fam.power_form:
        raise PowerFormError(f"{fam.name} is not of power form")
    value, N, bound = _bm_raw(fam, A, n, m, f, xs, N, tail_target)
    return FunctionalValue(value, N, bound, SERIES)


def bm_value_via_representation(fam: OperatorFamily, A: FunctionalFamily, n: int, m: int, f: TestFunction, xs: Sequence[float], N: int | None = None, tail_target: float | None = None) -> FunctionalValue:
    """B_m(f) = (2/mn) sum_{k>=2} (q_{k-2}/mn) [(k-2)/mn, (k-1)/mn, k/mn; A_t(f)]

    with q the coefficients of E_m / (z - 1)^2.
    """
    xs = _points(m, xs)
    bm_guard(fam, A, n, m, xs, N)
    mn = m * n
    N, _, bound = _bm_order(fam, A, f, n, m, xs, N, tail_target)
    if N < 2:
        return FunctionalValue(0.0, N, bound, REPRESENTATION)
    q, _ = em_quotient(fam, n, m, xs, N - 2, power=2)
    d = second_divided_differences(A, f, mn, N - 2)
    value = 2.0 / (mn * mn) * float(np.dot(q.coeffs, d))
    return FunctionalValue(value, N, bound, REPRESENTATION)


def jensen_gap(fam: OperatorFamily, A: FunctionalFamily, n: int, m: int, f: TestFunction, xs: Sequence[float], N: int | None = None, tail_target: float | None = None) -> FunctionalValue:
    """(1/m) sum_v L_{mn,A}(f)(x_v) - L_{mn,A}(f)(mean)."""
    xs = _points(m, xs)
    mean = sum(xs) / m
    if N is None:
        pts = xs + [mean]
        start, cap, exact = _start(fam, [(m * n, x, 1) for x in pts])
        majorant = lambda M: sum(fm.coefficients(fam, m * n, x, M) for x in pts)  # noqa: E731
        N, _, _ = _choose_order(majorant, A, f, m * n, start, cap, None, tail_target, exact)
    vals = [operator_value(fam, A, m * n, f, x, N) for x in xs]
    centre = operator_value(fam, A, m * n, f, mean, N)
    value = sum(v.value for v in vals) / m - centre.value
    bound = sum(v.tail_bound for v in vals) / m + centre.tail_bound
    return FunctionalValue(value, N, bound, DIRECT)


def decomposition_check(fam: OperatorFamily, A: FunctionalFamily, n: int, m: int, f: TestFunction, xs: Sequence[float], N: int | None = None, tol: float = 1e-10) -> CheckReport:
    """C_m(f) = m * jensen_gap + m * B_m(f) at a common truncation order."""
    xs = _points(m, xs)
    if N is None:
        cm_p, bm_p = _cm_majorant(fam, n, xs), _bm_majorant(fam, n, xs)
        start, cap, exact = _start(fam, [(m * n, sum(xs) / m, 1)] + [(n, x, m) for x in xs])
        N, _, _ = _choose_order(lambda M: cm_p(M) + bm_p(M), A, f, m * n, start, cap, exact=exact)
    c = cm_value(fam, A, n, m, f, xs, N)
    j = jensen_gap(fam, A, n, m, f, xs, N)
    b = bm_value(fam, A, n, m, f, xs, N)
    defect = c.value - m * (j.value + b.value)
    scale = max(1.0, abs(c.value), m * abs(j.value), m * abs(b.value))
    allowed = tol * scale
    return CheckReport(
        family=fam.name,
        functional=A.name,
        n=n,
        m=m,
        xs=tuple(xs),
        f=f.name,
        quantity="C_m-m*(J+B_m)",
        value=defect,
        tail_bound=0.0,
        tolerance=allowed,
        verdict=PASS if abs(defect) <= allowed else FAIL,
        method=SERIES,
        detail=f"C_m={c.value!r} J={j.value!r} B_m={b.value!r}",
    )


# ---------------------------------------------------------------- oracles
# Literal index loops over the weights; restricted to i_1 + ... + i_m <= N
# so they see the same truncation as the series path.

def rasa_bruteforce(fam, A, n, f, x, y, N) -> FunctionalValue:
    ax = fm.coefficients(fam, n, x, N)
    ay = fm.coefficients(fam, n, y, N)
    total = 0.0
    for i in range(N + 1):
        for j in range(N + 1 - i):
            w = ax[i] * ax[j] + ay[i] * ay[j] - 2.0 * ax[i] * ay[j]
            if w:
                total += w * apply(A, (i + j) / (2 * n), f)
    return FunctionalValue(total, N, 0.0, BRUTE)


def _mfold(weights, N):
    """Yield (k, prod) over index tuples with sum k <= N."""
    m = len(weights)
    for idx in itertools.product(range(N + 1), repeat=m):
        k = sum(idx)
        if k <= N:
            yield k, math.prod(w[i] for w, i in zip(weights, idx))


def cm_bruteforce(fam, A, n, m, f, xs, N) -> FunctionalValue:
    if m > 3 or N > 20:
        raise ValueError("brute-force oracle is limited to m <= 3, N <= 20")
    xs = _points(m, xs)
    a = [fm.coefficients(fam, n, x, N) for x in xs]
    g = [apply(A, k / (m * n), f) for k in range(N + 1)]
    total = 0.0
    for v in range(m):
        for k, p in _mfold([a[v]] * m, N):
            total += p * g[k]
    for k, p in _mfold(a, N):
        total -= m * p * g[k]
    return FunctionalValue(total, N, 0.0, BRUTE)


def bm_bruteforce(fam, A, n, m, f, xs, N) -> FunctionalValue:
    if m > 3 or N > 20:
        raise ValueError("brute-force oracle is limited to m <= 3, N <= 20")
    xs = _points(m, xs)
    mean = sum(xs) / m
    a = [fm.coefficients(fam, n, x, N) for x in xs]
    head = fm.coefficients(fam, m * n, mean, N)
    g = [apply(A, k / (m * n), f) for k in range(N + 1)]
    total = sum(head[k] * g[k] for k in range(N + 1))
    for k, p in _mfold(a, N):
        total -= p * g[k]
    return FunctionalValue(total, N, 0.0, BRUTE)
