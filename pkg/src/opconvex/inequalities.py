"""Sign conditions on generating-function coefficients.

beta: coefficients of (g_n(x,z) - g_n(y,z)) / (z - 1).
E_m:  g_{mn}(mean(xs), z) - prod_v g_n(x_v, z), together with its
      quotients by (z - 1) and (z - 1)^2.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import families as fm
from .families import OperatorFamily
from .series import TruncatedSeries, divide_by_z_minus_1, divide_by_z_minus_1_from_tail, multiply, product

log = logging.getLogger(__name__)

ALL_NONNEGATIVE = "AllNonNegative"
ALL_NONPOSITIVE = "AllNonPositive"
ALL_ZERO = "AllZero"
MIXED = "Mixed"

EXACT_TOL = 1e-12
TRUNCATED_TOL = 1e-9


class PowerFormError(ValueError):
    """Raised when a computation needs g_n = g_1^n and the family lacks it."""


@dataclass(frozen=True)
class SignClassification:
    verdict: str
    witness_positive: int | None
    witness_negative: int | None
    tol: float

    @property
    def nonnegative(self) -> bool:
        return self.verdict in (ALL_NONNEGATIVE, ALL_ZERO)

    @property
    def nonpositive(self) -> bool:
        return self.verdict in (ALL_NONPOSITIVE, ALL_ZERO)


def classify_signs(seq, tol: float = EXACT_TOL) -> SignClassification:
    """Sign verdict over ``seq``; entries within [-tol, tol] are neutral.

    Witnesses are the first index with a significant positive / negative
    entry.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    s = np.asarray(seq, dtype=float).reshape(-1)
    pos = np.nonzero(s > tol)[0]
    neg = np.nonzero(s < -tol)[0]
    wp = int(pos[0]) if pos.size else None
    wn = int(neg[0]) if neg.size else None
    if wp is not None and wn is not None:
        verdict = MIXED
    elif wp is not None:
        verdict = ALL_NONNEGATIVE
    elif wn is not None:
        verdict = ALL_NONPOSITIVE
    else:
        verdict = ALL_ZERO
    return SignClassification(verdict, wp, wn, tol)


def default_tol(fam: OperatorFamily) -> float:
    return EXACT_TOL if fam.finite_support else TRUNCATED_TOL


def _order_for(fam: OperatorFamily, pairs) -> int:
    return max(fm.default_order(fam, n, x) for n, x in pairs)


def beta_series(fam: OperatorFamily, n: int, x: float, y: float, N: int | None = None) -> TruncatedSeries:
    """beta_{n,0..N}(x, y) by dividing g_n(x,.) - g_n(y,.) by (z - 1)."""
    if N is None:
        N = _order_for(fam, [(n, x), (n, y)])
    diff = fm.generating_series(fam, n, x, N + 1) - fm.generating_series(fam, n, y, N + 1)
    q, residual = divide_by_z_minus_1(diff, 1)
    log.debug("beta_series %s n=%d x=%g y=%g N=%d residual=%.3e", fam.name, n, x, y, N, residual)
    return q


def h_partial_sums(fam: OperatorFamily, n: int, t: float, N: int) -> np.ndarray:
    """h_{n,k}(t) = -sum_{p<=k} a_{n,p}(t) for k = 0..N."""
    return -np.cumsum(fm.coefficients(fam, n, t, N))


def beta_closed_form(fam: OperatorFamily, n: int, x: float, y: float, N: int | None = None) -> np.ndarray:
    if N is None:
        N = _order_for(fam, [(n, x), (n, y)])
    return h_partial_sums(fam, n, x, N) - h_partial_sums(fam, n, y, N)


def squared_quotient_coefficients(fam: OperatorFamily, n: int, x: float, y: float, N: int | None = None) -> np.ndarray:
    q = beta_series(fam, n, x, y, N)
    return multiply(q, q).coeffs.copy()


def _require_power_form(fam: OperatorFamily) -> None:
    if not fam.power_form:
        raise PowerFormError(
            f"{fam.name} is not of power form g_n = g_1^n with an n-independent base; "
            "E_m and B_m are not defined for it here"
        )


def em_order(fam: OperatorFamily, n: int, xs: Sequence[float]) -> int:
    m = len(xs)
    mean = sum(xs) / m
    return _order_for(fam, [(m * n, mean)] + [(n, x) for x in xs])


def em_series(fam: OperatorFamily, n: int, m: int, xs: Sequence[float], N: int | None = None) -> TruncatedSeries:
    """g_{mn}(mean, z) - g_n(x_1, z) ... g_n(x_m, z), truncated at N."""
    _require_power_form(fam)
    xs = [float(x) for x in xs]
    if m < 2 or len(xs) != m:
        raise ValueError(f"need m >= 2 points, got m={m} with {len(xs)} points")
    if N is None:
        N = em_order(fam, n, xs)
    mean = sum(xs) / m
    head = fm.generating_series(fam, m * n, mean, N)
    prod = product([fm.generating_series(fam, n, x, N) for x in xs])
    return head - prod


def em_tail_budget(fam: OperatorFamily, n: int, xs: Sequence[float], N: int) -> float:
    """Upper bound on the mass of E_m's two terms lost beyond index N."""
    m = len(xs)
    mean = sum(xs) / m
    return fm.tail_mass(fam, m * n, mean, N) + sum(fm.tail_mass(fam, n, x, N) for x in xs)


TAIL_SUM_FLOOR = 1e-250
TAIL_SUM_CAP = 16384


def _tail_sum_order(fam: OperatorFamily, n: int, xs: Sequence[float], N: int) -> int | None:
    """Order past which E_m is negligible, or None if it cannot be certified."""
    m = len(xs)
    if fam.finite_support:
        return max(N, m * n)
    if fam.kind not in ("szasz", "baskakov"):
        return None
    M = max(N, 2 * m)
    while em_tail_budget(fam, n, xs, M // m) > TAIL_SUM_FLOOR:
        if M >= TAIL_SUM_CAP:
            return None
        M = min(TAIL_SUM_CAP, M + max(64, M // 2))
    return M


def em_quotient(
    fam: OperatorFamily,
    n: int,
    m: int,
    xs: Sequence[float],
    N: int | None = None,
    power: int = 2,
    tol: float | None = None,
) -> tuple[TruncatedSeries, SignClassification]:
    """E_m / (z - 1)^power up to order N, with its sign classification.

    When E_m can be carried far enough that its remainder underflows, the
    quotient is summed from the tail; the relative accuracy then holds for
    high-index coefficients too. Otherwise (custom phi) it falls back to
    forward partial sums, which use only E_m coefficients 0..k+power.
    """
    if N is None:
        N = em_order(fam, n, xs)
    M = _tail_sum_order(fam, n, xs, N + power)
    if M is None:
        e = em_series(fam, n, m, xs, N + power)
        q, residual = divide_by_z_minus_1(e, power)
    else:
        e = em_series(fam, n, m, xs, M)
        q = divide_by_z_minus_1_from_tail(e, power, keep=N)
        _, residual = divide_by_z_minus_1(e, power)
    log.debug("em_quotient %s n=%d xs=%s power=%d residual=%.3e", fam.name, n, list(xs), power, residual)
    return q, classify_signs(q.coeffs, default_tol(fam) if tol is None else tol)


def gusic_gap(m: int, a: Sequence[float]) -> float:
    """(sum a)^m - m^m prod a, evaluated exactly and rounded once."""
    if m < 2 or len(a) != m:
        raise ValueError(f"need m >= 2 values, got m={m} with {len(a)} values")
    fr = [Fraction(float(v)) for v in a]
    if any(v < 0 for v in fr):
        raise ValueError("gusic_gap needs nonnegative inputs")
    return float(sum(fr) ** m - m**m * math.prod(fr))


def gusic_polynomials(a: Sequence[float]) -> dict[tuple[int, int], float]:
    """P_{i,j}(a) with sum_{i<j} (a_i - a_j)^2 P_{i,j} = gusic_gap, for m = 2, 3."""
    m = len(a)
    if m == 2:
        return {(0, 1): 1.0}
    if m == 3:
        out = {}
        for i, j in ((0, 1), (0, 2), (1, 2)):
            (k,) = {0, 1, 2} - {i, j}
            out[(i, j)] = 0.5 * (a[i] + a[j]) + 3.5 * a[k]
        return out
    raise ValueError("P_{i,j} are only materialized for m = 2 and m = 3")
