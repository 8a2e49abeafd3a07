"""Operator families given by their weights a_{n,k}(x) and generating series.

Built-in families are Bernstein, Szasz (Mirakyan-Favard-Szasz), Baskakov and
Szasz-Schurer. Any Mastroianni-type family can be built from a
:class:`PhiOracle` supplying derivatives of phi_n.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy import stats

from .reports import FAIL, PASS, CheckReport
from .series import TruncatedSeries

MAX_ORDER = 256
DEFAULT_TAIL_TARGET = 1e-10

BERNSTEIN = "bernstein"
SZASZ = "szasz"
BASKAKOV = "baskakov"
SCHURER = "schurer"
MASTROIANNI = "mastroianni"


class DomainError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class PhiOracle:
    """Derivatives phi_n^{(k)}(x) of a Mastroianni sequence.

    ``eval_derivative(n, k, x)`` must be safe to call concurrently.
    ``boundary`` optionally evaluates phi_n at complex arguments, which
    enables contour checks of g_n(x, z) = phi_n(x (1 - z)).
    """

    eval_derivative: Callable[[int, int, float], float]
    name: str = "custom"
    boundary: Callable[[int, complex], complex] | None = None

    def __call__(self, n: int, k: int, x: float) -> float:
        return self.eval_derivative(n, k, x)


def _falling(n: int, k: int) -> float:
    out = 1.0
    for j in range(k):
        out *= n - j
    return out


def _rising(n: int, k: int) -> float:
    out = 1.0
    for j in range(k):
        out *= n + j
    return out


phi_bernstein = PhiOracle(
    lambda n, k, x: 0.0 if k > n else (-1) ** k * _falling(n, k) * (1.0 - x) ** (n - k),
    name="(1-x)^n",
    boundary=lambda n, w: (1.0 - w) ** n,
)
phi_szasz = PhiOracle(
    lambda n, k, x: (-n) ** k * math.exp(-n * x),
    name="exp(-nx)",
    boundary=lambda n, w: np.exp(-n * w),
)
phi_baskakov = PhiOracle(
    lambda n, k, x: (-1) ** k * _rising(n, k) * (1.0 + x) ** (-n - k),
    name="(1+x)^-n",
    boundary=lambda n, w: (1.0 + w) ** (-n),
)


def phi_schurer(p: int) -> PhiOracle:
    return PhiOracle(
        lambda n, k, x: (-(n + p)) ** k * math.exp(-(n + p) * x),
        name=f"exp(-(n+{p})x)",
        boundary=lambda n, w: np.exp(-(n + p) * w),
    )


@dataclass(frozen=True)
class OperatorFamily:
    kind: str
    p: int = 0
    phi: PhiOracle | None = None
    domain: tuple[float, float] = (0.0, math.inf)
    custom_power_form: bool = False

    @property
    def name(self) -> str:
        if self.kind == SCHURER:
            return f"schurer:p={self.p}"
        if self.kind == MASTROIANNI:
            return f"mastroianni:{self.phi.name}"
        return self.kind

    @property
    def finite_support(self) -> bool:
        return self.kind == BERNSTEIN

    @property
    def power_form(self) -> bool:
        if self.kind in (BERNSTEIN, SZASZ, BASKAKOV):
            return True
        if self.kind == SCHURER:
            return False
        return self.custom_power_form

    def check_domain(self, x: float) -> None:
        lo, hi = self.domain
        if not (lo <= x <= hi) or math.isnan(x):
            raise DomainError(f"x={x} outside the {self.name} domain [{lo}, {hi}]")


def bernstein() -> OperatorFamily:
    return OperatorFamily(BERNSTEIN, domain=(0.0, 1.0))


def szasz() -> OperatorFamily:
    return OperatorFamily(SZASZ)


def baskakov() -> OperatorFamily:
    return OperatorFamily(BASKAKOV)


def schurer(p: int) -> OperatorFamily:
    if p < 0:
        raise ValueError("Schurer parameter p must be nonnegative")
    return OperatorFamily(SCHURER, p=int(p))


def mastroianni(phi: PhiOracle, domain=(0.0, math.inf), power_form: bool = False) -> OperatorFamily:
    return OperatorFamily(MASTROIANNI, phi=phi, domain=tuple(domain), custom_power_form=power_form)


BUILTIN = (BERNSTEIN, SZASZ, BASKAKOV)


def parse_family(text: str) -> OperatorFamily:
    """``"bernstein"``, ``"szasz"``, ``"baskakov"`` or ``"schurer:p=2"``."""
    t = text.strip().lower()
    if t == BERNSTEIN:
        return bernstein()
    if t == SZASZ:
        return szasz()
    if t == BASKAKOV:
        return baskakov()
    m = re.fullmatch(r"schurer(?::p=(\d+))?", t)
    if m:
        return schurer(int(m.group(1) or 0))
    raise ValueError(f"unknown family {text!r}")


def _bernstein_weights(n: int, x: float, N: int) -> np.ndarray:
    out = np.zeros(N + 1)
    top = min(n, N)
    if x == 0.0:
        out[0] = 1.0
        return out
    if x == 1.0:
        if n <= N:
            out[n] = 1.0
        return out
    w = np.zeros(n + 1)
    # run the ratio recurrence away from the smaller endpoint mass
    if x <= 0.5:
        r = x / (1.0 - x)
        w[0] = (1.0 - x) ** n
        for k in range(n):
            w[k + 1] = w[k] * (n - k) / (k + 1) * r
    else:
        r = (1.0 - x) / x
        w[n] = x**n
        for k in range(n, 0, -1):
            w[k - 1] = w[k] * k / (n - k + 1) * r
    out[: top + 1] = w[: top + 1]
    return out


def _poisson_weights(lam: float, N: int) -> np.ndarray:
    k = np.arange(N + 1)
    if lam == 0.0:
        out = np.zeros(N + 1)
        out[0] = 1.0
        return out
    if lam < 600.0:
        out = np.empty(N + 1)
        out[0] = math.exp(-lam)
        for j in range(N):
            out[j + 1] = out[j] * lam / (j + 1)
        return out
    return np.exp(k * math.log(lam) - lam - np.array([math.lgamma(j + 1) for j in k]))


def _baskakov_weights(n: int, x: float, N: int) -> np.ndarray:
    out = np.empty(N + 1)
    out[0] = (1.0 + x) ** (-n)
    r = x / (1.0 + x)
    for k in range(N):
        out[k + 1] = out[k] * (n + k) / (k + 1) * r
    return out


def _mastroianni_weights(phi: PhiOracle, n: int, x: float, N: int) -> np.ndarray:
    out = np.zeros(N + 1)
    for k in range(N + 1):
        d = phi(n, k, x)
        if x == 0.0:
            scale = 1.0 if k == 0 else 0.0
        else:
            scale = math.exp(k * math.log(x) - math.lgamma(k + 1))
        v = (-1) ** k * scale * d
        if not math.isfinite(v):
            raise ValueError(f"phi oracle {phi.name} gave a nonfinite weight at n={n}, k={k}, x={x}")
        out[k] = v
    return out


@lru_cache(maxsize=4096)
def _weights(fam: OperatorFamily, n: int, x: float, N: int) -> np.ndarray:
    if fam.kind == BERNSTEIN:
        w = _bernstein_weights(n, x, N)
    elif fam.kind == SZASZ:
        w = _poisson_weights(n * x, N)
    elif fam.kind == SCHURER:
        w = _poisson_weights((n + fam.p) * x, N)
    elif fam.kind == BASKAKOV:
        w = _baskakov_weights(n, x, N)
    else:
        w = _mastroianni_weights(fam.phi, n, x, N)
    w.flags.writeable = False
    return w


def _check(fam: OperatorFamily, n: int, x: float, N: int) -> None:
    if n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    if N < 0:
        raise ValueError(f"order must be nonnegative, got {N}")
    fam.check_domain(x)


def coefficients(fam: OperatorFamily, n: int, x: float, N: int) -> np.ndarray:
    """Weights a_{n,0}(x) .. a_{n,N}(x) as a read-only array."""
    _check(fam, n, x, N)
    return _weights(fam, int(n), float(x), int(N))


def generating_series(fam: OperatorFamily, n: int, x: float, N: int) -> TruncatedSeries:
    return TruncatedSeries(coefficients(fam, n, x, N))


def tail_mass(fam: OperatorFamily, n: int, x: float, N: int) -> float:
    """Probability mass of the weights beyond index N."""
    _check(fam, n, x, N)
    x = float(x)
    if x == 0.0:
        return 0.0
    if fam.kind == BERNSTEIN:
        return 0.0 if N >= n else float(stats.binom.sf(N, n, x))
    if fam.kind in (SZASZ, SCHURER):
        lam = (n + fam.p) * x if fam.kind == SCHURER else n * x
        return float(stats.poisson.sf(N, lam))
    if fam.kind == BASKAKOV:
        return float(stats.nbinom.sf(N, n, 1.0 / (1.0 + x)))
    return float(1.0 - np.sum(coefficients(fam, n, x, N)))


def default_order(fam: OperatorFamily, n: int, x: float, target: float = DEFAULT_TAIL_TARGET) -> int:
    """Smallest N with tail_mass < target, capped at MAX_ORDER."""
    _check(fam, n, x, 0)
    if fam.kind == BERNSTEIN:
        return n
    if x == 0.0:
        return 0
    ks = np.arange(MAX_ORDER + 1)
    if fam.kind in (SZASZ, SCHURER):
        lam = (n + fam.p) * x if fam.kind == SCHURER else n * x
        tails = stats.poisson.sf(ks, lam)
    elif fam.kind == BASKAKOV:
        tails = stats.nbinom.sf(ks, n, 1.0 / (1.0 + x))
    else:
        tails = 1.0 - np.cumsum(coefficients(fam, n, x, MAX_ORDER))
    ok = np.nonzero(tails < target)[0]
    return int(ok[0]) if ok.size else MAX_ORDER


def first_moment(fam: OperatorFamily, n: int, x: float, N: int) -> float:
    w = coefficients(fam, n, x, N)
    return float(np.dot(np.arange(N + 1), w))


def boundary_values(fam: OperatorFamily, n: int, x: float) -> Callable[[np.ndarray], np.ndarray]:
    """theta -> g_n(x, exp(i theta)) in closed form."""
    fam.check_domain(x)

    def g(theta):
        z = np.exp(1j * np.asarray(theta))
        if fam.kind == BERNSTEIN:
            return (1.0 - x + x * z) ** n
        if fam.kind == SZASZ:
            return np.exp(-n * x * (1.0 - z))
        if fam.kind == SCHURER:
            return np.exp(-(n + fam.p) * x * (1.0 - z))
        if fam.kind == BASKAKOV:
            return (1.0 + x - x * z) ** (-n)
        if fam.phi is None or fam.phi.boundary is None:
            raise ValueError(f"{fam.name} has no complex evaluation of phi")
        return fam.phi.boundary(n, x * (1.0 - z))

    return g


def validate_phi(oracle: PhiOracle, n: int, K: int, sample_xs, tol: float = 1e-12) -> CheckReport:
    """Check phi_n(0) = 1 and (-1)^k phi_n^{(k)}(x) >= 0 for k <= K.

    The sign factor is (-1)^k: it is what every built-in family satisfies.
    The report value is the most negative signed derivative found (or the
    phi_n(0) defect, if that is what fails); ``detail`` lists violations.
    """
    violations = []
    worst = math.inf
    p0 = oracle(n, 0, 0.0)
    if not abs(p0 - 1.0) <= tol:
        violations.append(f"phi_{n}(0)={p0!r}")
        worst = -abs(p0 - 1.0)
    for x in sample_xs:
        for k in range(K + 1):
            v = (-1) ** k * oracle(n, k, float(x))
            worst = min(worst, v)
            if not v >= -tol:
                violations.append(f"k={k},x={x}:{v!r}")
    if worst == math.inf:
        worst = 0.0
    return CheckReport(
        family=f"mastroianni:{oracle.name}",
        functional="-",
        n=n,
        m=0,
        xs=tuple(float(x) for x in sample_xs),
        f="-",
        quantity="phi_sign",
        value=float(worst),
        tail_bound=0.0,
        tolerance=tol,
        verdict=FAIL if violations else PASS,
        method="Direct",
        detail="; ".join(violations),
    )
