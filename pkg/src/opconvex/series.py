"""Truncated power series in z with float64 coefficients.

A :class:`TruncatedSeries` of order ``N`` stores ``c_0 .. c_N``. Binary
operations zero-pad the shorter operand to the longer order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np


@dataclass(frozen=True, eq=False)
class TruncatedSeries:
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=np.float64).reshape(-1)
        if c.size == 0:
            raise ValueError("a truncated series needs at least one coefficient")
        if not np.all(np.isfinite(c)):
            raise ValueError("series coefficients must be finite")
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    @property
    def order(self) -> int:
        return self.coeffs.size - 1

    def __len__(self):
        return self.coeffs.size

    def __getitem__(self, k):
        return self.coeffs[k]

    def __repr__(self):
        return f"TruncatedSeries(order={self.order}, coeffs={self.coeffs.tolist()})"

    def padded(self, order: int) -> "TruncatedSeries":
        """Zero-pad (or cut) to ``order``."""
        out = np.zeros(order + 1)
        k = min(order, self.order) + 1
        out[:k] = self.coeffs[:k]
        return TruncatedSeries(out)

    # operator sugar over the module functions
    def __add__(self, other):
        return linear_combine(1.0, self, 1.0, other)

    def __sub__(self, other):
        return linear_combine(1.0, self, -1.0, other)

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            return multiply(self, other)
        return TruncatedSeries(self.coeffs * float(other))

    __rmul__ = __mul__

    def __pow__(self, m: int):
        return int_pow(self, m)


def series(coeffs: Sequence[float], order: int | None = None) -> TruncatedSeries:
    s = TruncatedSeries(np.asarray(coeffs, dtype=np.float64))
    return s if order is None else s.padded(order)


def one(order: int) -> TruncatedSeries:
    c = np.zeros(order + 1)
    c[0] = 1.0
    return TruncatedSeries(c)


def zeros(order: int) -> TruncatedSeries:
    return TruncatedSeries(np.zeros(order + 1))


def _common(s: TruncatedSeries, t: TruncatedSeries):
    if s.order == t.order:
        return s.coeffs, t.coeffs, s.order
    order = max(s.order, t.order)
    return s.padded(order).coeffs, t.padded(order).coeffs, order


def linear_combine(alpha: float, s: TruncatedSeries, beta: float, t: TruncatedSeries) -> TruncatedSeries:
    a, b, _ = _common(s, t)
    return TruncatedSeries(alpha * a + beta * b)


def multiply(s: TruncatedSeries, t: TruncatedSeries) -> TruncatedSeries:
    """Cauchy product truncated at the common order."""
    a, b, order = _common(s, t)
    return TruncatedSeries(np.convolve(a, b)[: order + 1])


def int_pow(s: TruncatedSeries, m: int) -> TruncatedSeries:
    """``s**m`` by binary exponentiation; ``m == 0`` gives the series 1."""
    if m < 0:
        raise ValueError(f"negative power {m}")
    result = one(s.order)
    base = s
    while m:
        if m & 1:
            result = multiply(result, base)
        m >>= 1
        if m:
            base = multiply(base, base)
    return result


def product(factors: Sequence[TruncatedSeries]) -> TruncatedSeries:
    if not factors:
        raise ValueError("empty product")
    out = factors[0]
    for f in factors[1:]:
        out = multiply(out, f)
    return out


def eval_real(s: TruncatedSeries, z: float) -> float:
    acc = 0.0
    for c in s.coeffs[::-1]:
        acc = acc * z + c
    return float(acc)


def _cumulative_quotient(c: np.ndarray) -> tuple[np.ndarray, float]:
    # S = (z - 1) Q  =>  q_k = q_{k-1} - s_k
    q = -np.cumsum(c)
    return q[:-1], abs(float(q[-1]))


def divide_by_z_minus_1(s: TruncatedSeries, power: int = 1) -> tuple[TruncatedSeries, float]:
    """Quotient of ``s`` by ``(z - 1)**power`` plus the divisibility defect.

    The quotient has order ``N - power``. The residual is the absolute
    partial sum that should vanish if ``s`` has a root of that
    multiplicity at ``z = 1``; for ``power == 2`` the larger of the two
    defects is returned. Nothing is raised on a nonzero residual.
    """
    if power not in (1, 2):
        raise ValueError("power must be 1 or 2")
    if s.order < power:
        raise ValueError(f"order {s.order} too small to divide by (z-1)^{power}")
    q, residual = _cumulative_quotient(s.coeffs)
    if power == 2:
        q, r2 = _cumulative_quotient(q)
        residual = max(residual, r2)
    return TruncatedSeries(q), residual


def divide_by_z_minus_1_from_tail(s: TruncatedSeries, power: int = 1, keep: int | None = None) -> TruncatedSeries:
    """Quotient of ``s`` by ``(z - 1)**power`` summed from the high end.

    Assumes ``s`` holds the whole series (everything past its order is
    negligible) and has the root at ``z = 1``; then
    ``q_k = sum_{i > k} s_i``. Rounding errors shrink with the tail instead
    of staying at the level of the largest coefficient, which matters once
    the quotient is weighted by growing sequences. Only the first
    ``keep + 1`` coefficients are returned (default ``N - power``).
    """
    if power not in (1, 2):
        raise ValueError("power must be 1 or 2")
    if s.order < power:
        raise ValueError(f"order {s.order} too small to divide by (z-1)^{power}")
    q = s.coeffs
    for _ in range(power):
        q = np.cumsum(q[::-1])[::-1][1:]
    keep = s.order - power if keep is None else keep
    if keep > s.order - power:
        raise ValueError(f"cannot keep {keep} coefficients from order {s.order}")
    return TruncatedSeries(np.ascontiguousarray(q[: keep + 1]))


def coeff_as_derivative(s: TruncatedSeries, k: int) -> float:
    """k-th derivative at z = 0, i.e. ``k! * c_k``."""
    if not 0 <= k <= s.order:
        raise IndexError(f"k={k} outside 0..{s.order}")
    return float(math.factorial(k) * s.coeffs[k])


def contour_coefficients(
    values: Callable[[np.ndarray], np.ndarray],
    order: int,
    samples: int | None = None,
    imag_tol: float = 1e-8,
) -> np.ndarray:
    """Taylor coefficients from boundary values on the unit circle.

    ``values`` maps an array of angles in ``[0, 2*pi)`` to the function
    values at ``exp(i*theta)``. The trapezoid rule on a uniform grid is
    exactly a DFT, so ``numpy.fft`` does the summation.
    """
    if samples is None:
        samples = max(4 * (order + 1), 256)
    if samples < 4 * (order + 1):
        raise ValueError(f"need at least {4 * (order + 1)} samples, got {samples}")
    theta = 2.0 * np.pi * np.arange(samples) / samples
    fv = np.broadcast_to(np.asarray(values(theta), dtype=np.complex128), theta.shape)
    c = np.fft.fft(fv)[: order + 1] / samples
    worst = float(np.max(np.abs(c.imag)))
    if worst > imag_tol:
        raise ValueError(f"imaginary part {worst:.3e} exceeds {imag_tol:g}; input not real-coefficient?")
    return c.real.copy()
