import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from opconvex.series import (
    coeff_as_derivative,
    contour_coefficients,
    divide_by_z_minus_1,
    divide_by_z_minus_1_from_tail,
    eval_real,
    int_pow,
    linear_combine,
    multiply,
    one,
    series,
    zeros,
)

dyadic = st.integers(-64, 64).map(lambda k: k / 16.0)
coeff_lists = st.lists(dyadic, min_size=1, max_size=8)


def test_construction_rejects_nonfinite():
    with pytest.raises(ValueError):
        series([1.0, math.nan])
    with pytest.raises(ValueError):
        series([])


def test_immutable():
    s = series([1.0, 2.0])
    with pytest.raises(ValueError):
        s.coeffs[0] = 3.0


@pytest.mark.parametrize(
    "a, s, b, t, expected",
    [
        (1, [1, 2], 1, [3, 4], [4, 6]),
        (2, [1, 0, 1], 0, [9, 9, 9], [2, 0, 2]),
        (1, [1], 1, [0, 0, 5], [1, 0, 5]),
    ],
)
def test_linear_combine(a, s, b, t, expected):
    np.testing.assert_array_equal(linear_combine(a, series(s), b, series(t)).coeffs, expected)


def test_linear_combine_self_cancels():
    s = series([0.3, -1.7, 2.2])
    assert not np.any(linear_combine(1, s, -1, s).coeffs)


def test_multiply_examples():
    np.testing.assert_array_equal(multiply(series([1, 1], 2), series([1, -1], 2)).coeffs, [1, 0, -1])
    np.testing.assert_array_equal(multiply(series([0.5, 0.5], 2), series([0.5, 0.5], 2)).coeffs, [0.25, 0.5, 0.25])
    assert not np.any(multiply(series([1, 2, 3]), zeros(2)).coeffs)


def test_multiply_truncates():
    assert multiply(series([1, 1]), series([1, 1])).order == 1


def test_int_pow_examples():
    np.testing.assert_array_equal(int_pow(series([0.5, 0.5], 2), 2).coeffs, [0.25, 0.5, 0.25])
    np.testing.assert_array_equal(int_pow(series([1, 1, 0, 0]), 3).coeffs, [1, 3, 3, 1])
    s = series([0.3, 0.2, 0.5])
    np.testing.assert_array_equal(int_pow(s, 1).coeffs, s.coeffs)
    np.testing.assert_array_equal(int_pow(s, 0).coeffs, [1, 0, 0])


@given(st.lists(st.floats(0.0, 1.0), min_size=1, max_size=10), st.integers(1, 9))
def test_int_pow_matches_repeated_multiply(c, m):
    s = series(c)
    ref = one(s.order)
    for _ in range(m):
        ref = multiply(ref, s)
    np.testing.assert_allclose(int_pow(s, m).coeffs, ref.coeffs, rtol=1e-14, atol=0)


@given(st.lists(st.integers(-3, 3), min_size=1, max_size=6), st.integers(1, 6))
def test_int_pow_exact_on_small_integers(c, m):
    s = series(c)
    ref = one(s.order)
    for _ in range(m):
        ref = multiply(ref, s)
    np.testing.assert_array_equal(int_pow(s, m).coeffs, ref.coeffs)


@given(coeff_lists, coeff_lists, coeff_lists)
def test_ring_laws_exact(a, b, c):
    order = max(len(a), len(b), len(c)) - 1
    s, t, u = (series(v, order) for v in (a, b, c))
    np.testing.assert_array_equal(multiply(s, t).coeffs, multiply(t, s).coeffs)
    np.testing.assert_array_equal(multiply(multiply(s, t), u).coeffs, multiply(s, multiply(t, u)).coeffs)
    np.testing.assert_array_equal(multiply(one(order), s).coeffs, s.coeffs)


def test_eval_real():
    assert eval_real(series([0.25, 0.5, 0.25]), 1.0) == 1.0
    assert eval_real(series([1, -2, 1]), 1.0) == 0.0
    assert eval_real(series([0.7, 3.0, -2.0]), 0.0) == 0.7
    assert eval_real(series([1, 2, 3]), 2.0) == 17.0


@pytest.mark.parametrize(
    "coeffs, power, quotient",
    [
        ([-0.2, 0.2], 1, [0.2]),
        ([1, 0, -1], 1, [-1, -1]),
        ([0.25, -0.5, 0.25], 2, [0.25]),
    ],
)
def test_divide_examples(coeffs, power, quotient):
    q, residual = divide_by_z_minus_1(series(coeffs), power)
    np.testing.assert_allclose(q.coeffs, quotient, atol=1e-15)
    assert residual == pytest.approx(0.0, abs=1e-15)


def test_divide_reports_residual_without_raising():
    q, residual = divide_by_z_minus_1(series([1.0, 0.0, 0.0]), 1)
    assert residual == pytest.approx(1.0)
    _, r2 = divide_by_z_minus_1(series([1.0, -1.0, 0.0]), 2)
    assert r2 == pytest.approx(1.0)


@given(st.lists(st.floats(-10, 10), min_size=1, max_size=12))
def test_division_round_trip(c):
    # build S = (z - 1) * P so that the residual is zero by construction
    p = series(c + [0.0])
    s = multiply(p, series([-1.0, 1.0], p.order))
    q, _ = divide_by_z_minus_1(s, 1)
    back = multiply(q.padded(s.order), series([-1.0, 1.0], s.order))
    np.testing.assert_allclose(back.coeffs[: s.order], s.coeffs[: s.order], atol=1e-14 * (1 + np.abs(c).sum()) * 8)


@pytest.mark.parametrize("power", [1, 2])
def test_tail_division_matches_forward_on_polynomials(power):
    s = series([0.25, -0.5, 0.25, 0.0]) if power == 2 else series([1.0, 0.0, -3.0, 2.0])
    fwd, _ = divide_by_z_minus_1(s, power)
    np.testing.assert_allclose(divide_by_z_minus_1_from_tail(s, power).coeffs, fwd.coeffs, atol=1e-15)
    assert divide_by_z_minus_1_from_tail(s, power, keep=0).order == 0


def test_tail_division_keeps_relative_accuracy():
    # (z - 1)^2 * sum_k r^k has quotient r^k; the forward sums lose it once r^k < eps
    r, N = 0.5, 200
    q = r ** np.arange(N + 1.0)
    s = multiply(multiply(series(q), series([-1.0, 1.0], N)), series([-1.0, 1.0], N))
    back = divide_by_z_minus_1_from_tail(s, 2, keep=150).coeffs
    np.testing.assert_allclose(back, q[:151], rtol=1e-12)
    with pytest.raises(ValueError):
        divide_by_z_minus_1_from_tail(s, 2, keep=N)


def test_coeff_as_derivative():
    assert coeff_as_derivative(series([1, 1, 1]), 2) == 2.0
    assert coeff_as_derivative(series([0, 0, 0, 6]), 3) == 36.0
    assert coeff_as_derivative(series([0.7, 1.0]), 0) == 0.7
    with pytest.raises(IndexError):
        coeff_as_derivative(series([1, 2]), 2)


@given(st.lists(st.floats(-5, 5), min_size=1, max_size=10), st.integers(0, 9))
def test_coeff_as_derivative_over_factorial(c, k):
    s = series(c)
    k = min(k, s.order)
    assert coeff_as_derivative(s, k) / math.factorial(k) == pytest.approx(s.coeffs[k], rel=1e-15, abs=0)


def test_contour_constant():
    c = contour_coefficients(lambda th: np.ones_like(th), 5, 64)
    np.testing.assert_allclose(c, [1, 0, 0, 0, 0, 0], atol=1e-15)


def test_contour_matches_int_pow():
    c = contour_coefficients(lambda th: (0.5 + 0.5 * np.exp(1j * th)) ** 2, 4, 20)
    ref = int_pow(series([0.5, 0.5], 4), 2).coeffs
    np.testing.assert_allclose(c, ref, atol=1e-10)


def test_contour_matches_szasz_closed_form():
    N = 20
    c = contour_coefficients(lambda th: np.exp(-(1 - np.exp(1j * th))), N, 4 * (N + 1))
    ref = [math.exp(-1) / math.factorial(k) for k in range(N + 1)]
    np.testing.assert_allclose(c, ref, atol=1e-10)


def test_contour_rejects_too_few_samples():
    with pytest.raises(ValueError):
        contour_coefficients(lambda th: np.ones_like(th), 10, 20)


def test_contour_flags_complex_coefficients():
    with pytest.raises(ValueError):
        contour_coefficients(lambda th: 1j * np.ones_like(th), 3, 16)
