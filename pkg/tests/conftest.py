"""Closed-form weight oracles built from math.comb / math.factorial.

These deliberately avoid the ratio recurrences used in the package.
"""

import math

import pytest

from opconvex import families as fm


def bernstein_direct(n, x, k):
    if k > n:
        return 0.0
    return math.comb(n, k) * x**k * (1 - x) ** (n - k)


def szasz_direct(n, x, k, p=0):
    lam = (n + p) * x
    return math.exp(-lam) * lam**k / math.factorial(k)


def baskakov_direct(n, x, k):
    return math.comb(n + k - 1, k) * x**k / (1 + x) ** (n + k)


DIRECT = {
    "bernstein": bernstein_direct,
    "szasz": szasz_direct,
    "baskakov": baskakov_direct,
}


def direct_weights(name, n, x, N):
    return [DIRECT[name](n, x, k) for k in range(N + 1)]


@pytest.fixture(params=["bernstein", "szasz", "baskakov"])
def family(request):
    return fm.parse_family(request.param)


def domain_hi(fam):
    return 1.0 if fam.kind == "bernstein" else 4.0
