import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from opconvex import families as fm
from opconvex.series import contour_coefficients, eval_real, int_pow

from conftest import direct_weights, domain_hi, szasz_direct


def test_bernstein_symmetric_weights():
    np.testing.assert_array_equal(fm.coefficients(fm.bernstein(), 2, 0.5, 2), [0.25, 0.5, 0.25])


def test_bernstein_zero_beyond_degree():
    w = fm.coefficients(fm.bernstein(), 3, 0.4, 6)
    assert not np.any(w[4:])


def test_baskakov_geometric_weights():
    w = fm.coefficients(fm.baskakov(), 1, 1.0, 30)
    np.testing.assert_allclose(w, [2.0 ** -(k + 1) for k in range(31)], rtol=1e-14)


def test_szasz_poisson_weights():
    w = fm.coefficients(fm.szasz(), 1, 1.0, 25)
    np.testing.assert_allclose(w, [math.exp(-1) / math.factorial(k) for k in range(26)], rtol=1e-14)


@pytest.mark.parametrize("name", ["bernstein", "szasz", "baskakov"])
@pytest.mark.parametrize("n", [1, 2, 5, 8])
def test_weights_match_direct_formulas(name, n):
    fam = fm.parse_family(name)
    for x in np.linspace(0, domain_hi(fam), 9):
        np.testing.assert_allclose(fm.coefficients(fam, n, x, 40), direct_weights(name, n, x, 40), rtol=1e-12, atol=1e-300)


def test_schurer_weights():
    w = fm.coefficients(fm.schurer(2), 1, 0.5, 20)
    np.testing.assert_allclose(w, [szasz_direct(1, 0.5, k, p=2) for k in range(21)], rtol=1e-13)


def test_generating_series_examples():
    np.testing.assert_allclose(fm.generating_series(fm.bernstein(), 1, 0.3, 1).coeffs, [0.7, 0.3])
    np.testing.assert_array_equal(fm.generating_series(fm.szasz(), 2, 0.0, 5).coeffs, [1, 0, 0, 0, 0, 0])
    np.testing.assert_array_equal(fm.generating_series(fm.baskakov(), 1, 1.0, 2).coeffs, [0.5, 0.25, 0.125])


def test_tail_mass_examples():
    assert fm.tail_mass(fm.bernstein(), 3, 0.7, 3) == 0.0
    assert fm.tail_mass(fm.szasz(), 1, 1.0, 0) == pytest.approx(1 - math.exp(-1), rel=1e-14)
    for fam in (fm.bernstein(), fm.szasz(), fm.baskakov(), fm.schurer(1)):
        assert fm.tail_mass(fam, 3, 0.0, 0) == 0.0


@given(
    st.sampled_from(["bernstein", "szasz", "baskakov", "schurer:p=2"]),
    st.integers(1, 8),
    st.floats(0, 1),
    st.integers(0, 64),
)
def test_weights_nonnegative_and_normalized(name, n, u, N):
    fam = fm.parse_family(name)
    x = u * domain_hi(fam)
    w = fm.coefficients(fam, n, x, N)
    assert np.all(w >= -1e-15)
    assert w.sum() <= 1 + 1e-12
    tail = fm.tail_mass(fam, n, x, N)
    assert tail >= -1e-12
    assert eval_real(fm.generating_series(fam, n, x, N), 1.0) + tail == pytest.approx(1.0, abs=1e-12)


def test_bernstein_full_mass():
    for n in range(1, 9):
        for x in np.linspace(0, 1, 11):
            assert fm.coefficients(fm.bernstein(), n, x, n + 3).sum() == pytest.approx(1.0, abs=1e-14)
            assert fm.tail_mass(fm.bernstein(), n, x, n) == 0.0


@pytest.mark.parametrize("name", ["bernstein", "szasz", "baskakov"])
def test_power_form(name):
    fam = fm.parse_family(name)
    assert fam.power_form
    N = 48
    for n in range(1, 6):
        for x in np.linspace(0, domain_hi(fam) / 2, 5):
            base = fm.generating_series(fam, 1, x, N)
            np.testing.assert_allclose(fm.generating_series(fam, n, x, N).coeffs, int_pow(base, n).coeffs, atol=1e-12)


def test_schurer_not_power_form():
    assert not fm.schurer(1).power_form
    assert not fm.schurer(0).power_form


@pytest.mark.parametrize(
    "phi, closed",
    [(fm.phi_bernstein, fm.bernstein()), (fm.phi_szasz, fm.szasz()), (fm.phi_baskakov, fm.baskakov())],
)
def test_mastroianni_matches_closed_forms(phi, closed):
    fam = fm.mastroianni(phi, domain=closed.domain)
    for n in (1, 2, 4):
        for x in np.linspace(0, domain_hi(closed), 7):
            np.testing.assert_allclose(fm.coefficients(fam, n, x, 40), fm.coefficients(closed, n, x, 40), atol=1e-10)


def test_mastroianni_schurer_phi():
    fam = fm.mastroianni(fm.phi_schurer(2))
    np.testing.assert_allclose(fm.coefficients(fam, 1, 0.5, 20), fm.coefficients(fm.schurer(2), 1, 0.5, 20), atol=1e-12)


def test_mastroianni_nonfinite_oracle_rejected():
    bad = fm.PhiOracle(lambda n, k, x: math.inf, name="inf")
    with pytest.raises(ValueError):
        fm.coefficients(fm.mastroianni(bad), 1, 0.5, 3)


@pytest.mark.parametrize("phi", [fm.phi_bernstein, fm.phi_szasz, fm.phi_baskakov, fm.phi_schurer(1)])
def test_validate_phi_accepts_standard_sequences(phi):
    xs = np.linspace(0, 1, 6) if phi is fm.phi_bernstein else np.linspace(0, 4, 9)
    for n in (1, 3):
        r = fm.validate_phi(phi, n, 8, xs)
        assert r.verdict == "PASS", r.detail


def test_validate_phi_flags_increasing_phi():
    r = fm.validate_phi(fm.PhiOracle(lambda n, k, x: [1 + x, 1.0][k] if k < 2 else 0.0, "1+x"), 1, 3, [0.0, 0.5])
    assert r.verdict == "FAIL"
    assert "k=1" in r.detail


def test_validate_phi_flags_bad_normalization():
    r = fm.validate_phi(fm.PhiOracle(lambda n, k, x: 2.0 * math.exp(-x) * (-1) ** k, "2e^-x"), 1, 2, [0.5])
    assert r.verdict == "FAIL"
    assert "phi_1(0)" in r.detail


def test_first_moment():
    assert fm.first_moment(fm.bernstein(), 4, 0.25, 4) == pytest.approx(1.0, abs=1e-15)
    assert fm.first_moment(fm.szasz(), 2, 1.5, 80) == pytest.approx(3.0, abs=1e-10)
    assert fm.first_moment(fm.schurer(1), 2, 1.0, 80) == pytest.approx(3.0, abs=1e-10)


def test_domain_errors():
    with pytest.raises(fm.DomainError):
        fm.coefficients(fm.bernstein(), 2, 1.5, 3)
    with pytest.raises(fm.DomainError):
        fm.coefficients(fm.szasz(), 2, -0.1, 3)
    with pytest.raises(ValueError):
        fm.coefficients(fm.szasz(), 0, 0.5, 3)


def test_parse_family():
    assert fm.parse_family("Bernstein").kind == "bernstein"
    assert fm.parse_family("schurer:p=2").p == 2
    assert fm.parse_family("schurer:p=2").name == "schurer:p=2"
    with pytest.raises(ValueError):
        fm.parse_family("meyer-koenig-zeller")


def test_default_order_meets_tail_target():
    for fam in (fm.szasz(), fm.baskakov(), fm.schurer(1)):
        for n in (1, 3):
            for x in (0.5, 2.0, 4.0):
                N = fm.default_order(fam, n, x)
                assert fm.tail_mass(fam, n, x, N) < 1e-10
                assert fm.tail_mass(fam, n, x, N - 1) >= 1e-10
    assert fm.default_order(fm.bernstein(), 5, 0.3) == 5


@pytest.mark.parametrize("name", ["bernstein", "szasz", "baskakov", "schurer:p=1"])
def test_contour_agrees_with_direct_weights(name):
    fam = fm.parse_family(name)
    for n in (1, 2, 4):
        for x in np.linspace(0, domain_hi(fam), 5):
            c = contour_coefficients(fm.boundary_values(fam, n, x), 48, 4 * 49 * 4)
            np.testing.assert_allclose(c, fm.coefficients(fam, n, x, 48), atol=1e-8)
