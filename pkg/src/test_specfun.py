import math

import mpmath
import numpy as np
import pytest
import sympy
from scipy import integrate, special

from kernels.specfun import (
    double_factorial,
    elliptic,
    gauss_2f1,
    legendre_generating_closed,
    legendre_generating_series,
    legendre_pn,
    legendre_pn_explicit,
    legendre_pnu,
    legendre_pnu_from_gap,
    pochhammer,
)
from models.entities import SeriesControl
from models.errors import DomainError, NoConvergence

mpmath.mp.dps = 30


@pytest.mark.parametrize("a, n, expected", [(0.5, 0, 1.0), (0.5, 2, 0.75), (1.0, 5, 120.0), (-2.0, 3, 0.0)])
def test_pochhammer(a, n, expected):
    assert pochhammer(a, n) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize("n, expected", [(-1, 1.0), (0, 1.0), (1, 1.0), (5, 15.0), (6, 48.0), (11, 10395.0)])
def test_double_factorial(n, expected):
    assert double_factorial(n) == expected


def test_double_factorial_rejects_below_minus_one():
    with pytest.raises(DomainError):
        double_factorial(-3)


def test_gauss_2f1_constant_term_at_origin():
    result = gauss_2f1(0.7, -1.3, 2.5, 0.0)
    assert result.value == 1.0
    assert result.terms == 1


def test_gauss_2f1_logarithm_identity():
    # 2F1(1, 1; 2; z) = -ln(1 - z)/z
    result = gauss_2f1(1.0, 1.0, 2.0, 0.5)
    assert result.value.real == pytest.approx(2.0 * math.log(2.0), rel=1e-14)
    assert result.value.imag == 0.0


def test_gauss_2f1_matches_brute_partial_sum():
    z = 0.18
    brute = sum(
        pochhammer(0.5, n) * pochhammer(1.5, n) / (pochhammer(1.0, n) * math.factorial(n)) * z**n for n in range(41)
    )
    assert gauss_2f1(0.5, 1.5, 1.0, z).value.real == pytest.approx(brute, rel=1e-12)


@pytest.mark.parametrize("z", [0.3 + 0.4j, -0.85, 0.9j, 0.95])
def test_gauss_2f1_against_mpmath(z):
    expected = complex(mpmath.hyp2f1(0.5, 1.5, 1.0, z))
    np.testing.assert_allclose(gauss_2f1(0.5, 1.5, 1.0, z).value, expected, rtol=1e-13)


def test_gauss_2f1_terminates_for_negative_integer_parameter():
    result = gauss_2f1(-5.0, 6.0, 1.0, 0.3)
    assert result.terms == 6
    # 2F1(-n, n+1; 1; (1-x)/2) = P_n(x)
    assert result.value.real == pytest.approx(legendre_pn(5, 0.4), rel=1e-12)


@pytest.mark.parametrize("z", [1.0, -1.0, 0.8 + 0.8j, 2.0])
def test_gauss_2f1_outside_unit_disc(z):
    with pytest.raises(DomainError):
        gauss_2f1(0.5, 1.5, 1.0, z)


def test_gauss_2f1_rejects_nonpositive_integer_c():
    with pytest.raises(DomainError):
        gauss_2f1(0.5, 1.5, -2.0, 0.1)


def test_gauss_2f1_exhausts_budget():
    with pytest.raises(NoConvergence):
        gauss_2f1(0.5, 1.5, 1.0, 0.9, SeriesControl(tol=1e-16, max_terms=10))


@pytest.mark.parametrize("x", [-1.0, -0.3, 0.0, 0.3, 0.99])
def test_legendre_pn_low_degrees(x):
    assert legendre_pn(0, x) == 1.0
    assert legendre_pn(1, x) == pytest.approx(x, abs=1e-16)
    assert legendre_pn(2, x) == pytest.approx(1.5 * x * x - 0.5, abs=1e-15)


def test_legendre_pn_vectorised_against_scipy():
    grid = np.linspace(-1.0, 1.0, 41)
    for n in range(21):
        np.testing.assert_allclose(legendre_pn(n, grid), special.eval_legendre(n, grid), atol=1e-13)


@pytest.mark.parametrize("n, x", [(5, 0.7), (4, -0.25), (20, 0.95), (13, -0.61)])
def test_recurrence_matches_explicit_sum(n, x):
    assert legendre_pn(n, x) == pytest.approx(legendre_pn_explicit(n, x), abs=1e-13)


def test_legendre_explicit_on_grid():
    grid = np.linspace(-1.0, 1.0, 41)
    for n in range(21):
        explicit = np.array([legendre_pn_explicit(n, x) for x in grid])
        np.testing.assert_allclose(explicit, legendre_pn(n, grid), atol=1e-12)


@pytest.mark.parametrize("n, x", [(0, 0.5), (2, 1.0), (3, sympy.Rational(1, 3)), (7, sympy.Rational(-3, 8))])
def test_legendre_explicit_against_sympy(n, x):
    exact = sympy.legendre(n, x)
    assert legendre_pn_explicit(n, float(x)) == pytest.approx(float(exact), abs=1e-15)


@pytest.mark.parametrize("nu", [0.5, 1.5])
def test_legendre_pnu_at_one(nu):
    assert legendre_pnu(nu, 1.0) == 1.0


@pytest.mark.parametrize("nu", [0.5, 1.5, -0.5, 0.3, 2.25])
@pytest.mark.parametrize("x", [0.0, 0.4, 0.9])
def test_legendre_pnu_series_against_mpmath(nu, x):
    assert legendre_pnu(nu, x) == pytest.approx(float(mpmath.legenp(nu, 0, x)), rel=1e-13)


@pytest.mark.parametrize("nu", [0.5, 1.5, -0.5])
@pytest.mark.parametrize("x", [-0.3, -0.9, -0.999999])
def test_legendre_pnu_elliptic_branch_against_mpmath(nu, x):
    assert legendre_pnu(nu, x) == pytest.approx(float(mpmath.legenp(nu, 0, x)), rel=1e-12)


@pytest.mark.parametrize("nu", [0.5, 1.5])
@pytest.mark.parametrize("x", np.linspace(-0.5, 0.0, 6)[:-1])
def test_elliptic_branch_agrees_with_direct_series(nu, x):
    direct = gauss_2f1(-nu, nu + 1.0, 1.0, (1.0 - x) / 2.0).value.real
    assert legendre_pnu(nu, x) == pytest.approx(direct, rel=1e-12)


def test_legendre_pnu_from_gap_keeps_precision_near_minus_one():
    gap = 1e-12
    expected = mpmath.legenp(0.5, 0, mpmath.mpf(gap) - 1)
    assert legendre_pnu_from_gap(0.5, gap) == pytest.approx(float(expected), rel=1e-12)


def test_legendre_pnu_integer_degree_reduces_to_polynomial():
    assert legendre_pnu(3.0, -0.4) == pytest.approx(legendre_pn(3, -0.4), rel=1e-12)


@pytest.mark.parametrize("x", [-1.0, -1.5])
def test_legendre_pnu_domain(x):
    with pytest.raises(DomainError):
        legendre_pnu(0.5, x)


def test_legendre_pnu_generic_degree_near_minus_one_runs_out_of_terms():
    with pytest.raises(NoConvergence):
        legendre_pnu(0.3, -0.9999, SeriesControl(tol=1e-16, max_terms=1000))


def test_elliptic_at_zero_modulus():
    ell = elliptic(0.0)
    assert (ell.K, ell.E, ell.D) == (math.pi / 2, math.pi / 2, math.pi / 4)


@pytest.mark.parametrize("k", [0.1, 0.5, 0.9, 0.999])
def test_elliptic_against_scipy(k):
    ell = elliptic(k)
    m = k * k
    assert ell.K == pytest.approx(special.ellipk(m), rel=1e-13)
    assert ell.E == pytest.approx(special.ellipe(m), rel=1e-13)
    assert ell.D == pytest.approx((ell.K - ell.E) / m, rel=1e-12)


def test_elliptic_against_defining_integrals():
    k = 0.5
    ell = elliptic(k)

    def root(theta):
        return math.sqrt(1.0 - k * k * math.sin(theta) ** 2)

    K = integrate.quad(lambda th: 1.0 / root(th), 0.0, math.pi / 2, epsabs=1e-14, epsrel=1e-14)[0]
    E = integrate.quad(root, 0.0, math.pi / 2, epsabs=1e-14, epsrel=1e-14)[0]
    D = integrate.quad(lambda th: math.sin(th) ** 2 / root(th), 0.0, math.pi / 2, epsabs=1e-14, epsrel=1e-14)[0]
    assert ell.K == pytest.approx(K, rel=1e-12)
    assert ell.E == pytest.approx(E, rel=1e-12)
    assert ell.D == pytest.approx(D, rel=1e-12)
    assert ell.D == pytest.approx((ell.K - ell.E) / 0.25, rel=1e-12)


def test_elliptic_close_to_one_uses_complementary_parameter():
    k = 0.999999
    ell = elliptic(k)
    assert ell.K == pytest.approx(special.ellipkm1((1.0 - k) * (1.0 + k)), rel=1e-12)


@pytest.mark.parametrize("k", [1.0, 1.0 - 1e-13, -0.1, 1.5])
def test_elliptic_domain(k):
    with pytest.raises(DomainError):
        elliptic(k)


@pytest.mark.parametrize("x, w", [(0.3, 0.2 + 0.1j), (-0.7, 0.35), (0.9, -0.3j)])
def test_generating_function_series_matches_closed_form(x, w):
    series = legendre_generating_series(1.5, x, w, 200)
    np.testing.assert_allclose(series, legendre_generating_closed(1.5, x, w), atol=1e-12)


@pytest.mark.parametrize("x, w", [(0.3, 0.4), (-0.5, 0.2 - 0.3j)])
def test_generating_function_reduces_to_classical_one(x, w):
    # gamma = 1 is the classical Legendre generating function
    expected = (1.0 - 2.0 * x * w + w * w) ** -0.5
    np.testing.assert_allclose(legendre_generating_closed(1.0, x, w), expected, rtol=1e-13)


def test_generating_function_series_survives_long_sums():
    # 171! overflows a double; the weights must not pass through it
    with np.errstate(all="raise"):
        series = legendre_generating_series(1.5, 0.4, 0.5 + 0.2j, 600)
    assert np.isfinite(series)
    assert series == pytest.approx(legendre_generating_closed(1.5, 0.4, 0.5 + 0.2j), abs=1e-12)
