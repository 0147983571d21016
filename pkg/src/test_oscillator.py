import math

import mpmath
import numpy as np
import pytest
import sympy
from scipy import special

from models.errors import DimensionError, DomainError
from oscillator.algebra import (
    build_ladder,
    build_N_H,
    build_P,
    build_X,
    coeff_b,
    commutator_errata,
    commutator_exact,
    commutator_spectrum,
    fock_gram,
    legendre_basis,
    moment_sequence,
    normalization_sum,
    recurrence_coefficients,
    rho,
    rho_closed,
    spectrum,
    truncation_tail,
    weighted_powers,
)

N = 32
INNER = slice(0, N - 1)


def test_coefficient_values():
    assert coeff_b(0) == pytest.approx(1.0 / math.sqrt(3.0), rel=1e-15)
    assert coeff_b(1) == pytest.approx(2.0 / math.sqrt(15.0), rel=1e-15)
    assert coeff_b(10**6) == pytest.approx(0.5, abs=1e-12)


def test_coefficients_decrease_towards_one_half():
    b = recurrence_coefficients(500).values
    assert np.all(np.diff(b) < 0.0)
    assert np.all(b > 0.5)
    np.testing.assert_allclose(b**2, 1.0 / (4.0 - 1.0 / (np.arange(500) + 1.0) ** 2), rtol=1e-14)


def test_coefficient_domain():
    with pytest.raises(DomainError):
        coeff_b(-1)


def test_carleman_partial_sums_diverge():
    for count in (10, 100, 1000):
        total = sum(1.0 / coeff_b(k) for k in range(count))
        assert 2 * count - 1 <= total < 2 * count


@pytest.mark.parametrize("n, expected", [(0, sympy.Integer(1)), (1, sympy.Rational(2, 3)), (2, sympy.Rational(16, 45))])
def test_rho_small_values(n, expected):
    assert rho(n) == pytest.approx(float(expected), rel=1e-15)


def test_rho_closed_form_against_sympy():
    for n in range(12):
        exact = 2**n * sympy.factorial(n) ** 2 / (sympy.factorial2(2 * n - 1) * sympy.factorial2(2 * n + 1))
        assert rho_closed(n) == pytest.approx(float(exact), rel=1e-15)


def test_running_product_matches_closed_form():
    running = moment_sequence(201).values
    closed = np.array([rho_closed(n) for n in range(201)])
    np.testing.assert_allclose(running, closed, rtol=1e-13)
    assert rho(200) == pytest.approx(rho_closed(200), rel=1e-13)


@pytest.mark.parametrize("n", [40, 60, 100])
def test_rho_root_approaches_one_half_from_above(n):
    assert 0.5 < rho(n) ** (1.0 / n) < 0.55


def test_position_and_momentum_structure():
    x, p = build_X(N).entries, build_P(N).entries
    np.testing.assert_array_equal(x, x.conj().T)
    np.testing.assert_array_equal(p, p.conj().T)
    b = recurrence_coefficients(N - 1).values
    np.testing.assert_array_equal(np.diag(x, -1).real, b)
    np.testing.assert_array_equal(np.diag(p, -1), 1j * b)


def test_ladder_operators_are_adjoint():
    raising, lowering = build_ladder(N)
    np.testing.assert_array_equal(raising.entries, lowering.entries.conj().T)
    e0 = np.zeros(N)
    e0[0] = 1.0
    np.testing.assert_allclose(raising.apply(e0)[1], math.sqrt(2.0) * coeff_b(0), rtol=1e-15)
    np.testing.assert_array_equal(lowering.apply(e0), np.zeros(N))


def test_raising_from_position_and_momentum():
    raising, _ = build_ladder(N)
    combined = (build_X(N).entries - 1j * build_P(N).entries) / math.sqrt(2.0)
    np.testing.assert_allclose(combined, raising.entries, atol=1e-14)


def test_hamiltonian_identities_on_interior():
    x, p = build_X(N), build_P(N)
    number, hamiltonian = build_N_H(N)
    quadratic = (x @ x).entries + (p @ p).entries
    np.testing.assert_allclose(quadratic[INNER, INNER], hamiltonian.entries[INNER, INNER], atol=1e-14)
    np.testing.assert_array_equal(np.diag(number.entries).real, np.arange(N))
    off_diagonal = hamiltonian.interior() - np.diag(np.diag(hamiltonian.interior()))
    assert np.max(np.abs(off_diagonal)) < 1e-15


def test_hamiltonian_diagonal_is_spectrum():
    _, hamiltonian = build_N_H(N)
    energies = np.diag(hamiltonian.entries).real[: N - 1]
    np.testing.assert_allclose(energies, spectrum("H_eigen", N - 1).values, atol=1e-14)
    assert energies[0] == pytest.approx(2.0 / 3.0, abs=1e-15)
    assert energies[1] == pytest.approx(6.0 / 5.0, abs=1e-15)
    assert energies[2] == pytest.approx(110.0 / 105.0, abs=1e-15)


def test_spectrum_conventions():
    h_eigen = spectrum("H_eigen", 200).values
    assert np.all(np.diff(h_eigen[1:]) < 0.0)
    assert h_eigen[-1] == pytest.approx(1.0, abs=1e-4)
    gk = spectrum("GK", 200).values
    assert gk[0] == 0.0
    assert gk[1] == pytest.approx(2.0 / 3.0, rel=1e-15)
    assert np.all(np.diff(gk[1:]) < 0.0)
    assert np.all(gk[1:] > 0.5)
    with pytest.raises(DomainError):
        spectrum("harmonic", 3)


def test_ladder_commutator_matches_position_momentum():
    raising, lowering = build_ladder(N)
    ladder = lowering.commutator(raising).entries
    canonical = build_X(N).commutator(build_P(N)).entries / 1j
    np.testing.assert_allclose(ladder[INNER, INNER], canonical[INNER, INNER], atol=1e-14)


def test_commutator_diagonal():
    diagonal = commutator_spectrum(N)[: N - 1]
    exact = np.array([commutator_exact(n) for n in range(N - 1)])
    np.testing.assert_allclose(diagonal, exact, atol=1e-14)
    for n in range(N - 1):
        assert exact[n] == pytest.approx(-2j / ((2 * n - 1) * (2 * n + 1) * (2 * n + 3)), rel=1e-13)
    assert exact[0] == pytest.approx(2j / 3.0, rel=1e-15)


def test_quoted_commutator_fraction_has_wrong_sign_everywhere():
    findings = commutator_errata(10)
    assert len(findings) == 10
    for finding in findings:
        assert finding.computed == pytest.approx(-finding.printed, rel=1e-12)


@pytest.mark.parametrize("builder, minimum", [(build_X, 2), (build_P, 2), (build_N_H, 3), (commutator_spectrum, 3)])
def test_dimension_guard(builder, minimum):
    with pytest.raises(DimensionError):
        builder(minimum - 1)


def test_operators_are_immutable():
    x = build_X(4)
    with pytest.raises(ValueError):
        x.entries[0, 1] = 5.0


def test_fock_basis_is_orthonormal():
    np.testing.assert_allclose(fock_gram(15), np.eye(16), atol=1e-10)
    with pytest.raises(DimensionError):
        fock_gram(40, order=16)


def test_legendre_basis_scaling():
    x = np.linspace(-0.9, 0.9, 7)
    psi = legendre_basis(6, x)
    for n in range(7):
        np.testing.assert_allclose(psi[n], math.sqrt(2 * n + 1) * special.eval_legendre(n, x), atol=1e-14)


def test_weighted_powers():
    s = 0.3
    terms = weighted_powers(s, 30)
    expected = np.array([s**n / rho_closed(n) for n in range(30)])
    np.testing.assert_allclose(terms, expected, rtol=1e-13)


@pytest.mark.parametrize("s", [0.0, 0.01, 0.18, 0.3, 0.45])
def test_normalization_sum(s):
    assert normalization_sum(s) == pytest.approx(float(mpmath.hyp2f1(0.5, 1.5, 1, 2 * s)), rel=1e-13)
    assert normalization_sum(s) == pytest.approx(float(np.sum(weighted_powers(s, 2000))), rel=1e-12)


def test_normalization_sum_grows_without_bound():
    values = [normalization_sum(s) for s in np.linspace(0.0, 0.499, 50)]
    assert np.all(np.diff(values) > 0.0)
    # Euler's transformation gives (2/pi) E(sqrt(x)) / (1 - x) with x = 2s
    x = 0.998
    assert normalization_sum(x / 2.0) == pytest.approx(2.0 / math.pi * special.ellipe(x) / (1.0 - x), rel=1e-10)
    assert normalization_sum(x / 2.0) > 300.0
    with pytest.raises(DomainError):
        normalization_sum(0.5)


def test_truncation_tail():
    assert truncation_tail(0.0, 8) == 0.0
    assert truncation_tail(0.36, 128) < 1e-14
    assert truncation_tail(0.36, 8) > 1e-14
