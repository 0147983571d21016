"""Barut-Girardello coherent states of the Legendre oscillator.

These are eigenvectors of the lowering operator a-, defined on the disc
|z| < 1/sqrt(2), resolved by a measure on t = |z|^2 in [0, 1/2].
"""
import math
from functools import lru_cache
from typing import List, Optional, Sequence

import numpy as np
from scipy import special

from config.settings import settings
from kernels.quadrature import integrate, integrate_with_atoms
from kernels.specfun import (
    ELLIPTIC_DEGREES,
    gauss_2f1,
    legendre_generating_closed,
    legendre_pnu_from_gap,
    pochhammer,
)
from models.entities import (
    BGMeasure,
    BGState,
    EigenResidual,
    Finding,
    MomentReport,
    MomentRow,
    WeightAtom,
)
from models.errors import DimensionError, DomainError, TruncationError
from oscillator.algebra import (
    build_ladder,
    coeff_b_squared,
    legendre_basis,
    normalization_sum,
    required_truncation,
    rho,
    truncation_tail,
)
from utils.logger import logger

BG_RADIUS = 1.0 / math.sqrt(2.0)
TAIL_LIMIT = 1e-14
SINGULAR_WINDOW = 1e-6
LIMIT_STEP = 1e-5
NORM_SLACK = 1e-10


def _check_disc(z: complex) -> None:
    if abs(z) >= BG_RADIUS:
        raise DomainError(f"|z|={abs(z):.6g} lies outside the disc |z| < 1/sqrt(2)")


def amplitude_ladder(z: complex, dim: int) -> np.ndarray:
    """z^n / sqrt(rho_n) for n < dim, by ratio recursion."""
    ratios = z / np.sqrt(2.0 * np.array([coeff_b_squared(k) for k in range(dim - 1)]))
    return np.concatenate(([1.0 + 0.0j], np.cumprod(ratios)))


def bg_state(z: complex, dim: Optional[int] = None) -> BGState:
    z = complex(z)
    dim = dim or settings.TRUNCATION
    _check_disc(z)
    if dim < 2:
        raise DimensionError(f"BG state needs dim >= 2, got {dim}")
    s = abs(z) ** 2
    tail = truncation_tail(s, dim)
    if tail > TAIL_LIMIT:
        raise TruncationError(
            f"BG state at |z|={abs(z):.4g} leaves {tail:.2e} of its weight beyond dim={dim}; "
            f"use --truncation >= {required_truncation(s, TAIL_LIMIT)}"
        )
    norm_sq = normalization_sum(s)
    amplitudes = amplitude_ladder(z, dim) / math.sqrt(norm_sq)
    return BGState(z=z, dim=dim, amplitudes=amplitudes, norm_sq_raw=norm_sq)


def bg_eigen_residual(state: BGState) -> EigenResidual:
    """||(a- - z) c|| on interior indices, plus the component cut by truncation."""
    _, lowering = build_ladder(state.dim)
    residual = lowering.apply(state.amplitudes) - state.z * state.amplitudes
    return EigenResidual(interior=float(np.linalg.norm(residual[:-1])), boundary=float(abs(residual[-1])))


def bg_wavefunction_series(state: BGState, x):
    """sum_n c_n psi_n(x) over the truncated amplitudes."""
    psi = legendre_basis(state.dim - 1, x)
    value = np.tensordot(state.amplitudes, psi, axes=1)
    return complex(value) if np.ndim(value) == 0 else value


def bg_wavefunction_closed(z: complex, x: float) -> complex:
    """Closed form from the Legendre generating function with gamma = 3/2."""
    z = complex(z)
    _check_disc(z)
    if not -1.0 <= x <= 1.0:
        raise DomainError(f"x={x} lies outside [-1, 1]")
    value = legendre_generating_closed(1.5, x, math.sqrt(2.0) * z)
    return value / math.sqrt(normalization_sum(abs(z) ** 2))


def bg_overlap(z1: complex, z2: complex) -> complex:
    """<z1|z2> = F(2 conj(z1) z2) / sqrt(F(2|z1|^2) F(2|z2|^2)), F = 2F1(1/2, 3/2; 1; .)."""
    z1, z2 = complex(z1), complex(z2)
    _check_disc(z1)
    _check_disc(z2)
    cross = gauss_2f1(0.5, 1.5, 1.0, 2.0 * z1.conjugate() * z2).value
    return cross / math.sqrt(normalization_sum(abs(z1) ** 2) * normalization_sum(abs(z2) ** 2))


@lru_cache(maxsize=65536)
def _weight_numerator(t: float) -> float:
    # (16t - 5) P_{1/2}(4t - 1) - 3 P_{3/2}(4t - 1), with 1 + x = 4t
    gap = 4.0 * t
    return (16.0 * t - 5.0) * legendre_pnu_from_gap(0.5, gap) - 3.0 * legendre_pnu_from_gap(1.5, gap)


def bg_weight(t: float) -> float:
    """Printed BG density [(16t-5)P_{1/2}(4t-1) - 3P_{3/2}(4t-1)] / (2(2t-1)).

    The quotient is removable at t = 1/2, where it tends to -1/2.
    """
    if not 0.0 < t <= 0.5:
        raise DomainError(f"BG density is defined on (0, 1/2], got t={t}")
    if abs(2.0 * t - 1.0) < SINGULAR_WINDOW:
        slope = (_weight_numerator(0.5 + LIMIT_STEP) - _weight_numerator(0.5 - LIMIT_STEP)) / (2.0 * LIMIT_STEP)
        return slope / 4.0
    return _weight_numerator(t) / (2.0 * (2.0 * t - 1.0))


def bg_weight_derivative_form(t: float) -> float:
    """-(2t)^{3/2} d/dt[(2t)^{-1/2} P_{1/2}(4t-1)] by central differences."""
    if not 0.0 < t <= 0.5:
        raise DomainError(f"BG density is defined on (0, 1/2], got t={t}")
    h = LIMIT_STEP * min(t, 0.1)

    def inner(u: float) -> float:
        return legendre_pnu_from_gap(0.5, 4.0 * u) / math.sqrt(2.0 * u)

    return -((2.0 * t) ** 1.5) * (inner(t + h) - inner(t - h)) / (2.0 * h)


def bg_q(tau: float) -> float:
    """q(tau) = -d/dtau[tau^{-1/2} P_{1/2}(2tau - 1)] by central differences."""
    if not 0.0 < tau <= 1.0:
        raise DomainError(f"q is defined on (0, 1], got tau={tau}")
    h = LIMIT_STEP * min(tau, 1.0)

    def inner(u: float) -> float:
        return legendre_pnu_from_gap(0.5, 2.0 * u) / math.sqrt(u)

    return -(inner(tau + h) - inner(tau - h)) / (2.0 * h)


def q_identity_rhs(n: int) -> float:
    return math.exp(2.0 * special.gammaln(n + 1) - special.gammaln(n + 0.5) - special.gammaln(n + 1.5))


def verify_q_identity(n: int, tol: float = 1e-6, quad_tol: float = 1e-9) -> MomentRow:
    """Check int_0^1 q(tau) tau^{n+3/2} dtau + 1 against Gamma(n+1)^2 / (Gamma(n+1/2) Gamma(n+3/2))."""
    integral = integrate(lambda tau: bg_q(tau) * tau ** (n + 1.5), 0.0, 1.0, quad_tol).value
    computed, expected = integral + 1.0, q_identity_rhs(n)
    rel_error = abs(computed - expected) / abs(expected)
    return MomentRow(
        n=n, computed=computed, expected=expected, rel_error=float(rel_error), passed=bool(rel_error <= tol)
    )


def legendre_moment_identity(sigma: float, nu: float, quad_tol: float = 1e-11) -> MomentRow:
    """int_0^1 x^sigma P_nu(2x - 1) dx against Gamma(sigma+1)^2 / (Gamma(sigma+nu+2) Gamma(1+sigma-nu))."""
    if sigma <= -1.0:
        raise DomainError(f"moment diverges for sigma={sigma}")
    if nu not in ELLIPTIC_DEGREES and not (float(nu).is_integer() and nu >= 0):
        raise DomainError(f"P_nu near x = -1 is only available for integer or elliptic degrees, got nu={nu}")
    integral = integrate(lambda x: x**sigma * legendre_pnu_from_gap(nu, 2.0 * x), 0.0, 1.0, quad_tol).value
    expected = special.gamma(sigma + 1.0) ** 2 * special.rgamma(sigma + nu + 2.0) * special.rgamma(1.0 + sigma - nu)
    rel_error = abs(integral - expected) / max(abs(expected), 1.0)
    return MomentRow(
        n=0, computed=integral, expected=float(expected), rel_error=float(rel_error), passed=bool(rel_error <= 1e-8)
    )


def bg_measure() -> BGMeasure:
    """Resolving measure in t = |z|^2: half the printed density plus mass 1/2 at t = 1/2.

    Its moments are rho_n / pi, so that pi dmu(t) dphi/(2 pi) resolves the identity
    once multiplied by the normalization sum.
    """
    return BGMeasure(
        density=lambda t: 0.5 * bg_weight(t),
        atoms=[WeightAtom(location=0.5, mass=0.5)],
        lower=0.0,
        upper=0.5,
    )


def printed_bg_measure() -> BGMeasure:
    """The measure exactly as commonly printed: full density plus unit mass at t = 1/2."""
    return BGMeasure(density=bg_weight, atoms=[WeightAtom(location=0.5, mass=1.0)], lower=0.0, upper=0.5)


def measure_moments(name, measure, n_max, tol, quad_tol, expected) -> MomentReport:
    rows = []
    for n in range(n_max + 1):
        computed = integrate_with_atoms(
            measure.density, measure.atoms, measure.lower, measure.upper, quad_tol, lambda t, n=n: t**n
        ).value
        target = expected(n)
        rel_error = abs(computed - target) / abs(target)
        rows.append(
            MomentRow(
                n=n, computed=computed, expected=target, rel_error=float(rel_error), passed=bool(rel_error <= tol)
            )
        )
    report = MomentReport(name=name, rows=rows)
    logger.info(f"{name}: n <= {n_max}, max rel error {report.max_rel_error:.2e}")
    return report


def verify_bg_moments(n_max: int = 12, tol: float = 1e-7, quad_tol: Optional[float] = None) -> MomentReport:
    quad_tol = quad_tol or tol * 1e-4
    return measure_moments("bg_moments", bg_measure(), n_max, tol, quad_tol, lambda n: rho(n) / math.pi)


def printed_measure_audit(n_max: int = 4, quad_tol: float = 1e-10) -> List[Finding]:
    """Ratio of printed-measure moments to rho_n / pi; a clean factor 2 signals the slip."""
    findings = []
    printed = measure_moments(
        "printed_bg_moments", printed_bg_measure(), n_max, 1.0, quad_tol, lambda n: rho(n) / math.pi
    )
    for row in printed.rows:
        ratio = row.computed / row.expected
        findings.append(
            Finding(
                name=f"bg_printed_measure_n{row.n}",
                message=f"printed density and unit atom give {ratio:.12f} x rho_n/pi",
                computed=ratio,
                printed=1.0,
            )
        )
    logger.warning("printed BG measure carries twice the resolving mass; using half density and mass 1/2")
    return findings


def analytic_repr(coeffs: Sequence[complex], z: complex, dim: Optional[int] = None) -> complex:
    """f(z) = sum_n f_n z^n / sqrt(rho_n) for a unit vector f, i.e. N(z) <conj(z)|f>.

    Equivalently sum_n sqrt((1/2)_n (3/2)_n) f_n / n! (sqrt(2) z)^n.
    """
    coeffs = np.asarray(coeffs, dtype=complex)
    if dim is not None and len(coeffs) > dim:
        raise DimensionError(f"{len(coeffs)} coefficients do not fit in dim={dim}")
    z = complex(z)
    _check_disc(z)
    norm = float(np.sum(np.abs(coeffs) ** 2))
    if abs(norm - 1.0) > NORM_SLACK:
        raise DomainError(f"analytic representation needs a unit vector, got ||f||^2={norm}")
    return complex(np.dot(coeffs, amplitude_ladder(z, len(coeffs))))


def analytic_norm(coeffs: Sequence[complex], quad_tol: float = 1e-11) -> float:
    """<f|f> recovered by integrating |f(z)|^2 against the resolving measure.

    Averaging over the phase of z leaves sum |f_n|^2 t^n / rho_n, integrated
    in t against pi times the resolving measure.
    """
    weights = np.abs(np.asarray(coeffs, dtype=complex)) ** 2
    powers = np.arange(len(weights))
    rhos = np.array([rho(n) for n in powers])

    def radial(t: float) -> float:
        return float(np.sum(weights * t**powers / rhos))

    measure = bg_measure()
    return math.pi * integrate_with_atoms(measure.density, measure.atoms, 0.0, 0.5, quad_tol, radial).value


def analytic_series_scale_finding(z: complex) -> Finding:
    """Compare e_1 represented with (sqrt(2) z)^n against a (2z)^n prefactor."""
    correct = analytic_repr([0.0, 1.0], z)
    printed = math.sqrt(pochhammer(0.5, 1) * pochhammer(1.5, 1)) * 2.0 * complex(z)
    return Finding(
        name="analytic_prefactor",
        message=f"e_1 maps to {abs(correct):.12f}; a (2z)^n prefactor gives {abs(printed):.12f}",
        computed=abs(correct),
        printed=abs(printed),
    )
