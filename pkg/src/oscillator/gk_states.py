"""Gazeau-Klauder action-angle coherent states |J, gamma>.

Defined for 0 <= J < 1/2 with phases exp(-i gamma lambda_n), where
lambda_n = 2 b_{n-1}^2 makes the action identity <H> = J exact.
"""
import math
from typing import List, Optional, Tuple

import numpy as np

from config.settings import settings
from kernels.specfun import elliptic, gauss_2f1
from models.entities import EllipticFinding, GKState, GKWeight, MomentReport, WeightAtom
from models.errors import DimensionError, DomainError, NoConvergence, TruncationError
from oscillator.algebra import (
    coeff_b_squared,
    normalization_sum,
    required_truncation,
    rho,
    spectrum,
    truncation_tail,
    weighted_powers,
)
from oscillator.bg_states import TAIL_LIMIT, bg_weight, measure_moments
from utils.logger import logger

GK_RADIUS = 0.5
ELLIPTIC_AGREEMENT = 1e-8


def _check_action(J: float) -> None:
    if not 0.0 <= J < GK_RADIUS:
        raise DomainError(f"action J={J} lies outside [0, 1/2)")


def action_terms(J: float) -> np.ndarray:
    """J^n / rho_n until n^2-weighted tails fall below the series tolerance."""
    _check_action(J)
    threshold = settings.SERIES_TOL * (1.0 - 2.0 * J) ** 3
    terms = [1.0]
    for n in range(settings.SERIES_MAX_TERMS):
        terms.append(terms[-1] * J / (2.0 * coeff_b_squared(n)))
        if terms[-1] * (n + 2) ** 2 <= threshold:
            return np.array(terms)
    raise NoConvergence(f"action series at J={J} needs more than {settings.SERIES_MAX_TERMS} terms")


def gk_state(J: float, gamma: float, dim: Optional[int] = None) -> GKState:
    _check_action(J)
    dim = dim or settings.TRUNCATION
    if dim < 2:
        raise DimensionError(f"GK state needs dim >= 2, got {dim}")
    tail = truncation_tail(J, dim)
    if tail > TAIL_LIMIT:
        raise TruncationError(
            f"GK state at J={J} leaves {tail:.2e} of its weight beyond dim={dim}; "
            f"use --truncation >= {required_truncation(J, TAIL_LIMIT)}"
        )
    norm_sq = normalization_sum(J)
    energies = spectrum("GK", dim).values
    amplitudes = np.sqrt(weighted_powers(J, dim) / norm_sq) * np.exp(-1j * gamma * energies)
    return GKState(J=J, gamma=gamma, dim=dim, amplitudes=amplitudes, norm_sq_raw=norm_sq)


def gk_evolve(state: GKState, t: float) -> GKState:
    """Apply exp(-iHt), which shifts the angle: |J, gamma> -> |J, gamma + t>."""
    energies = spectrum("GK", state.dim).values
    return GKState(
        J=state.J,
        gamma=state.gamma + t,
        dim=state.dim,
        amplitudes=state.amplitudes * np.exp(-1j * energies * t),
        norm_sq_raw=state.norm_sq_raw,
    )


def gk_mean_H(J: float) -> float:
    terms = action_terms(J)
    energies = spectrum("GK", len(terms)).values
    return float(np.dot(energies, terms) / terms.sum())


def gk_number_moment(J: float, power: int) -> float:
    """Brute-force sum_n n^power J^n / rho_n, normalised."""
    terms = action_terms(J)
    return float(np.dot(np.arange(len(terms), dtype=float) ** power, terms) / terms.sum())


def gk_number_distribution(J: float, n_max: int) -> np.ndarray:
    """Occupation probabilities |<n|J, gamma>|^2 for n <= n_max."""
    _check_action(J)
    return weighted_powers(J, n_max + 1) / normalization_sum(J)


def gk_mean_n(J: float) -> float:
    _check_action(J)
    if J == 0.0:
        return 0.0
    return 1.5 * J * gauss_2f1(1.5, 2.5, 2.0, 2.0 * J).value.real / normalization_sum(J)


def gk_mean_n2(J: float) -> float:
    _check_action(J)
    if J == 0.0:
        return 0.0
    return 1.5 * J * gauss_2f1(1.5, 2.5, 1.0, 2.0 * J).value.real / normalization_sum(J)


def _elliptic_at(J: float):
    if not 0.0 < J < GK_RADIUS:
        raise DomainError(f"elliptic forms need 0 < J < 1/2, got {J}")
    return elliptic(math.sqrt(2.0 * J))


def gk_mean_n_elliptic(J: float) -> float:
    """Printed closed form (1/2) J/(1-2J) (2K - (1+2J) D) / E at k^2 = 2J."""
    ell = _elliptic_at(J)
    return 0.5 * J / (1.0 - 2.0 * J) * (2.0 * ell.K - (1.0 + 2.0 * J) * ell.D) / ell.E


def gk_mean_n2_elliptic(J: float) -> float:
    ell = _elliptic_at(J)
    return 0.5 * J / (1.0 - 2.0 * J) ** 2 * ((3.0 + 10.0 * J) * ell.K - 2.0 * J * (7.0 + 2.0 * J) * ell.D) / ell.E


def compare_elliptic_forms(J: float, tol: float = ELLIPTIC_AGREEMENT) -> List[EllipticFinding]:
    findings = []
    pairs = (("mean_n", gk_mean_n(J), gk_mean_n_elliptic(J)), ("mean_n2", gk_mean_n2(J), gk_mean_n2_elliptic(J)))
    for quantity, series, closed in pairs:
        deviation = abs(closed - series) / abs(series)
        finding = EllipticFinding(
            J=J,
            quantity=quantity,
            series=series,
            elliptic=closed,
            ratio=closed / series,
            rel_deviation=deviation,
            agrees=bool(deviation <= tol),
        )
        if not finding.agrees:
            logger.warning(f"elliptic form of {quantity} at J={J} is {finding.ratio:.12f} x the series value")
        findings.append(finding)
    return findings


def gk_variance_and_mandel(J: float) -> Tuple[float, float]:
    """Number spread and Mandel Q = Var(n)/<n> - 1; both vanish at J = 0."""
    _check_action(J)
    if J == 0.0:
        return 0.0, 0.0
    mean, second = gk_mean_n(J), gk_mean_n2(J)
    variance = second - mean * mean
    return math.sqrt(max(variance, 0.0)), variance / mean - 1.0


def gk_overlap(J1: float, gamma1: float, J2: float, gamma2: float) -> complex:
    """<J2, gamma2 | J1, gamma1> by direct summation over the action series."""
    _check_action(J1)
    _check_action(J2)
    terms = action_terms(math.sqrt(J1 * J2))
    energies = spectrum("GK", len(terms)).values
    cross = np.sum(terms * np.exp(-1j * energies * (gamma1 - gamma2)))
    return complex(cross / math.sqrt(normalization_sum(J1) * normalization_sum(J2)))


def gk_overlap_closed(J1: float, J2: float) -> float:
    """Equal-angle overlap F(2 sqrt(J1 J2)) / sqrt(F(2 J1) F(2 J2))."""
    return normalization_sum(math.sqrt(J1 * J2)) / math.sqrt(normalization_sum(J1) * normalization_sum(J2))


def gk_weight(J: float) -> float:
    """Density pi/(4(2J-1)) [(16J-5) P_{1/2}(4J-1) - 3 P_{3/2}(4J-1)]."""
    if not 0.0 < J < GK_RADIUS:
        raise DomainError(f"GK weight is defined on (0, 1/2), got J={J}")
    return math.pi / 2.0 * bg_weight(J)


def gk_measure() -> GKWeight:
    """GK resolving weight: the density plus a mass pi/2 at J = 1/2; moments rho_n."""
    return GKWeight(density=gk_weight, atoms=[WeightAtom(location=0.5, mass=math.pi / 2.0)], lower=0.0, upper=0.5)


def verify_gk_moments(n_max: int = 12, tol: float = 1e-7, quad_tol: Optional[float] = None) -> MomentReport:
    quad_tol = quad_tol or tol * 1e-4
    return measure_moments("gk_moments", gk_measure(), n_max, tol, quad_tol, rho)


def spectrum_gap(count: int) -> float:
    """Smallest |lambda_n - lambda_m| over n != m < count; positive means nondegenerate."""
    values = np.sort(spectrum("GK", count).values)
    return float(np.min(np.diff(values)))
