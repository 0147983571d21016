"""Truncated operator algebra of the Legendre oscillator.

The Fock basis e_n is mapped to the orthonormal Legendre functions
psi_n(x) = sqrt(2n+1) P_n(x) of L^2([-1, 1], dx/2), on which multiplication
by x acts tridiagonally with the coefficients b_n below.
"""
import math
from typing import List, Literal, Tuple

import numpy as np

from kernels.specfun import gauss_2f1, legendre_table
from models.entities import (
    Finding,
    MomentSequence,
    RecurrenceCoefficients,
    Spectrum,
    TruncatedOperator,
)
from models.errors import DimensionError, DomainError
from utils.logger import logger


def coeff_b(n: int) -> float:
    if n < 0:
        raise DomainError(f"recurrence index must be >= 0, got {n}")
    return (n + 1) / math.sqrt((2 * n + 1) * (2 * n + 3))


def coeff_b_squared(n: int) -> float:
    """b_n^2 as a single rounded rational, with b_{-1} = 0."""
    if n < 0:
        return 0.0
    return (n + 1) ** 2 / ((2 * n + 1) * (2 * n + 3))


def recurrence_coefficients(count: int) -> RecurrenceCoefficients:
    n = np.arange(count, dtype=float)
    return RecurrenceCoefficients(values=(n + 1) / np.sqrt((2 * n + 1) * (2 * n + 3)))


def rho(n: int) -> float:
    """Moment rho_n = prod_{k<n} 2 b_k^2 by running product."""
    if n < 0:
        raise DomainError(f"moment index must be >= 0, got {n}")
    value = 1.0
    for k in range(n):
        value *= 2.0 * coeff_b_squared(k)
    return value


def rho_closed(n: int) -> float:
    """rho_n = 2^n (n!)^2 / ((2n-1)!! (2n+1)!!), evaluated in exact integers."""
    numerator = 2**n * math.factorial(n) ** 2
    denominator = math.prod(range(2 * n - 1, 0, -2)) * math.prod(range(2 * n + 1, 0, -2))
    return numerator / denominator


def moment_sequence(count: int) -> MomentSequence:
    factors = 2.0 * np.array([coeff_b_squared(k) for k in range(count - 1)])
    return MomentSequence(values=np.concatenate(([1.0], np.cumprod(factors))))


def _require_dim(dim: int, minimum: int) -> None:
    if dim < minimum:
        raise DimensionError(f"truncation dimension {dim} is below the minimum {minimum}")


def build_X(dim: int) -> TruncatedOperator:
    _require_dim(dim, 2)
    b = recurrence_coefficients(dim - 1).values
    return TruncatedOperator(name="X", dim=dim, entries=np.diag(b, -1) + np.diag(b, 1))


def build_P(dim: int) -> TruncatedOperator:
    _require_dim(dim, 2)
    b = recurrence_coefficients(dim - 1).values
    return TruncatedOperator(name="P", dim=dim, entries=1j * np.diag(b, -1) - 1j * np.diag(b, 1))


def build_ladder(dim: int) -> Tuple[TruncatedOperator, TruncatedOperator]:
    """Return (a+, a-) with a+ e_n = sqrt(2) b_n e_{n+1} and a- e_{n+1} = sqrt(2) b_n e_n."""
    _require_dim(dim, 2)
    b = math.sqrt(2.0) * recurrence_coefficients(dim - 1).values
    raising = TruncatedOperator(name="a+", dim=dim, entries=np.diag(b, -1))
    lowering = TruncatedOperator(name="a-", dim=dim, entries=np.diag(b, 1))
    return raising, lowering


def build_N_H(dim: int) -> Tuple[TruncatedOperator, TruncatedOperator]:
    """Number operator and the Hamiltonian H = a+ a- + a- a+."""
    _require_dim(dim, 3)
    raising, lowering = build_ladder(dim)
    number = TruncatedOperator(name="N", dim=dim, entries=np.diag(np.arange(dim, dtype=float)))
    hamiltonian = TruncatedOperator(
        name="H", dim=dim, entries=raising.entries @ lowering.entries + lowering.entries @ raising.entries
    )
    return number, hamiltonian


def commutator_spectrum(dim: int) -> np.ndarray:
    """Diagonal of [X, P]; exact for indices n <= dim - 2."""
    _require_dim(dim, 3)
    return np.diag(build_X(dim).commutator(build_P(dim)).entries).copy()


def commutator_exact(n: int) -> complex:
    return 2j * (coeff_b_squared(n) - coeff_b_squared(n - 1))


def commutator_printed(n: int) -> complex:
    """The commonly quoted closed form +2i/((2n-1)(2n+1)(2n+3))."""
    return 2j / ((2 * n - 1) * (2 * n + 1) * (2 * n + 3))


def commutator_errata(count: int) -> List[Finding]:
    """Compare the quoted commutator fraction with 2i(b_n^2 - b_{n-1}^2)."""
    findings = []
    for n in range(count):
        exact, printed = commutator_exact(n).imag, commutator_printed(n).imag
        if not math.isclose(exact, printed, rel_tol=1e-12):
            findings.append(
                Finding(
                    name=f"commutator_sign_n{n}",
                    message=f"[X,P]_{n}{n} = {exact:.17g}i, quoted fraction gives {printed:.17g}i",
                    computed=exact,
                    printed=printed,
                )
            )
    if findings:
        logger.warning(f"quoted [X,P] fraction disagrees with the recurrence at {len(findings)} of {count} indices")
    return findings


def spectrum(convention: Literal["H_eigen", "GK"], count: int) -> Spectrum:
    """Diagonal energies lambda_n, n < count.

    H_eigen gives 2(b_{n-1}^2 + b_n^2), the diagonal of H = X^2 + P^2.
    GK gives 2 b_{n-1}^2 with lambda_0 = 0, the phase convention of the
    action-angle states.
    """
    if convention == "H_eigen":
        values = [2.0 * (coeff_b_squared(n - 1) + coeff_b_squared(n)) for n in range(count)]
    elif convention == "GK":
        values = [2.0 * coeff_b_squared(n - 1) for n in range(count)]
    else:
        raise DomainError(f"unknown spectrum convention {convention!r}")
    return Spectrum(convention=convention, values=values)


def weighted_powers(s: float, count: int) -> np.ndarray:
    """Terms s^n / rho_n for n < count, built by ratios so rho_n never underflows."""
    ratios = s / (2.0 * np.array([coeff_b_squared(k) for k in range(count - 1)]))
    return np.concatenate(([1.0], np.cumprod(ratios)))


def normalization_sum(s: float) -> float:
    """sum_n s^n / rho_n = 2F1(1/2, 3/2; 1; 2s), finite for 0 <= s < 1/2."""
    if not 0.0 <= s < 0.5:
        raise DomainError(f"normalization sum diverges for s={s}; need 0 <= s < 1/2")
    return gauss_2f1(0.5, 1.5, 1.0, 2.0 * s).value.real


def truncation_tail(s: float, dim: int) -> float:
    """Bound on the weight beyond e_(dim-1), relative to normalization_sum(s)."""
    if s == 0.0:
        return 0.0
    last = weighted_powers(s, dim + 1)[-1]
    # ratios of consecutive terms stay below 2s for n >= dim
    return last / (1.0 - 2.0 * s) / normalization_sum(s)


def required_truncation(s: float, limit: float) -> int:
    """Smallest dim whose truncation_tail(s, dim) is at most limit."""
    if s == 0.0:
        return 2
    total = normalization_sum(s)
    term, n = 1.0, 0
    while term / (1.0 - 2.0 * s) / total > limit:
        term *= s / (2.0 * coeff_b_squared(n))
        n += 1
    return max(n, 2)


def legendre_basis(n_max: int, x) -> np.ndarray:
    """psi_n(x) = sqrt(2n+1) P_n(x) for n <= n_max, one row per degree."""
    scale = np.sqrt(2.0 * np.arange(n_max + 1) + 1.0)
    table = legendre_table(n_max, x)
    return table * scale.reshape((-1,) + (1,) * (table.ndim - 1))


def fock_gram(n_max: int, order: int = 64) -> np.ndarray:
    """Gram matrix of psi_0..psi_{n_max} under dx/2 by Gauss-Legendre quadrature."""
    if 2 * order - 1 < 2 * n_max:
        raise DimensionError(f"order {order} cannot integrate degree {2 * n_max} exactly")
    nodes, weights = np.polynomial.legendre.leggauss(order)
    psi = legendre_basis(n_max, nodes)
    return (psi * (weights / 2.0)) @ psi.T
