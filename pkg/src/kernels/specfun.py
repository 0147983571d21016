"""Special functions used throughout the oscillator toolkit.

Gauss hypergeometric series, Legendre polynomials and functions of real
degree, and the complete elliptic integrals K, E, D by the AGM.
"""
import math
from fractions import Fraction
from typing import Optional

import numpy as np

from config.settings import settings
from models.entities import EllipticTriple, SeriesControl, SeriesResult
from models.errors import DomainError, NoConvergence

DEFAULT_SERIES = SeriesControl(tol=settings.SERIES_TOL, max_terms=settings.SERIES_MAX_TERMS)

# Degrees whose Legendre function has a closed form in K and E.
ELLIPTIC_DEGREES = (-0.5, 0.5, 1.5)
ELLIPTIC_MODULUS_LIMIT = 1.0 - 1e-12
AGM_MAX_ITER = 64


def pochhammer(a: float, n: int) -> float:
    """Rising factorial (a)_n = a (a+1) ... (a+n-1), with (a)_0 = 1."""
    if n < 0:
        raise DomainError(f"pochhammer order must be >= 0, got {n}")
    return float(np.prod(a + np.arange(n, dtype=float)))


def double_factorial(n: int) -> float:
    """n!! with the conventions 0!! = (-1)!! = 1."""
    if n < -1:
        raise DomainError(f"double factorial needs n >= -1, got {n}")
    return float(math.prod(range(n, 0, -2)))


def gauss_2f1(a: float, b: float, c: float, z: complex, ctl: Optional[SeriesControl] = None) -> SeriesResult:
    """Sum the Gauss series 2F1(a, b; c; z) for |z| < 1.

    Terms are added until the geometric bound on the remaining tail drops below
    ctl.tol relative to the partial sum. A nonpositive integer a or b ends the
    series exactly.
    """
    ctl = ctl or DEFAULT_SERIES
    if c <= 0 and float(c).is_integer():
        raise DomainError(f"2F1 undefined for c={c}")
    z = complex(z)
    radius = abs(z)
    if radius >= 1.0:
        raise DomainError(f"2F1 series needs |z| < 1, got |z|={radius}")

    # ratios are monotone once n passes the parameters
    settle = max(abs(a), abs(b), abs(c))
    term = 1.0 + 0.0j
    total = term
    for n in range(ctl.max_terms):
        term *= (a + n) * (b + n) / ((c + n) * (n + 1)) * z
        if term == 0:
            return SeriesResult(value=total, terms=n + 1)
        total += term
        if n + 1 < settle:
            continue
        ratio = max(abs((a + n + 1) * (b + n + 1) / ((c + n + 1) * (n + 2))) * radius, radius)
        if ratio < 1.0 and abs(term) * ratio / (1.0 - ratio) <= ctl.tol * abs(total):
            return SeriesResult(value=total, terms=n + 2)
    raise NoConvergence(f"2F1({a}, {b}; {c}; {z}) did not converge in {ctl.max_terms} terms")


def legendre_pn(n: int, x):
    """P_n(x) by the three-term recurrence; x may be a scalar or an array."""
    if n < 0:
        raise DomainError(f"Legendre degree must be >= 0, got {n}")
    x = np.asarray(x, dtype=float)
    previous, current = np.zeros_like(x), np.ones_like(x)
    for k in range(n):
        previous, current = current, ((2 * k + 1) * x * current - k * previous) / (k + 1)
    return current if current.ndim else float(current)


def legendre_table(n_max: int, x) -> np.ndarray:
    """Rows P_0(x), ..., P_{n_max}(x) stacked along the first axis."""
    x = np.asarray(x, dtype=float)
    table = np.empty((n_max + 1,) + x.shape)
    table[0] = 1.0
    if n_max >= 1:
        table[1] = x
    for k in range(1, n_max):
        table[k + 1] = ((2 * k + 1) * x * table[k] - k * table[k - 1]) / (k + 1)
    return table


def legendre_pn_explicit(n: int, x: float) -> float:
    """P_n(x) from the explicit alternating sum, summed exactly in rationals."""
    if n < 0:
        raise DomainError(f"Legendre degree must be >= 0, got {n}")
    xf = Fraction(x)
    total = Fraction(0)
    for m in range(n // 2 + 1):
        coefficient = Fraction(
            (-1) ** m * math.factorial(2 * n - 2 * m),
            2**n * math.factorial(m) * math.factorial(n - m) * math.factorial(n - 2 * m),
        )
        total += coefficient * xf ** (n - 2 * m)
    return float(total)


def legendre_pnu(nu: float, x: float, ctl: Optional[SeriesControl] = None) -> float:
    """Legendre function P_nu(x) = 2F1(-nu, nu+1; 1; (1-x)/2) for x > -1."""
    if x <= -1.0:
        raise DomainError(f"P_nu(x) diverges at x={x}")
    return _legendre_pnu(nu, float(x), 1.0 + x, ctl)


def legendre_pnu_from_gap(nu: float, gap: float, ctl: Optional[SeriesControl] = None) -> float:
    """P_nu(gap - 1), taking the distance gap = 1 + x from the singular endpoint.

    Passing the gap keeps full relative precision as x approaches -1.
    """
    if gap <= 0.0:
        raise DomainError(f"P_nu needs 1 + x > 0, got {gap}")
    return _legendre_pnu(nu, gap - 1.0, gap, ctl)


def _legendre_pnu(nu, x, gap, ctl):
    if x < 0.0 and nu in ELLIPTIC_DEGREES:
        return _legendre_elliptic(nu, x, gap)
    return gauss_2f1(-nu, nu + 1.0, 1.0, (1.0 - x) / 2.0, ctl).value.real


def _legendre_elliptic(nu, x, gap):
    # k^2 = (1 - x)/2, complementary parameter k'^2 = gap/2
    ell = _agm_elliptic(gap / 2.0)
    p_minus_half = 2.0 / math.pi * ell.K
    if nu == -0.5:
        return p_minus_half
    p_half = 2.0 / math.pi * (2.0 * ell.E - ell.K)
    if nu == 0.5:
        return p_half
    return (4.0 * x * p_half - p_minus_half) / 3.0


def elliptic(k: float) -> EllipticTriple:
    """Complete elliptic integrals K(k), E(k) and D(k) = (K - E)/k^2."""
    if not 0.0 <= k < 1.0:
        raise DomainError(f"elliptic modulus must lie in [0, 1), got {k}")
    if k > ELLIPTIC_MODULUS_LIMIT:
        raise DomainError(f"K(k) diverges as k -> 1; k={k} is within 1e-12 of 1")
    return _agm_elliptic((1.0 - k) * (1.0 + k), k)


def _agm_elliptic(m1: float, k: Optional[float] = None) -> EllipticTriple:
    m = k * k if k is not None else 1.0 - m1
    if k is None:
        k = math.sqrt(max(m, 0.0))
    if m <= 0.0:
        return EllipticTriple(k=0.0, K=math.pi / 2, E=math.pi / 2, D=math.pi / 4)

    a, b, c = 1.0, math.sqrt(m1), k
    weighted = 0.0  # sum over n >= 1 of 2^(n-1) c_n^2
    eps = np.finfo(float).eps
    for n in range(1, AGM_MAX_ITER):
        a_next = 0.5 * (a + b)
        c = c * c / (4.0 * a_next)
        b = math.sqrt(a * b)
        a = a_next
        weighted += math.ldexp(c * c, n - 1)
        if c <= eps * a:
            break
    else:
        raise NoConvergence(f"AGM did not settle for k'^2={m1}")

    K = math.pi / (2.0 * a)
    D = K * (0.5 + weighted / m)
    return EllipticTriple(k=k, K=K, E=K - m * D, D=D)


def legendre_generating_series(gamma: float, x: float, w: complex, terms: int) -> complex:
    """Partial sum over n < terms of (gamma)_n / n! P_n(x) w^n."""
    w = complex(w)
    p = legendre_table(terms - 1, x)
    # (gamma)_n w^n / n! by ratios; the factorials overflow long before the terms do
    ratios = (gamma + np.arange(terms - 1)) / (np.arange(terms - 1) + 1.0) * w
    weights = np.concatenate(([1.0 + 0.0j], np.cumprod(ratios)))
    return complex(np.sum(weights * p))


def legendre_generating_closed(gamma: float, x: float, w: complex, ctl: Optional[SeriesControl] = None) -> complex:
    """Closed form of sum_n (gamma)_n / n! P_n(x) w^n.

    Equals (1 - x w)^(-gamma) 2F1(gamma/2, (gamma+1)/2; 1; (x^2 - 1) w^2 / (1 - x w)^2).
    """
    w = complex(w)
    base = 1.0 - x * w
    if abs(base) < 1e-12:
        raise DomainError(f"generating function singular at x={x}, w={w}")
    u = (x * x - 1.0) * w * w / base**2
    if abs(u) >= 1.0:
        raise DomainError(f"generating function argument |u|={abs(u)} outside the unit disc")
    return base ** (-gamma) * gauss_2f1(gamma / 2.0, (gamma + 1.0) / 2.0, 1.0, u, ctl).value
