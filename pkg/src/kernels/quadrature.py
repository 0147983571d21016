import math
from typing import Callable, Iterable, Optional

from scipy import integrate as sp_integrate

from config.settings import settings
from models.entities import QuadratureResult, WeightAtom
from models.errors import DomainError, NoConvergence, NonFinite
from utils.logger import logger

# QUADPACK's 21-point Gauss-Kronrod rule is applied twice per bisection.
NODES_PER_SPLIT = 42


def integrate(
    f: Callable[[float], float],
    a: float,
    b: float,
    tol: float,
    budget: Optional[int] = None,
) -> QuadratureResult:
    """Adaptive Gauss-Kronrod integral of f over [a, b].

    Nodes are strictly interior, so integrable endpoint singularities are fine.
    Raises NoConvergence when the error estimate exceeds tol * max(1, |value|)
    and NonFinite when f returns inf or nan.
    """
    if not a < b:
        raise DomainError(f"integration interval [{a}, {b}] is empty")
    budget = budget or settings.QUAD_BUDGET
    evaluations = 0

    def guarded(t: float) -> float:
        nonlocal evaluations
        evaluations += 1
        value = f(t)
        if not math.isfinite(value):
            raise NonFinite(f"integrand returned {value} at t={t!r}")
        return value

    limit = max(1, budget // NODES_PER_SPLIT)
    value, err, _info, *message = sp_integrate.quad(
        guarded, a, b, epsabs=tol, epsrel=tol, limit=limit, full_output=1
    )
    if err > tol * max(1.0, abs(value)):
        raise NoConvergence(
            f"quadrature over [{a}, {b}] reached err={err:.3e} > tol={tol:.1e} after {evaluations} evaluations"
            + (f": {message[0]}" if message else "")
        )
    if message:
        logger.debug(f"quadrature accepted with err={err:.3e} despite: {message[0]}")
    return QuadratureResult(value=value, err_estimate=err, evaluations=evaluations)


def integrate_with_atoms(
    density: Callable[[float], float],
    atoms: Iterable[WeightAtom],
    a: float,
    b: float,
    tol: float,
    integrand: Callable[[float], float] = lambda t: 1.0,
    budget: Optional[int] = None,
) -> QuadratureResult:
    """Integral of integrand against density(t) dt plus the listed point masses."""
    atoms = list(atoms)
    for atom in atoms:
        if not a <= atom.location <= b:
            raise DomainError(f"atom at {atom.location} lies outside [{a}, {b}]")
    smooth = integrate(lambda t: density(t) * integrand(t), a, b, tol, budget)
    discrete = sum(atom.mass * integrand(atom.location) for atom in atoms)
    return QuadratureResult(
        value=smooth.value + discrete,
        err_estimate=smooth.err_estimate,
        evaluations=smooth.evaluations + len(atoms),
    )
