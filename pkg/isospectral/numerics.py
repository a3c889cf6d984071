"""Special functions and quadrature engine."""

import logging
import math
from collections.abc import Callable
from functools import lru_cache

import numpy as np
from scipy import integrate as sp_integrate
from scipy import special

from isospectral.config import get_profile
from isospectral.errors import DepthExceededError, DomainError
from isospectral.models import PhaseSpaceGrid, QuadratureKind, QuadratureResult, QuadratureRule, Tolerance

logger = logging.getLogger(__name__)

HERMITE_MAX_DEGREE = 400
GAUSS_HERMITE_MAX_ORDER = 1024
# wavefunctions are numerically zero beyond this distance past the classical turning point
SUPPORT_MARGIN = 12.0

Integrand = Callable[[np.ndarray], np.ndarray]
Integrand2D = Callable[[np.ndarray, np.ndarray], np.ndarray]


def _check_degree(n: int) -> None:
    if n < 0:
        raise DomainError(f"Hermite degree must be non-negative, got {n}")
    if n > HERMITE_MAX_DEGREE:
        raise DepthExceededError(f"Hermite degree {n} exceeds the recurrence guard {HERMITE_MAX_DEGREE}")


def hermite(n: int, x: float | np.ndarray) -> float | np.ndarray:
    """Physicists' Hermite polynomial H_n(x) by the three-term recurrence.

    Raw values overflow for large n; wavefunctions use hermite_functions instead.
    """
    _check_degree(n)
    x = np.asarray(x, dtype=float)
    previous, current = np.zeros_like(x), np.ones_like(x)
    for k in range(n):
        previous, current = current, 2.0 * x * current - 2.0 * k * previous
    return current if current.ndim else float(current)


def hermite_functions(n_max: int, x: np.ndarray) -> np.ndarray:
    """Normalised Hermite functions psi_0..psi_{n_max}, shape (n_max + 1, *x.shape).

    The Gaussian factor is carried inside the recurrence so no intermediate overflows.
    """
    _check_degree(n_max)
    x = np.asarray(x, dtype=float)
    out = np.empty((n_max + 1, *x.shape))
    out[0] = np.pi**-0.25 * np.exp(-0.5 * x**2)
    if n_max >= 1:
        out[1] = math.sqrt(2.0) * x * out[0]
    for k in range(1, n_max):
        out[k + 1] = math.sqrt(2.0 / (k + 1)) * x * out[k] - math.sqrt(k / (k + 1)) * out[k - 1]
    return out


def erf(x: float | np.ndarray) -> float | np.ndarray:
    """Error function (odd, limits +-1)."""
    return special.erf(x)


def support_half_width(n_max: int = 0) -> float:
    """Half-width outside which levels up to n_max are numerically zero."""
    return SUPPORT_MARGIN + math.sqrt(2.0 * n_max)


def trapezoid_weights(points: int, spacing: float) -> np.ndarray:
    weights = np.full(points, spacing)
    weights[[0, -1]] *= 0.5
    return weights


@lru_cache(maxsize=64)
def gauss_hermite_rule(order: int) -> QuadratureRule:
    """Gauss-Hermite rule for the weight exp(-x^2); nodes with underflowed weights are dropped."""
    if order < 1:
        raise DomainError("Gauss-Hermite order must be positive")
    nodes, weights = special.roots_hermite(order)
    keep = weights > 0
    rule = QuadratureRule(nodes[keep], weights[keep], QuadratureKind.GAUSS_HERMITE)
    rule.nodes.flags.writeable = False
    rule.weights.flags.writeable = False
    return rule


def unweighted_gauss_hermite(rule: QuadratureRule) -> np.ndarray:
    """Weights w * exp(x^2) for integrating f directly instead of exp(-x^2) f."""
    return np.exp(np.log(rule.weights) + rule.nodes**2)


@lru_cache(maxsize=32)
def uniform_rule(half_width: float, spacing: float) -> QuadratureRule:
    """Trapezoid rule on an equispaced symmetric grid."""
    if half_width <= 0 or spacing <= 0:
        raise DomainError("half_width and spacing must be positive")
    half_points = math.ceil(half_width / spacing)
    nodes = spacing * np.arange(-half_points, half_points + 1, dtype=float)
    rule = QuadratureRule(nodes, trapezoid_weights(nodes.size, spacing), QuadratureKind.UNIFORM)
    rule.nodes.flags.writeable = False
    rule.weights.flags.writeable = False
    return rule


def position_rule(n_max: int = 0, spacing: float | None = None) -> QuadratureRule:
    """Uniform rule covering the support of levels 0..n_max."""
    spacing = spacing or get_profile().grid_spacing
    return uniform_rule(round(support_half_width(n_max), 6), spacing)


def adaptive_rule(
    f: Integrand,
    a: float,
    b: float,
    tol: Tolerance,
    order: int = 10,
) -> tuple[QuadratureRule, float, bool]:
    """Composite Gauss-Legendre rule adapted to ``f`` on [a, b].

    Panels are bisected until each panel's one- and two-panel estimates agree
    within its share of the budget. Returns the rule, the summed error estimate
    and whether the subdivision cap was respected.
    """
    reference_nodes, reference_weights = np.polynomial.legendre.leggauss(order)
    width = b - a

    def panel(lo: float, hi: float) -> tuple[np.ndarray, np.ndarray, float]:
        half, mid = 0.5 * (hi - lo), 0.5 * (hi + lo)
        nodes, weights = mid + half * reference_nodes, half * reference_weights
        return nodes, weights, float(weights @ f(nodes))

    pending = [(a, b, panel(a, b)[2])]
    accepted: list[tuple[float, np.ndarray, np.ndarray]] = []
    error = 0.0
    splits = 0
    converged = True
    while pending:
        lo, hi, coarse = pending.pop()
        mid = 0.5 * (lo + hi)
        left_nodes, left_weights, left = panel(lo, mid)
        right_nodes, right_weights, right = panel(mid, hi)
        panel_error = abs(left + right - coarse)
        budget = tol.bound(left + right) * (hi - lo) / width
        if panel_error <= budget or splits >= tol.max_subdivisions:
            if panel_error > budget:
                converged = False
            accepted.append((lo, left_nodes, left_weights))
            accepted.append((mid, right_nodes, right_weights))
            error += panel_error
        else:
            splits += 1
            pending.append((lo, mid, left))
            pending.append((mid, hi, right))
    accepted.sort(key=lambda item: item[0])
    nodes = np.concatenate([item[1] for item in accepted])
    weights = np.concatenate([item[2] for item in accepted])
    return QuadratureRule(nodes, weights, QuadratureKind.COMPOSITE_ADAPTIVE), error, converged


def _integrate_gauss_hermite(f: Integrand, tol: Tolerance) -> QuadratureResult:
    order, previous, evaluations = 20, None, 0
    value = error = math.nan
    while order <= GAUSS_HERMITE_MAX_ORDER:
        rule = gauss_hermite_rule(order)
        value = float(unweighted_gauss_hermite(rule) @ f(rule.nodes))
        evaluations += rule.size
        if previous is not None:
            error = abs(value - previous)
            if error <= tol.bound(value):
                return QuadratureResult(value, error, True, QuadratureKind.GAUSS_HERMITE.value, evaluations)
        previous = value
        order *= 2
    logger.warning("Gauss-Hermite quadrature did not converge: estimate %.3e, error %.3e", value, error)
    return QuadratureResult(value, error, False, QuadratureKind.GAUSS_HERMITE.value, evaluations)


def _integrate_quadpack(f: Integrand, a: float, b: float, tol: Tolerance) -> QuadratureResult:
    out = sp_integrate.quad(
        lambda t: float(f(np.asarray(t))),
        a,
        b,
        epsabs=tol.abs_tol,
        epsrel=tol.rel_tol,
        limit=tol.max_subdivisions,
        full_output=1,
    )
    value, error, info = float(out[0]), float(out[1]), out[2]
    # QUADPACK appends a message only when it stopped early
    converged = len(out) == 3 and error <= tol.bound(value)
    if not converged:
        logger.warning("QUADPACK did not converge on [%s, %s]: error %.3e", a, b, error)
    return QuadratureResult(value, error, converged, "quadpack", int(info["neval"]))


def integrate(
    f: Integrand,
    domain: tuple[float, float],
    tol: Tolerance | None = None,
    *,
    gaussian_decay: bool = False,
) -> QuadratureResult:
    """Integral of a vectorised ``f`` over a possibly infinite interval.

    Infinite domains use order-doubling Gauss-Hermite when the integrand decays
    like a Gaussian, QUADPACK otherwise; finite domains use an adaptive
    composite Gauss-Legendre rule. ``method`` in the result records which.
    """
    tol = tol or get_profile().tolerance()
    a, b = map(float, domain)
    if a == b:
        return QuadratureResult(0.0, 0.0, True, "empty")
    if a > b:
        flipped = integrate(f, (b, a), tol, gaussian_decay=gaussian_decay)
        return QuadratureResult(-flipped.value, flipped.error, flipped.converged, flipped.method, flipped.evaluations)
    if math.isinf(a) and math.isinf(b) and gaussian_decay:
        return _integrate_gauss_hermite(f, tol)
    if math.isinf(a) or math.isinf(b):
        return _integrate_quadpack(f, a, b, tol)
    rule, error, capped_ok = adaptive_rule(f, a, b, tol)
    value = float(rule.integrate(f(rule.nodes)))
    converged = capped_ok and error <= tol.bound(value)
    if not converged:
        logger.warning("adaptive quadrature did not converge on [%s, %s]: error %.3e", a, b, error)
    return QuadratureResult(value, error, converged, rule.kind.value, rule.size)


def _trapezoid_2d(f: Integrand2D, grid: PhaseSpaceGrid) -> float:
    xs, ps = grid.xs, grid.ps
    values = f(*np.meshgrid(xs, ps, indexing="ij"))
    wx = trapezoid_weights(grid.x_points, grid.dx)
    wp = trapezoid_weights(grid.p_points, grid.dp)
    return float(wx @ values @ wp)


def integrate2d(f: Integrand2D, grid: PhaseSpaceGrid, tol: Tolerance | None = None) -> QuadratureResult:
    """Trapezoid quadrature over a phase-space grid, doubling resolution until stable.

    ``f`` receives meshgrid arrays X, P (indexing "ij") and returns values of the same shape.
    """
    tol = tol or get_profile().tolerance_2d()
    value = _trapezoid_2d(f, grid)
    evaluations = grid.x_points * grid.p_points
    error = math.inf
    for _ in range(tol.max_subdivisions):
        grid = grid.refined()
        refined = _trapezoid_2d(f, grid)
        evaluations += grid.x_points * grid.p_points
        error, value = abs(refined - value), refined
        if error <= tol.bound(value):
            return QuadratureResult(value, error, True, "trapezoid-2d", evaluations)
    logger.warning("2D quadrature did not converge: estimate %.6e, last change %.3e", value, error)
    return QuadratureResult(value, error, False, "trapezoid-2d", evaluations)
