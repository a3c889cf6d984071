"""Non-Gaussianity and non-classicality measures of ground and thermal states."""

import logging
import math

import numpy as np
from scipy import special

from isospectral.config import get_profile
from isospectral.errors import DomainError, UndefinedFanoError
from isospectral.models import (
    CovarianceMatrix,
    MomentSet,
    OscillatorState,
    PhaseSpaceGrid,
    QuadratureResult,
    QuadratureRule,
    Tolerance,
    WignerField,
)
from isospectral.numerics import integrate2d, position_rule, support_half_width, trapezoid_weights, uniform_rule
from isospectral.states import photon_distribution, position_kernel, purity
from isospectral.susy import eigenfunction_x_derivatives, eigenfunctions, isospectral_partner_shift

logger = logging.getLogger(__name__)

HEISENBERG_SLACK = 1e-9
NEGATIVITY_TOL = 1e-4
WIGNER_CHUNK = 64
FANO_FLOOR = 1e-12


def _state_rule(state: OscillatorState) -> QuadratureRule:
    return position_rule(state.n_max)


def quadrature_moments(state: OscillatorState, rule: QuadratureRule | None = None) -> MomentSet:
    """First and second moments of X and P, averaged over the populated levels.

    The complex forms reduce to zero mean momentum and zero symmetrised
    correlation for real eigenfunctions; they are kept general so that the
    same code serves complex states.
    """
    rule = rule or _state_rule(state)
    x = rule.nodes
    phi = eigenfunctions(state.n_max, state.lam, x).astype(complex)
    dphi = eigenfunction_x_derivatives(state.n_max, state.lam, x).astype(complex)
    density = np.abs(phi) ** 2
    p = state.populations

    def average(per_level: np.ndarray) -> float:
        return float(np.real(per_level) @ p)

    return MomentSet(
        mean_x=average(rule.integrate(x * density)),
        mean_p=average(np.imag(rule.integrate(np.conj(phi) * dphi))),
        xx=average(rule.integrate(x**2 * density)),
        pp=average(rule.integrate(np.abs(dphi) ** 2)),
        xp_sym=average(np.imag(rule.integrate(np.conj(phi) * x * dphi))),
    )


def covariance_matrix(moments: MomentSet) -> CovarianceMatrix:
    cov = moments.covariance
    return CovarianceMatrix(
        np.array([[moments.var_x, cov], [cov, moments.var_p]]),
        (moments.mean_x, moments.mean_p),
    )


def uncertainty_product(moments: MomentSet) -> float:
    return math.sqrt(moments.var_x * moments.var_p)


def total_noise(moments: MomentSet) -> float:
    """Var X + Var P."""
    return moments.var_x + moments.var_p


def entropy_h(t: float) -> float:
    """Entropy of a single-mode Gaussian state with symplectic eigenvalue t.

    h(t) = (t + 1/2) ln(t + 1/2) - (t - 1/2) ln(t - 1/2), with h(1/2) = 0.
    """
    if t < 0.5 - HEISENBERG_SLACK:
        raise DomainError(f"symplectic eigenvalue must be >= 1/2, got {t!r}")
    t = max(t, 0.5)
    return float(special.xlogy(t + 0.5, t + 0.5) - special.xlogy(t - 0.5, t - 0.5))


def von_neumann_entropy(state: OscillatorState) -> float:
    if state.is_pure:
        return 0.0
    p = state.populations
    return float(-np.sum(special.xlogy(p, p)))


def nong_delta_raw(state: OscillatorState, moments: MomentSet | None = None) -> float:
    """h(sqrt det sigma) - S(rho) without clipping."""
    sigma = covariance_matrix(moments or quadrature_moments(state))
    return entropy_h(math.sqrt(max(sigma.det, 0.0))) - von_neumann_entropy(state)


def nong_delta(state: OscillatorState, moments: MomentSet | None = None) -> float:
    """Relative-entropy non-Gaussianity; round-off negatives are clipped to zero."""
    value = nong_delta_raw(state, moments)
    if value < 0:
        logger.warning("clipping negative non-Gaussianity %.3e at lambda=%g", value, state.lam.value)
        return 0.0
    return value


def photon_number_moments(state: OscillatorState, rule: QuadratureRule | None = None) -> tuple[float, float]:
    """<n> and <n^2> in position space, from N phi_k = (k - dV) phi_k."""
    rule = rule or _state_rule(state)
    x = rule.nodes
    density = eigenfunctions(state.n_max, state.lam, x) ** 2
    shift = isospectral_partner_shift(state.lam, x)
    levels = np.arange(state.n_max + 1)[:, None]
    p = state.populations
    mean = float(rule.integrate((levels - shift) * density) @ p)
    second = float(rule.integrate((levels - shift) ** 2 * density) @ p)
    return mean, second


def fock_number_moments(state: OscillatorState) -> tuple[float, float]:
    """<n> and <n^2> from the photon-number distribution."""
    distribution = photon_distribution(state)
    n = np.arange(distribution.size)
    return float(n @ distribution), float(n**2 @ distribution)


def fano_factor(state: OscillatorState, method: str = "fock") -> float:
    """(<n^2> - <n>^2) / <n>; undefined for the vacuum."""
    if method == "fock":
        mean, second = fock_number_moments(state)
    elif method == "position":
        mean, second = photon_number_moments(state)
    else:
        raise DomainError(f"unknown Fano method {method!r}")
    if mean < FANO_FLOOR:
        raise UndefinedFanoError(f"mean photon number {mean:.3e} at lambda={state.lam.value} is zero")
    return (second - mean**2) / mean


def effective_level(state: OscillatorState, quantile: float = 0.999) -> int:
    """Photon number below which ``quantile`` of the distribution lies."""
    cumulative = np.cumsum(photon_distribution(state))
    return int(min(np.searchsorted(cumulative, quantile * cumulative[-1]), cumulative.size - 1))


def default_wigner_grid(state: OscillatorState, points: int | None = None) -> PhaseSpaceGrid:
    """Square grid of half-width 8 + sqrt(2 n_eff)."""
    points = points or get_profile().wigner_points
    return PhaseSpaceGrid.square(8.0 + math.sqrt(2.0 * effective_level(state)), points)


def _wigner_values(state: OscillatorState, xs: np.ndarray, ps: np.ndarray) -> np.ndarray:
    """W on the product grid xs x ps by cosine quadrature of the real, even kernel."""
    y_rule = uniform_rule(round(support_half_width(state.n_max), 6), get_profile().grid_spacing)
    ys = y_rule.nodes[y_rule.nodes >= 0]
    # half-line weights: the y = 0 node carries half a panel
    wy = trapezoid_weights(ys.size, y_rule.nodes[1] - y_rule.nodes[0])
    cosines = np.cos(2.0 * np.outer(ys, ps))
    p = state.populations
    out = np.empty((xs.size, ps.size))
    for start in range(0, xs.size, WIGNER_CHUNK):
        x = xs[start : start + WIGNER_CHUNK, None]
        plus = eigenfunctions(state.n_max, state.lam, x + ys)
        minus = eigenfunctions(state.n_max, state.lam, x - ys)
        kernel = np.tensordot(p, plus * minus, axes=1)
        out[start : start + WIGNER_CHUNK] = (kernel * wy) @ cosines
    return (2.0 / math.pi) * out


def wigner(state: OscillatorState, grid: PhaseSpaceGrid | None = None) -> WignerField:
    """W(x, p) = (1/pi) integral rho(x + y, x - y) exp(-2ipy) dy on ``grid``."""
    grid = grid or default_wigner_grid(state)
    return WignerField(grid, _wigner_values(state, grid.xs, grid.ps))


def wigner_marginal(field: WignerField) -> np.ndarray:
    """Integral of W over p at every x of the grid."""
    grid = field.grid
    return field.values @ trapezoid_weights(grid.p_points, grid.dp)


def wigner_normalisation(field: WignerField) -> float:
    grid = field.grid
    return float(trapezoid_weights(grid.x_points, grid.dx) @ field.values @ trapezoid_weights(grid.p_points, grid.dp))


def wigner_negativity_estimate(state: OscillatorState, grid: PhaseSpaceGrid | None = None) -> QuadratureResult:
    """Negative volume nu = integral |W| - 1, refining the grid until nu is stable."""
    grid = grid or default_wigner_grid(state)
    tol = Tolerance(NEGATIVITY_TOL, NEGATIVITY_TOL, get_profile().max_refinements_2d)
    result = integrate2d(lambda x, p: np.abs(_wigner_values(state, x[:, 0], p[0])), grid, tol)
    nu = max(result.value - 1.0, 0.0)
    return QuadratureResult(nu, result.error, result.converged, result.method, result.evaluations)


def wigner_negativity(state: OscillatorState, grid: PhaseSpaceGrid | None = None) -> float:
    return wigner_negativity_estimate(state, grid).value


def qcs(state: OscillatorState, moments: MomentSet | None = None) -> float:
    """Quadrature coherence scale from the total noise.

    Pure states: C^2 = Var X + Var P. Thermal states use C^2 = P^2 (Var X + Var P).
    """
    noise = total_noise(moments or quadrature_moments(state))
    if state.is_pure:
        return math.sqrt(noise)
    return math.sqrt(purity(state) ** 2 * noise)


def qcs_kernel(state: OscillatorState, rule: QuadratureRule | None = None) -> float:
    """Quadrature coherence scale from the density-matrix kernel.

    C^2 = (C_X^2 + C_P^2)/2 with C_X^2 = (1/P) int (x - x')^2 rho^2 and
    C_P^2 = (1/P) int |(d/dx + d/dx') rho|^2, both over the (x, x') plane.
    """
    kernel = position_kernel(state, rule)
    x, w = kernel.grid, kernel.rule.weights
    phi = eigenfunctions(state.n_max, state.lam, x)
    dphi = eigenfunction_x_derivatives(state.n_max, state.lam, x)
    half = (dphi.T * state.populations) @ phi
    gradient = half + half.T
    separation = (x[:, None] - x[None, :]) ** 2
    coherence_x = w @ (separation * kernel.values**2) @ w
    coherence_p = w @ (gradient**2) @ w
    return math.sqrt(0.5 * (coherence_x + coherence_p) / kernel.purity)
