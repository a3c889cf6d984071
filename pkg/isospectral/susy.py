"""Darboux/SUSY construction of the oscillators isospectral to the shifted harmonic oscillator.

Units hbar = omega = m = 1. The seed is V(x) = (x^2 - 1)/2 with ground state
psi_0 = pi^(-1/4) exp(-x^2/2); the family is indexed by lambda > -1/sqrt(2).
Every eigenfunction of the deformed Hamiltonian has the form

    phi_0 = sqrt(1 + a) psi_0 / (1 + a I),
    phi_n = psi_n + lambda g psi_{n-1} / sqrt(n),   g = psi_0^2 / (1 + a I),

with a = sqrt(2) lambda and I the cumulative integral of psi_0^2. The second
line is the printed closed form for the excited states with the Hermite
polynomials folded into normalised Hermite functions, which keeps it finite
for high levels.
"""

import logging
import math
from functools import lru_cache

import numpy as np
from scipy import special

from isospectral.config import get_profile
from isospectral.errors import DomainError
from isospectral.models import LAMBDA_FLOOR, DeformationParameter, QuadratureRule, WavefunctionSample
from isospectral.numerics import hermite_functions, position_rule, uniform_rule

logger = logging.getLogger(__name__)

SQRT2 = math.sqrt(2.0)
LARGE_LAMBDA = 1e4
FD_STEP = 1e-3
RICHARDSON_REL_STEP = 1e-4

LambdaLike = float | DeformationParameter


def _lam(lam: LambdaLike) -> DeformationParameter:
    return DeformationParameter.of(lam)


def sho_wavefunction(n: int, x: float | np.ndarray) -> float | np.ndarray:
    """Normalised eigenfunction psi_n of the shifted harmonic oscillator."""
    if n < 0:
        raise DomainError(f"level must be non-negative, got {n}")
    value = hermite_functions(n, x)[n]
    return value if value.ndim else float(value)


def cumulative_I(x: float | np.ndarray) -> float | np.ndarray:
    """I(x) = (1 + erf x)/2, evaluated as erfc(-x)/2 to keep the left tail accurate."""
    return 0.5 * special.erfc(-np.asarray(x, dtype=float)) if np.ndim(x) else 0.5 * float(special.erfc(-x))


def superpotential(x: float | np.ndarray) -> float | np.ndarray:
    """W(x) = -(1/sqrt 2) d/dx ln psi_0 = x / sqrt 2."""
    return x / SQRT2


def _psi0_squared(x: np.ndarray) -> np.ndarray:
    return np.exp(-(x**2)) / math.sqrt(math.pi)


def _denominator(lam: DeformationParameter, x: np.ndarray) -> np.ndarray:
    return 1.0 + lam.scaled * cumulative_I(x)


def isospectral_potential(lam: LambdaLike, x: float | np.ndarray) -> float | np.ndarray:
    """Deformed potential V^(lambda; x); lambda = 0 gives (x^2 - 1)/2."""
    lam = _lam(lam)
    x = np.asarray(x, dtype=float)
    d = _denominator(lam, x)
    value = 0.5 * (
        -1.0
        + x**2
        + 4.0 * lam.value**2 * np.exp(-2.0 * x**2) / (math.pi * d**2)
        + math.sqrt(2.0 / math.pi) * 4.0 * lam.value * np.exp(-(x**2)) * x / d
    )
    return value if value.ndim else float(value)


def isospectral_partner_shift(lam: LambdaLike, x: np.ndarray) -> np.ndarray:
    """V^(lambda; x) - V(x), the anharmonic term added by the deformation."""
    lam = _lam(lam)
    x = np.asarray(x, dtype=float)
    d = _denominator(lam, x)
    return (
        2.0 * lam.value**2 * np.exp(-2.0 * x**2) / (math.pi * d**2)
        + 2.0 * SQRT2 * lam.value * x * np.exp(-(x**2)) / (math.sqrt(math.pi) * d)
    )


def _ground(lam: DeformationParameter, x: np.ndarray) -> np.ndarray:
    a = lam.scaled
    if lam.value > LARGE_LAMBDA:
        log_psi0 = -0.5 * x**2 - 0.25 * math.log(math.pi)
        return np.exp(0.5 * math.log1p(a) - np.log1p(a * cumulative_I(x)) + log_psi0)
    return np.pi**-0.25 * np.exp(-0.5 * x**2) * math.sqrt(1.0 + a) / _denominator(lam, x)


def ground_wavefunction(lam: LambdaLike, x: float | np.ndarray) -> float | np.ndarray:
    """Normalised ground state phi_0(x; lambda)."""
    value = _ground(_lam(lam), np.asarray(x, dtype=float))
    return value if value.ndim else float(value)


def superpotential_deformed(lam: LambdaLike, x: float | np.ndarray) -> float | np.ndarray:
    """W^(lambda; x) = -(1/sqrt 2) d/dx ln phi_0 = W(x) + psi_0^2 a / (sqrt 2 (1 + a I))."""
    lam = _lam(lam)
    x = np.asarray(x, dtype=float)
    value = x / SQRT2 + lam.value * _psi0_squared(x) / _denominator(lam, x)
    return value if value.ndim else float(value)


def _raw_eigenfunctions(n_max: int, lam: DeformationParameter, x: np.ndarray) -> np.ndarray:
    """Closed forms for levels 0..n_max, before the normalisation pass."""
    psi = hermite_functions(n_max, x)
    out = np.empty_like(psi)
    out[0] = _ground(lam, x)
    if n_max >= 1:
        g = lam.value * _psi0_squared(x) / _denominator(lam, x)
        levels = np.arange(1, n_max + 1).reshape(-1, *([1] * x.ndim))
        out[1:] = psi[1:] + g * psi[:-1] / np.sqrt(levels)
    return out


@lru_cache(maxsize=4096)
def _excited_norm(n: int, lam: float, spacing: float) -> float:
    rule = position_rule(n, spacing)
    phi = _raw_eigenfunctions(n, DeformationParameter(lam), rule.nodes)[n]
    norm = math.sqrt(float(rule.integrate(phi**2)))
    logger.debug("pre-normalisation norm of level %d at lambda=%g: %.15f", n, lam, norm)
    return norm


def level_norms(n_max: int, lam: LambdaLike) -> np.ndarray:
    """Norms of the closed forms for levels 0..n_max (level 0 is exactly normalised)."""
    lam = _lam(lam)
    spacing = get_profile().grid_spacing
    return np.array([1.0] + [_excited_norm(n, lam.value, spacing) for n in range(1, n_max + 1)])


def eigenfunctions(n_max: int, lam: LambdaLike, x: np.ndarray) -> np.ndarray:
    """Normalised phi_0..phi_{n_max} on ``x``, shape (n_max + 1, *x.shape)."""
    lam = _lam(lam)
    x = np.asarray(x, dtype=float)
    norms = level_norms(n_max, lam).reshape(-1, *([1] * x.ndim))
    return _raw_eigenfunctions(n_max, lam, x) / norms


def excited_wavefunction(n: int, lam: LambdaLike, x: float | np.ndarray) -> float | np.ndarray:
    """Normalised excited eigenfunction phi_n(x; lambda), n >= 1."""
    if n < 1:
        raise DomainError(f"excited levels start at n = 1, got {n}")
    value = eigenfunctions(n, lam, np.asarray(x, dtype=float))[n]
    return value if value.ndim else float(value)


def wavefunction(n: int, lam: LambdaLike, x: float | np.ndarray) -> float | np.ndarray:
    if n < 0:
        raise DomainError(f"level must be non-negative, got {n}")
    return ground_wavefunction(lam, x) if n == 0 else excited_wavefunction(n, lam, x)


def sample(n: int, lam: LambdaLike, x: float) -> WavefunctionSample:
    lam = _lam(lam)
    return WavefunctionSample(x=x, value=float(wavefunction(n, lam, x)), n=n, lam=lam)


def eigenfunction_x_derivatives(n_max: int, lam: LambdaLike, x: np.ndarray) -> np.ndarray:
    """Analytic d/dx of the normalised phi_0..phi_{n_max}."""
    lam = _lam(lam)
    x = np.asarray(x, dtype=float)
    psi = hermite_functions(n_max + 1, x)
    levels = np.arange(n_max + 2).reshape(-1, *([1] * x.ndim))
    dpsi = np.empty_like(psi)
    dpsi[0] = -x * psi[0]
    dpsi[1:] = np.sqrt(levels[1:] / 2.0) * psi[:-1] - np.sqrt((levels[1:] + 1) / 2.0) * np.roll(psi, -1, axis=0)[1:]
    # psi_{n_max+2} is never needed: only rows 0..n_max of dpsi are used below
    out = np.empty((n_max + 1, *x.shape))
    d = _denominator(lam, x)
    out[0] = -_ground(lam, x) * (x + lam.scaled * _psi0_squared(x) / d)
    if n_max >= 1:
        g = lam.value * _psi0_squared(x) / d
        dg = -2.0 * x * g - SQRT2 * g**2
        root = np.sqrt(levels[1 : n_max + 1])
        out[1:] = dpsi[1 : n_max + 1] + (dg * psi[:n_max] + g * dpsi[:n_max]) / root
    return out / level_norms(n_max, lam).reshape(-1, *([1] * x.ndim))


def wavefunction_x_derivative(n: int, lam: LambdaLike, x: float | np.ndarray) -> float | np.ndarray:
    value = eigenfunction_x_derivatives(n, lam, np.asarray(x, dtype=float))[n]
    return value if value.ndim else float(value)


def _analytic_lambda_derivatives(n_max: int, lam: DeformationParameter, x: np.ndarray) -> np.ndarray:
    d = _denominator(lam, x)
    i_x = cumulative_I(x)
    out = np.empty((n_max + 1, *x.shape))
    out[0] = _ground(lam, x) * ((1.0 / SQRT2) / (1.0 + lam.scaled) - SQRT2 * i_x / d)
    if n_max >= 1:
        psi = hermite_functions(n_max - 1, x)
        root = np.sqrt(np.arange(1, n_max + 1)).reshape(-1, *([1] * x.ndim))
        out[1:] = _psi0_squared(x) * psi / (root * d**2)
    return out


def richardson_step(lam: DeformationParameter) -> float:
    return max(RICHARDSON_REL_STEP, RICHARDSON_REL_STEP * lam.value)


def _richardson_lambda_derivatives(
    n_max: int, lam: DeformationParameter, x: np.ndarray, step_scale: float
) -> np.ndarray:
    h = richardson_step(lam) * step_scale
    if lam.value - h <= LAMBDA_FLOOR:
        raise DomainError(f"derivative stencil at lambda={lam.value} would cross -1/sqrt(2)")

    def central(step: float) -> np.ndarray:
        upper = eigenfunctions(n_max, lam.value + step, x)
        lower = eigenfunctions(n_max, lam.value - step, x)
        return (upper - lower) / (2.0 * step)

    return (4.0 * central(0.5 * h) - central(h)) / 3.0


def lambda_derivatives(
    n_max: int,
    lam: LambdaLike,
    x: np.ndarray,
    method: str | None = None,
    step_scale: float = 1.0,
) -> np.ndarray:
    """d/dlambda of phi_0..phi_{n_max} on ``x``.

    Level 0 is always differentiated analytically. Excited levels use central
    differences with one Richardson step unless ``method="analytic"``.
    """
    lam = _lam(lam)
    x = np.asarray(x, dtype=float)
    method = method or "richardson"
    if method not in ("analytic", "richardson"):
        raise DomainError(f"unknown derivative method {method!r}")
    analytic = _analytic_lambda_derivatives(n_max, lam, x)
    if method == "analytic" or n_max == 0:
        return analytic
    out = _richardson_lambda_derivatives(n_max, lam, x, step_scale)
    out[0] = analytic[0]
    return out


def wavefunction_lambda_derivative(
    n: int, lam: LambdaLike, x: float | np.ndarray, method: str | None = None
) -> float | np.ndarray:
    """d phi_n(x; lambda) / d lambda."""
    if n < 0:
        raise DomainError(f"level must be non-negative, got {n}")
    lam = _lam(lam)
    x_arr = np.asarray(x, dtype=float)
    if n == 0:
        value = _analytic_lambda_derivatives(0, lam, x_arr)[0]
    else:
        value = lambda_derivatives(n, lam, x_arr, method)[n]
    return value if value.ndim else float(value)


def _second_derivative(n: int, lam: DeformationParameter, x: np.ndarray, h: float = FD_STEP) -> np.ndarray:
    stencil = [wavefunction(n, lam, x + k * h) for k in (-2, -1, 1, 2)]
    centre = wavefunction(n, lam, x)
    return (-stencil[0] + 16.0 * stencil[1] - 30.0 * centre + 16.0 * stencil[2] - stencil[3]) / (12.0 * h**2)


def _level_rule(n: int, rule: QuadratureRule | None) -> QuadratureRule:
    return rule or uniform_rule(round(12.0 + math.sqrt(2.0 * n), 6), 0.01)


def hamiltonian_residual(n: int, lam: LambdaLike, rule: QuadratureRule | None = None) -> float:
    """L2 norm of (-1/2 d^2/dx^2 + V^(lambda) - n) phi_n, second derivative by a 5-point stencil."""
    lam = _lam(lam)
    rule = _level_rule(n, rule)
    x = rule.nodes
    phi = wavefunction(n, lam, x)
    residual = -0.5 * _second_derivative(n, lam, x) + (isospectral_potential(lam, x) - n) * phi
    return math.sqrt(float(rule.integrate(residual**2)))


def rayleigh_quotient(n: int, lam: LambdaLike, rule: QuadratureRule | None = None) -> float:
    """<phi_n|H(lambda)|phi_n> / <phi_n|phi_n>, kinetic term integrated by parts."""
    lam = _lam(lam)
    rule = _level_rule(n, rule)
    x = rule.nodes
    phi = wavefunction(n, lam, x)
    dphi = wavefunction_x_derivative(n, lam, x)
    energy = rule.integrate(0.5 * dphi**2 + isospectral_potential(lam, x) * phi**2)
    return float(energy / rule.integrate(phi**2))


def count_nodes(n: int, lam: LambdaLike, rule: QuadratureRule | None = None, floor: float = 1e-8) -> int:
    """Sign changes of phi_n, ignoring the numerically vanishing tails."""
    lam = _lam(lam)
    phi = wavefunction(n, lam, _level_rule(n, rule).nodes)
    significant = phi[np.abs(phi) > floor * np.max(np.abs(phi))]
    return int(np.count_nonzero(np.diff(np.sign(significant))))
