"""Quantum and classical Fisher information for the deformation parameter."""

import logging
import math

import numpy as np

from isospectral.errors import ConvergenceError, DomainError
from isospectral.models import (
    BoundReport,
    DeformationParameter,
    DerivativeOverlaps,
    FisherMethod,
    FisherResult,
    OscillatorState,
)
from isospectral.numerics import position_rule
from isospectral.states import make_state, thermal_state
from isospectral.susy import eigenfunctions, lambda_derivatives, richardson_step

logger = logging.getLogger(__name__)

GROUND_QFI_PREFACTOR = 2.0 / 3.0
DOUBLING_TOL = 1e-6
STEP_DISCREPANCY_TOL = 1e-3
DENSITY_FLOOR = 1e-300


def qfi_closed_form(lam: float | DeformationParameter) -> float:
    """H(lambda) = (2/3) / (1 + sqrt(2) lambda)^2 for the ground state."""
    lam = DeformationParameter.of(lam)
    return GROUND_QFI_PREFACTOR / (1.0 + lam.scaled) ** 2


def qfi_pure(lam: float | DeformationParameter) -> FisherResult:
    """4 [<d phi_0|d phi_0> + <d phi_0|phi_0>^2] with the analytic lambda-derivative."""
    lam = DeformationParameter.of(lam)
    rule = position_rule(0)
    phi = eigenfunctions(0, lam, rule.nodes)[0]
    dphi = lambda_derivatives(0, lam, rule.nodes)[0]
    value = 4.0 * (rule.integrate(dphi**2) + rule.integrate(dphi * phi) ** 2)
    return FisherResult(float(value), FisherMethod.PURE_OVERLAP, lam.value)


def signal_to_noise(lam: float | DeformationParameter) -> float:
    """lambda^2 H(lambda); tends to 1/3."""
    lam = DeformationParameter.of(lam)
    return lam.value**2 * qfi_pure(lam).value


def _check_isospectral_weights(state: OscillatorState) -> None:
    """The Gibbs weights must not move with lambda; the classical QFI term then vanishes."""
    shifted = thermal_state(state.lam.value + richardson_step(state.lam), state.temperature, state.n_cut)
    if not np.array_equal(shifted.populations, state.populations):
        raise ConvergenceError("Gibbs weights changed with lambda")


def thermal_derivative_overlaps(
    lam: float | DeformationParameter, temperature: float, n_cut: int = 0, step_scale: float = 1.0
) -> DerivativeOverlaps:
    """<phi_m|d phi_n/d lambda> over the levels of the Gibbs state at (lambda, T)."""
    state = thermal_state(lam, temperature, n_cut)
    rule = position_rule(state.n_max)
    phi = eigenfunctions(state.n_max, state.lam, rule.nodes)
    dphi = lambda_derivatives(state.n_max, state.lam, rule.nodes, step_scale=step_scale)
    return DerivativeOverlaps(rule.integrate(phi[:, None, :] * dphi[None, :, :]), rule.integrate(dphi**2))


def _mixed_sum(populations: np.ndarray, overlaps: DerivativeOverlaps) -> float:
    p = populations
    total = p[:, None] + p[None, :]
    factor = np.divide((p[:, None] - p[None, :]) ** 2, total, out=np.zeros_like(total), where=total > 0)
    kept = float(np.sum(factor * overlaps.matrix**2))
    # levels beyond the cut are unpopulated, so each pair (n, m > cut) weighs p_n, and it appears twice
    return 2.0 * (kept + 2.0 * float(p @ overlaps.tail))


def qfi_thermal(lam: float | DeformationParameter, temperature: float, n_cut: int = 0) -> FisherResult:
    """2 sum_{n != m} (p_n - p_m)^2/(p_n + p_m) |<phi_m|d phi_n>|^2.

    The sum is validated against a doubled level cut and against a halved
    Richardson step; either disagreement marks the result as not converged.
    """
    state = thermal_state(lam, temperature, n_cut)
    _check_isospectral_weights(state)
    value = _mixed_sum(state.populations, thermal_derivative_overlaps(state.lam, temperature, state.n_cut))

    doubled = thermal_state(state.lam, temperature, 2 * state.n_cut + 1)
    doubled_value = _mixed_sum(doubled.populations, thermal_derivative_overlaps(state.lam, temperature, doubled.n_cut))
    converged = abs(doubled_value - value) <= DOUBLING_TOL * max(abs(value), 1e-300)

    halved = _mixed_sum(state.populations, thermal_derivative_overlaps(state.lam, temperature, state.n_cut, 0.5))
    discrepancy = abs(halved - value) / max(abs(value), 1e-300)
    if discrepancy > STEP_DISCREPANCY_TOL:
        converged = False
    if not converged:
        logger.warning(
            "thermal QFI at lambda=%g, T=%g not converged (doubled cut %.3e, step discrepancy %.3e)",
            state.lam.value,
            temperature,
            doubled_value,
            discrepancy,
        )
    return FisherResult(
        value,
        FisherMethod.MIXED_SUM,
        state.lam.value,
        temperature=temperature,
        n_cut=state.n_cut,
        converged=converged,
        discrepancy=discrepancy,
    )


def qfi(lam: float | DeformationParameter, temperature: float | None = None) -> FisherResult:
    return qfi_pure(lam) if temperature is None else qfi_thermal(lam, temperature)


def classical_fi_position(lam: float | DeformationParameter, temperature: float | None = None) -> FisherResult:
    """F = integral (d p(x|lambda)/d lambda)^2 / p(x|lambda) for position measurements."""
    state = make_state(lam, temperature)
    rule = position_rule(state.n_max)
    phi = eigenfunctions(state.n_max, state.lam, rule.nodes)
    dphi = lambda_derivatives(state.n_max, state.lam, rule.nodes)
    density = state.populations @ phi**2
    derivative = state.populations @ (2.0 * phi * dphi)
    integrand = np.divide(derivative**2, density, out=np.zeros_like(density), where=density > DENSITY_FLOOR)
    return FisherResult(
        float(rule.integrate(integrand)),
        FisherMethod.CLASSICAL_POSITION,
        state.lam.value,
        temperature=temperature,
        n_cut=state.n_cut,
    )


def _variance_bound(information: float, repetitions: int, lam: float) -> float:
    if information <= 0:
        logger.warning("zero quantum Fisher information at lambda=%s; the bound is infinite", lam)
        return math.inf
    return 1.0 / (repetitions * information)


def qcrb_variance(lam: float | DeformationParameter, repetitions: int = 1, temperature: float | None = None) -> float:
    """Quantum Cramer-Rao bound 1/(M H) on the variance of an unbiased estimator."""
    if repetitions < 1:
        raise DomainError("the number of repetitions must be at least 1")
    return _variance_bound(qfi(lam, temperature).value, repetitions, float(lam))


def bound_report(lam: float, repetitions: int = 1, temperature: float | None = None) -> BoundReport:
    """The bound with the QFI it is built from and lambda^2 H."""
    if repetitions < 1:
        raise DomainError("the number of repetitions must be at least 1")
    information = qfi(lam, temperature).value
    return BoundReport(
        lam=lam,
        temperature=temperature,
        repetitions=repetitions,
        qfi=information,
        variance_bound=_variance_bound(information, repetitions, lam),
        signal_to_noise=lam**2 * information,
    )


def position_optimality_residual(lam: float | DeformationParameter, temperature: float | None = None) -> float:
    """(H - F)/H: how far position measurements fall short of the quantum limit."""
    quantum = qfi(lam, temperature).value
    classical = classical_fi_position(lam, temperature).value
    return (quantum - classical) / quantum
