"""Ground and thermal states of the isospectral oscillators.

Every member of the family has the spectrum E_n = n, so the Gibbs weights
depend on T only. A state therefore carries lambda for its eigenfunctions and
the raw (never renormalised) Gibbs populations for its mixture.
"""

import logging
import math
from functools import lru_cache

import numpy as np
from scipy import special

from isospectral.config import get_profile
from isospectral.errors import ConvergenceError, DomainError
from isospectral.models import (
    DeformationParameter,
    FockOverlapMatrix,
    GibbsWeights,
    OscillatorState,
    PositionKernel,
    QuadratureRule,
    StateKind,
)
from isospectral.numerics import hermite_functions, position_rule, uniform_rule, support_half_width
from isospectral.susy import eigenfunctions

logger = logging.getLogger(__name__)

FOCK_START = 50
FOCK_DEFICIT = 1e-8
ENTROPY_SUM_TAIL = 1e-18


def _check_temperature(temperature: float) -> float:
    if not (temperature > 0 and math.isfinite(temperature)):
        raise DomainError(f"temperature must be positive and finite, got {temperature!r}")
    return float(temperature)


def _boltzmann_ratio(temperature: float) -> float:
    """q = exp(-1/T), the ratio of successive populations."""
    return math.exp(-1.0 / _check_temperature(temperature))


def partition_function(temperature: float) -> float:
    """Z = e^(1/T) / (e^(1/T) - 1)."""
    return -1.0 / math.expm1(-1.0 / _check_temperature(temperature))


def mean_energy(temperature: float) -> float:
    """<E> = 1 / (e^(1/T) - 1), the mean occupation of the shifted spectrum."""
    exponent = 1.0 / _check_temperature(temperature)
    return 0.0 if exponent > 700 else 1.0 / math.expm1(exponent)


def gibbs_cut(temperature: float, tail: float | None = None) -> int:
    """Smallest n_cut whose discarded weight q^(n_cut + 1) is at most ``tail``."""
    tail = tail or get_profile().gibbs_tail
    return max(0, math.ceil(-_check_temperature(temperature) * math.log(tail)) - 1)


def gibbs_weights(temperature: float, n_cut: int = 0) -> GibbsWeights:
    """Populations p_k = e^(-k/T)/Z for k <= n_cut, raising n_cut until the tail is negligible."""
    q = _boltzmann_ratio(temperature)
    if n_cut < 0:
        raise DomainError("n_cut must be non-negative")
    needed = gibbs_cut(temperature)
    if needed > n_cut:
        if n_cut:
            logger.info("raising Gibbs cut at T=%g from %d to %d", temperature, n_cut, needed)
        n_cut = needed
    probabilities = -math.expm1(-1.0 / temperature) * q ** np.arange(n_cut + 1)
    return GibbsWeights(probabilities, partition_function(temperature), float(temperature))


def thermal_entropy_sum(temperature: float) -> float:
    """-sum p_k ln p_k over levels down to a 1e-18 tail."""
    n_terms = gibbs_cut(temperature, ENTROPY_SUM_TAIL) + 1
    q = _boltzmann_ratio(temperature)
    p = -math.expm1(-1.0 / temperature) * q ** np.arange(n_terms)
    return float(-np.sum(special.xlogy(p, p)))


def thermal_entropy(temperature: float) -> float:
    """S = ln Z + <E>/T, checked against the truncated sum."""
    q = _boltzmann_ratio(temperature)
    closed = -math.log1p(-q) + mean_energy(temperature) / temperature if q > 0 else 0.0
    summed = thermal_entropy_sum(temperature)
    if abs(closed - summed) > 1e-10:
        logger.warning("entropy at T=%g: closed form %.15g, sum %.15g", temperature, closed, summed)
    return closed


def purity_closed_form(temperature: float) -> float:
    """(1 - q)^2 / (1 - q^2) = (1 - q)/(1 + q)."""
    q = _boltzmann_ratio(temperature)
    return (1.0 - q) / (1.0 + q)


def ground_state(lam: float | DeformationParameter) -> OscillatorState:
    return OscillatorState(DeformationParameter.of(lam), StateKind.GROUND)


def thermal_state(lam: float | DeformationParameter, temperature: float, n_cut: int = 0) -> OscillatorState:
    weights = gibbs_weights(temperature, n_cut)
    return OscillatorState(
        DeformationParameter.of(lam),
        StateKind.THERMAL,
        temperature=weights.temperature,
        n_cut=weights.n_cut,
        weights=weights,
    )


def make_state(lam: float | DeformationParameter, temperature: float | None = None) -> OscillatorState:
    """Ground state when ``temperature`` is None, Gibbs state otherwise."""
    return ground_state(lam) if temperature is None else thermal_state(lam, temperature)


def purity(state: OscillatorState) -> float:
    """Tr rho^2; the sum over the raw populations, cross-checked against the closed form."""
    if state.is_pure:
        return 1.0
    value = float(np.sum(state.populations**2))
    closed = purity_closed_form(state.temperature)
    if abs(value - closed) > 1e-10:
        logger.warning("purity at T=%g: sum %.15g, closed form %.15g", state.temperature, value, closed)
    return value


@lru_cache(maxsize=4)
def _fock_basis(cap: int, spacing: float) -> tuple[QuadratureRule, np.ndarray]:
    """SHO eigenfunctions 0..cap times the rule weights, shared by every lambda."""
    rule = position_rule(cap, spacing)
    basis = hermite_functions(cap, rule.nodes) * rule.weights
    basis.flags.writeable = False
    return rule, basis


@lru_cache(maxsize=256)
def _all_overlaps(lam: float, n_cut: int, cap: int, spacing: float) -> np.ndarray:
    rule, basis = _fock_basis(cap, spacing)
    full = basis @ eigenfunctions(n_cut, lam, rule.nodes).T
    full.flags.writeable = False
    return full


def fock_overlap_matrix(
    lam: float | DeformationParameter,
    m_cut: int = FOCK_START,
    n_cut: int = 0,
    cap: int | None = None,
) -> FockOverlapMatrix:
    """c[m][n] = <m|phi_n(lambda)>, with m_cut doubled until every column is complete."""
    if m_cut < 0 or n_cut < 0:
        raise DomainError("truncation orders must be non-negative")
    lam = DeformationParameter.of(lam)
    profile = get_profile()
    cap = cap or profile.fock_cap
    full = _all_overlaps(lam.value, n_cut, cap, profile.grid_spacing)
    m_cut = max(m_cut, n_cut, 1)
    while True:
        m_cut = min(m_cut, cap)
        entries = full[: m_cut + 1]
        deficit = float(np.max(np.abs(1.0 - np.sum(entries**2, axis=0))))
        if deficit < FOCK_DEFICIT:
            return FockOverlapMatrix(entries, m_cut, n_cut, lam)
        if m_cut == cap:
            logger.warning("Fock overlaps at lambda=%g hit the cap %d with norm deficit %.2e", lam.value, cap, deficit)
            return FockOverlapMatrix(entries, m_cut, n_cut, lam, converged=False)
        logger.debug("raising Fock cut at lambda=%g beyond %d (deficit %.2e)", lam.value, m_cut, deficit)
        m_cut *= 2


def state_overlaps(state: OscillatorState) -> FockOverlapMatrix:
    return fock_overlap_matrix(state.lam, n_cut=state.n_max)


def photon_distribution(state: OscillatorState) -> np.ndarray:
    """p(n) = sum_k p_k |c[n][k]|^2 over the Fock levels the overlap matrix keeps."""
    overlaps = state_overlaps(state)
    distribution = (overlaps.entries**2) @ state.populations
    if np.any(distribution < -1e-12):
        raise ConvergenceError("negative photon-number probability")
    return np.clip(distribution, 0.0, None)


def position_kernel(state: OscillatorState, rule: QuadratureRule | None = None) -> PositionKernel:
    """rho(x, x') = sum_k p_k phi_k(x) phi_k(x') on the nodes of ``rule``."""
    if rule is None:
        rule = uniform_rule(round(support_half_width(state.n_max), 6), get_profile().kernel_spacing)
    phi = eigenfunctions(state.n_max, state.lam, rule.nodes)
    values = (phi.T * state.populations) @ phi
    return PositionKernel(rule, 0.5 * (values + values.T))


def kernel_spectrum(kernel: PositionKernel) -> np.ndarray:
    """Eigenvalues of the discretised kernel, largest first."""
    root = np.sqrt(kernel.rule.weights)
    return np.linalg.eigvalsh(root[:, None] * kernel.values * root[None, :])[::-1]
