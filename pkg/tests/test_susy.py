import math

import numpy as np
import pytest

from isospectral import susy
from isospectral.errors import DomainError
from isospectral.models import LAMBDA_FLOOR, DeformationParameter


@pytest.mark.parametrize("lam", [0.0, 0.5, 10.0, 1e3])
def test_ground_state_is_normalised(lam, fine_rule):
    phi = susy.ground_wavefunction(lam, fine_rule.nodes)
    assert fine_rule.integrate(phi**2) == pytest.approx(1.0, abs=1e-9)


def test_zero_lambda_recovers_harmonic_oscillator(x_grid):
    for n in range(6):
        assert np.allclose(susy.wavefunction(n, 0.0, x_grid), susy.sho_wavefunction(n, x_grid), atol=1e-12)
    assert np.allclose(susy.isospectral_potential(0.0, x_grid), 0.5 * (x_grid**2 - 1.0), atol=1e-14)


def test_sho_ground_value():
    assert susy.sho_wavefunction(0, 0.0) == pytest.approx(math.pi**-0.25)


def test_cumulative_integral_limits():
    assert susy.cumulative_I(0.0) == pytest.approx(0.5)
    assert susy.cumulative_I(-40.0) == pytest.approx(0.0, abs=1e-300)
    assert susy.cumulative_I(40.0) == pytest.approx(1.0)
    assert susy.cumulative_I(-25.0) > 0.0


def test_potential_at_origin():
    lam = 3.0
    expected = 0.5 * (-1.0 + 4.0 * lam**2 / (math.pi * (1.0 + lam / math.sqrt(2.0)) ** 2))
    assert susy.isospectral_potential(lam, 0.0) == pytest.approx(expected, rel=1e-12)


def test_partner_shift_is_potential_difference(x_grid):
    lam = 7.0
    shift = susy.isospectral_partner_shift(lam, x_grid)
    assert np.allclose(shift, susy.isospectral_potential(lam, x_grid) - 0.5 * (x_grid**2 - 1.0), atol=1e-12)


def test_deformed_superpotential_is_log_derivative(x_grid):
    lam, h = 2.0, 1e-5
    log_derivative = (
        np.log(susy.ground_wavefunction(lam, x_grid + h)) - np.log(susy.ground_wavefunction(lam, x_grid - h))
    ) / (2 * h)
    assert np.allclose(susy.superpotential_deformed(lam, x_grid), -log_derivative / math.sqrt(2.0), atol=1e-7)
    assert susy.superpotential(2.0) == pytest.approx(math.sqrt(2.0))


@pytest.mark.parametrize("lam", [LAMBDA_FLOOR, -1.0, math.inf, math.nan])
def test_lambda_outside_domain(lam):
    with pytest.raises(DomainError):
        susy.ground_wavefunction(lam, 0.0)


def test_lambda_just_above_floor_is_accepted():
    assert susy.ground_wavefunction(-0.7, 0.0) > 0.0


def test_ground_state_has_no_nodes(x_grid):
    assert np.all(susy.ground_wavefunction(25.0, x_grid) > 0.0)


def test_small_lambda_expansion(x_grid):
    lam = 1e-4
    psi0 = susy.sho_wavefunction(0, x_grid)
    first_order = psi0 * (1.0 - lam * susy.special.erf(x_grid) / math.sqrt(2.0))
    assert np.allclose(susy.ground_wavefunction(lam, x_grid), first_order, atol=1e-7)


def test_large_lambda_uses_stable_form(x_grid):
    lam = 2e4
    a = math.sqrt(2.0) * lam
    direct = math.pi**-0.25 * np.exp(-0.5 * x_grid**2) * math.sqrt(1 + a) / (1 + a * susy.cumulative_I(x_grid))
    assert np.allclose(susy.ground_wavefunction(lam, x_grid), direct, rtol=1e-10, atol=0.0)


def test_eigenfunctions_are_orthonormal(fine_rule):
    phi = susy.eigenfunctions(8, 10.0, fine_rule.nodes)
    gram = (phi * fine_rule.weights) @ phi.T
    assert np.max(np.abs(gram - np.eye(9))) < 1e-8


def test_level_norms_start_at_one():
    norms = susy.level_norms(4, 10.0)
    assert norms[0] == 1.0
    assert np.allclose(norms, 1.0, atol=1e-10)


@pytest.mark.parametrize("lam", [1.0, 10.0])
@pytest.mark.parametrize("n", range(4))
def test_eigenfunctions_solve_schrodinger_equation(n, lam):
    assert susy.hamiltonian_residual(n, lam) < 1e-5
    assert susy.rayleigh_quotient(n, lam) == pytest.approx(n, abs=1e-6)


@pytest.mark.parametrize("n", range(6))
def test_node_count(n):
    assert susy.count_nodes(n, 10.0) == n


def test_excited_wavefunction_rejects_ground_level():
    with pytest.raises(DomainError):
        susy.excited_wavefunction(0, 1.0, 0.0)
    with pytest.raises(DomainError):
        susy.wavefunction(-1, 1.0, 0.0)


@pytest.mark.parametrize("n", [0, 1, 3])
def test_x_derivative_matches_finite_difference(n, x_grid):
    lam, h = 5.0, 1e-5
    numeric = (susy.wavefunction(n, lam, x_grid + h) - susy.wavefunction(n, lam, x_grid - h)) / (2 * h)
    assert np.allclose(susy.wavefunction_x_derivative(n, lam, x_grid), numeric, atol=1e-6)


def test_ground_lambda_derivative_at_zero(x_grid):
    expected = -susy.sho_wavefunction(0, x_grid) * susy.special.erf(x_grid) / math.sqrt(2.0)
    assert np.allclose(susy.wavefunction_lambda_derivative(0, 0.0, x_grid), expected, atol=1e-14)


def test_ground_lambda_derivative_matches_finite_difference(x_grid):
    lam, h = 3.0, 1e-5
    numeric = (susy.ground_wavefunction(lam + h, x_grid) - susy.ground_wavefunction(lam - h, x_grid)) / (2 * h)
    assert np.allclose(susy.wavefunction_lambda_derivative(0, lam, x_grid), numeric, atol=1e-8)


def test_lambda_derivative_preserves_norm(fine_rule):
    x = fine_rule.nodes
    phi = susy.eigenfunctions(3, 2.0, x)
    dphi = susy.lambda_derivatives(3, 2.0, x)
    assert np.allclose(fine_rule.integrate(phi * dphi), 0.0, atol=1e-8)


def test_richardson_matches_analytic_excited_derivative(x_grid):
    richardson = susy.lambda_derivatives(3, 1.0, x_grid)
    analytic = susy.lambda_derivatives(3, 1.0, x_grid, method="analytic")
    assert np.allclose(richardson, analytic, atol=1e-7)


def test_richardson_stencil_near_floor():
    with pytest.raises(DomainError):
        susy.lambda_derivatives(2, -0.7071, np.zeros(3))


def test_unknown_derivative_method():
    with pytest.raises(DomainError):
        susy.lambda_derivatives(2, 1.0, np.zeros(3), method="spline")


def test_richardson_step_scales_with_lambda():
    assert susy.richardson_step(DeformationParameter(0.5)) == pytest.approx(1e-4)
    assert susy.richardson_step(DeformationParameter(100.0)) == pytest.approx(1e-2)


def test_sample_carries_level_and_lambda():
    point = susy.sample(2, 4.0, 0.3)
    assert point.n == 2
    assert point.lam.value == 4.0
    assert point.value == pytest.approx(susy.wavefunction(2, 4.0, 0.3))
