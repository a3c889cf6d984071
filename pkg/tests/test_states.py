import math

import numpy as np
import pytest

from isospectral import states
from isospectral.errors import DomainError
from isospectral.models import DeformationParameter, OscillatorState, StateKind


def test_partition_function_and_mean_energy():
    assert states.partition_function(0.5) == pytest.approx(math.e**2 / (math.e**2 - 1.0))
    assert states.mean_energy(0.5) == pytest.approx(1.0 / (math.e**2 - 1.0))
    assert states.mean_energy(1e-3) == 0.0


@pytest.mark.parametrize("temperature", [0.0, -0.3, math.inf, math.nan])
def test_temperature_must_be_positive(temperature):
    with pytest.raises(DomainError):
        states.gibbs_weights(temperature)


@pytest.mark.parametrize("temperature", [0.05, 0.25, 0.33, 0.5, 2.0])
def test_gibbs_weights_are_geometric(temperature):
    weights = states.gibbs_weights(temperature)
    p = weights.probabilities
    assert np.all(np.diff(p) < 0)
    assert np.allclose(p[1:] / p[:-1], math.exp(-1.0 / temperature))
    assert weights.deficit <= 1e-12
    assert p.sum() == pytest.approx(1.0, abs=1e-11)


def test_gibbs_cut_grows_with_temperature():
    assert states.gibbs_cut(0.01) == 0
    assert states.gibbs_cut(0.25) < states.gibbs_cut(0.5) < states.gibbs_cut(2.0)


def test_gibbs_weights_raise_small_cut():
    assert states.gibbs_weights(0.5, n_cut=2).n_cut == states.gibbs_cut(0.5)
    assert states.gibbs_weights(0.5, n_cut=40).n_cut == 40


def test_low_temperature_is_ground_state():
    assert states.gibbs_weights(0.01).probabilities[0] == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("temperature", [0.1, 0.25, 0.33, 0.5, 1.0])
def test_entropy_closed_form_matches_sum(temperature):
    assert states.thermal_entropy(temperature) == pytest.approx(states.thermal_entropy_sum(temperature), abs=1e-10)


def test_entropy_increases_with_temperature():
    values = [states.thermal_entropy(t) for t in (0.1, 0.25, 0.33, 0.5, 1.0)]
    assert values == sorted(values)
    assert states.thermal_entropy(0.01) == pytest.approx(0.0, abs=1e-20)


def test_purity():
    assert states.purity(states.ground_state(3.0)) == 1.0
    for lam in (0.0, 10.0):
        state = states.thermal_state(lam, 0.33)
        assert states.purity(state) == pytest.approx(states.purity_closed_form(0.33), abs=1e-10)


def test_populations_do_not_depend_on_lambda():
    assert np.array_equal(states.thermal_state(1.0, 0.5).populations, states.thermal_state(500.0, 0.5).populations)


def test_state_invariants():
    lam = DeformationParameter(1.0)
    with pytest.raises(DomainError):
        OscillatorState(lam, StateKind.THERMAL, temperature=0.5, n_cut=3)
    with pytest.raises(DomainError):
        OscillatorState(lam, StateKind.GROUND, temperature=0.5)
    assert states.make_state(1.0).is_pure
    assert states.make_state(1.0, 0.25).kind is StateKind.THERMAL


def test_fock_overlaps_at_zero_lambda_are_identity():
    overlaps = states.fock_overlap_matrix(0.0, n_cut=3)
    expected = np.zeros_like(overlaps.entries)
    expected[:4, :4] = np.eye(4)
    assert overlaps.converged
    assert np.allclose(overlaps.entries, expected, atol=1e-10)


@pytest.mark.parametrize("lam", [1.0, 10.0])
def test_fock_columns_are_complete(lam):
    overlaps = states.fock_overlap_matrix(lam, n_cut=4)
    assert overlaps.converged
    assert overlaps.norm_deficit < 1e-8
    assert overlaps.m_cut >= states.FOCK_START


def test_fock_overlaps_report_cap():
    overlaps = states.fock_overlap_matrix(1e5, cap=60)
    assert overlaps.m_cut == 60
    assert not overlaps.converged


def test_fock_overlaps_reject_negative_cut():
    with pytest.raises(DomainError):
        states.fock_overlap_matrix(1.0, m_cut=-1)


def test_vacuum_photon_distribution():
    distribution = states.photon_distribution(states.ground_state(0.0))
    assert distribution[0] == pytest.approx(1.0, abs=1e-12)
    assert np.allclose(distribution[1:], 0.0, atol=1e-12)


def test_thermal_photon_distribution_at_zero_lambda():
    state = states.thermal_state(0.0, 0.5)
    distribution = states.photon_distribution(state)
    cut = state.n_max + 1
    assert np.allclose(distribution[:cut], state.populations, atol=1e-10)
    assert np.allclose(distribution[cut:], 0.0, atol=1e-10)


@pytest.mark.parametrize("lam", [1.0, 10.0, 500.0])
def test_photon_distribution_is_normalised(lam):
    distribution = states.photon_distribution(states.ground_state(lam))
    assert np.all(distribution >= 0.0)
    assert distribution.sum() == pytest.approx(1.0, abs=1e-6)


def test_position_kernel_of_thermal_state():
    state = states.thermal_state(10.0, 0.33)
    kernel = states.position_kernel(state)
    assert np.array_equal(kernel.values, kernel.values.T)
    assert kernel.trace == pytest.approx(1.0, abs=1e-9)
    assert kernel.purity == pytest.approx(states.purity(state), abs=1e-8)


def test_kernel_spectrum_of_ground_state():
    spectrum = states.kernel_spectrum(states.position_kernel(states.ground_state(5.0)))
    assert spectrum[0] == pytest.approx(1.0, abs=1e-8)
    assert np.all(np.abs(spectrum[1:]) < 1e-8)


def test_kernel_spectrum_of_thermal_state_recovers_populations():
    state = states.thermal_state(5.0, 0.5)
    spectrum = states.kernel_spectrum(states.position_kernel(state))
    assert np.allclose(spectrum[: state.n_max + 1], state.populations, atol=1e-8)
