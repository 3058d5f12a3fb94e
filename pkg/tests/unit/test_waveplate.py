"""Tests for the waveplate unitary family, transfer function and presets."""

import math

import numpy as np
import pytest

from app.core.exceptions import ContractError, DomainError, ModelError
from app.models.domain import DispersionModel, Scenario
from app.polarization.algebra import KET_X, pauli, unitarity_deviation
from app.waveplate.model import (
    build_u,
    build_u0,
    ghz_to_omega,
    half_waveplate_frequency,
    omega_to_ghz,
    phases,
    phi_minus,
    transfer,
    transfer_closed_form,
)
from app.waveplate.presets import CRYSTAL_HALF_WAVE_GHZ, PRESET_NAMES, PRESETS, crystal_model, get_preset


class TestDispersionModel:
    def test_sum_and_difference(self, reference_model):
        assert reference_model.slope_plus == pytest.approx(1.0)
        assert reference_model.slope_minus == pytest.approx(0.2)

    def test_phases(self, reference_model):
        te, tm, plus, minus = phases(reference_model, 2.0)
        assert (te, tm) == pytest.approx((2.4, 1.6))
        assert (plus, minus) == pytest.approx((2.0, 0.4))
        assert phi_minus(reference_model, 2.0) == pytest.approx(0.4)

    def test_non_finite_rejected(self):
        with pytest.raises(ValueError):
            DispersionModel(slope_te=math.inf, slope_tm=0.8)

    def test_degenerate(self):
        assert DispersionModel(slope_te=1.0, slope_tm=1.0).is_degenerate()


class TestUnitary:
    def test_u0_is_diagonal(self, reference_model):
        u0 = build_u0(reference_model, 1.0)
        assert np.allclose(u0, np.diag([np.exp(0.8j), np.exp(1.2j)]))

    def test_random_unitaries(self, reference_model, rng):
        omega = rng.uniform(0.0, 63.0, 10_000)
        beta = rng.uniform(0.0, math.pi, 10_000)
        u = build_u(reference_model, omega, beta)
        assert u.shape == (10_000, 2, 2)
        assert unitarity_deviation(u) <= 1e-12

    def test_half_turn_of_the_plate_changes_nothing(self, reference_model, rng):
        omega = rng.uniform(0.0, 63.0, 1000)
        beta = rng.uniform(0.0, math.pi, 1000)
        shifted = build_u(reference_model, omega, beta + math.pi)
        assert np.max(np.abs(shifted - build_u(reference_model, omega, beta))) <= 1e-12

    def test_half_wave_plate_at_45_degrees_swaps_polarizations(self, reference_model, omega_s):
        # -i e^{i phi_plus} sigma_1 with phi_plus = 5 pi / 2
        u = build_u(reference_model, omega_s, math.pi / 4)
        assert np.allclose(u, pauli(1), atol=1e-12)


class TestTransfer:
    def test_zero_angle_is_tm_phase(self, scenario):
        assert transfer(scenario, 1.0, 0.0) == pytest.approx(np.exp(0.8j), abs=1e-15)

    def test_right_angle_is_te_phase(self, scenario):
        assert transfer(scenario, 1.0, math.pi / 2) == pytest.approx(np.exp(1.2j), abs=1e-15)

    def test_zero_at_half_wave_frequency(self, scenario, omega_s):
        assert abs(transfer(scenario, omega_s, math.pi / 4)) < 1e-14

    def test_value_at_sixty_degrees(self, scenario, omega_s):
        assert transfer(scenario, omega_s, math.pi / 3) == pytest.approx(-0.5, abs=1e-12)

    def test_matches_closed_form(self, scenario, rng):
        omega = rng.uniform(0.0, 63.0, 500)
        beta = rng.uniform(0.0, math.pi, 500)
        assert np.max(np.abs(transfer(scenario, omega, beta) - transfer_closed_form(scenario, omega, beta))) < 1e-12

    def test_vectorized_matches_scalar(self, scenario):
        omega = np.array([1.0, 2.0, 3.0])
        values = transfer(scenario, omega, 0.3)
        assert values.shape == (3,)
        assert values[1] == pytest.approx(transfer(scenario, 2.0, 0.3))

    def test_closed_form_requires_default_scenario(self, reference_model):
        crossed = Scenario(model=reference_model, psi_f=KET_X)
        with pytest.raises(ContractError):
            transfer_closed_form(crossed, 1.0, 0.2)

    def test_crossed_polarizer_transfer(self, reference_model, omega_s):
        crossed = Scenario(model=reference_model, psi_f=KET_X)
        assert abs(transfer(crossed, omega_s, math.pi / 4)) == pytest.approx(1.0)


class TestHalfWaveFrequency:
    def test_first_orders(self, reference_model):
        assert half_waveplate_frequency(reference_model, 0) == pytest.approx(math.pi / 2 / 0.2)
        assert half_waveplate_frequency(reference_model, 1) == pytest.approx(3 * math.pi / 2 / 0.2)

    def test_degenerate_model(self):
        with pytest.raises(ModelError):
            half_waveplate_frequency(DispersionModel(slope_te=1.0, slope_tm=1.0), 0)

    def test_no_positive_solution(self):
        shifted = DispersionModel(slope_te=1.2, intercept_te=4.0, slope_tm=0.8)
        with pytest.raises(DomainError):
            half_waveplate_frequency(shifted, 0)

    @pytest.mark.parametrize("n", [-1, 1.5, True])
    def test_bad_order(self, reference_model, n):
        with pytest.raises(ValueError):
            half_waveplate_frequency(reference_model, n)


class TestPresets:
    def test_frequency_conversion(self):
        assert omega_to_ghz(ghz_to_omega(16.7)) == pytest.approx(16.7)
        assert ghz_to_omega(1.0) == pytest.approx(2 * math.pi)

    def test_crystal_half_wave_frequency(self):
        omega = half_waveplate_frequency(crystal_model(), 0)
        assert abs(omega_to_ghz(omega) - CRYSTAL_HALF_WAVE_GHZ) <= 1e-6

    def test_crystal_slope_ratio(self):
        m = crystal_model()
        assert m.slope_plus == pytest.approx(10 * m.slope_minus)

    def test_lookup(self):
        assert get_preset("reference") is PRESETS["reference"]
        assert get_preset("paper") is PRESETS["paper"]
        assert get_preset("crystal") is PRESETS["paper"]
        assert PRESET_NAMES == ["paper", "reference", "crystal"]
        with pytest.raises(ValueError):
            get_preset("quartz")


@pytest.mark.parametrize("fn", [ghz_to_omega, omega_to_ghz, phases, phi_minus, build_u0, build_u, transfer])
def test_public_helpers_are_documented(fn):
    assert fn.__doc__ and fn.__doc__.strip()
