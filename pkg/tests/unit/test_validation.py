"""Tests for the invariant suite."""

import math

import pytest

from app.models.domain import DispersionModel, Scenario
from app.polarization.algebra import KET_X
from app.validation import (
    Status,
    check_group_delay,
    check_helicity_pointer,
    check_lattice,
    check_pauli_algebra,
    describe_model,
    lattice_window,
    run_validation,
)
from app.waveplate.presets import crystal_model


def _statuses(report):
    return {r.name: r.status for r in report.results}


def test_reference_model_passes_every_invariant(scenario):
    report = run_validation(scenario)
    failed = [(r.name, r.detail, r.metrics) for r in report.results if r.status != Status.PASS]
    assert failed == []
    assert report.passed
    assert report.summary() == {"pass": 8, "fail": 0, "skipped": 0}


def test_degenerate_model_skips_lattice_checks():
    scenario = Scenario.default(DispersionModel(slope_te=1.2, slope_tm=1.2))
    statuses = _statuses(run_validation(scenario))
    for name in ("group_delay_closed_form", "helicity_pointer_closed_form", "singularity_lattice", "charge_conservation"):
        assert statuses[name] == Status.SKIPPED
    for name in ("pauli_algebra", "unitarity", "operator_gradient_equivalence", "first_order_expansion"):
        assert statuses[name] == Status.PASS


def test_closed_forms_skipped_for_other_states(reference_model):
    crossed = Scenario(model=reference_model, psi_f=KET_X)
    assert check_group_delay(crossed).status == Status.SKIPPED
    assert check_helicity_pointer(crossed).status == Status.SKIPPED


def test_individual_checks(scenario):
    assert check_pauli_algebra().status == Status.PASS
    result = check_group_delay(scenario)
    assert result.status == Status.PASS
    assert result.metrics["omega_s"] == pytest.approx(math.pi / 2 / 0.2)


def test_lattice_window_covers_four_columns(scenario):
    window = lattice_window(scenario)
    assert window.rho_min == pytest.approx(0.0, abs=1e-12)
    assert window.rho_max == pytest.approx(8 * math.pi / 2 / 0.2)
    assert window.eta_max == pytest.approx(math.pi)


def test_describe_crystal_model():
    info = describe_model(Scenario.default(crystal_model()))
    assert abs(info["f_s_ghz"] - 16.7) <= 1e-6
    assert info["default_scenario"] is True


def test_describe_degenerate_model():
    info = describe_model(Scenario.default(DispersionModel(slope_te=1.0, slope_tm=1.0)))
    assert "omega_s" not in info


def test_negative_birefringence_keeps_lattice_checks():
    scenario = Scenario.default(DispersionModel(slope_te=0.8, slope_tm=1.2))
    window = lattice_window(scenario)
    assert window is not None
    assert window.rho_max == pytest.approx(8 * math.pi / 2 / 0.2)
    statuses = _statuses(run_validation(scenario))
    assert statuses["singularity_lattice"] == Status.PASS
    assert statuses["charge_conservation"] == Status.PASS


def test_lattice_skip_reason_is_explicit(reference_model):
    degenerate = Scenario.default(DispersionModel(slope_te=1.0, slope_tm=1.0))
    assert "slope_te == slope_tm" in check_lattice(degenerate, None, None).detail
    crossed = Scenario(model=reference_model, psi_f=KET_X)
    assert "psi_in = psi_f" in check_lattice(crossed, None, None).detail
