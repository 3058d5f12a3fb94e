"""Invariant suite behind ``python -m app validate``.

Each check returns an InvariantResult; checks that need a half-waveplate
frequency or the z-in / z-out scenario are skipped when the loaded model or
scenario cannot provide them.
"""

import math
from enum import Enum
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np
import structlog
from pydantic import BaseModel, Field

from app.core.config import settings
from app.core.exceptions import DomainError, LoopError, ModelError, WeakValueError
from app.models.domain import (
    Axis,
    DiffSettings,
    GridSpec,
    ModelPerturbation,
    ParamPoint,
    Rectangle,
    Scenario,
    Stencil,
)
from app.polarization.algebra import identity, pauli, unitarity_deviation
from app.singularities.lattice import boundary_winding, predicted_lattice
from app.singularities.scan import ScanResult, scan_singularities
from app.waveplate.model import build_u, half_waveplate_frequency, omega_to_ghz
from app.weak.analytic import group_delay_analytic, helicity_pointer_analytic
from app.weak.engine import (
    first_order_transfer,
    generator_operator,
    generator_spectrum,
    pointer_from_response,
    waveplate_family,
    waveplate_response,
    weak_value_operator_form,
)

logger = structlog.get_logger()

SEED = 20240611
ALGEBRA_TOL = 1e-15
EQUIVALENCE_TOL = 1e-6
GROUP_DELAY_RTOL = 1e-5
ENDPOINT_TOL = 1e-9
HELICITY_TOL = 1e-6
ZERO_POINTER_TOL = 1e-12
ZERO_NUMERIC_TOL = 1e-9
LATTICE_TOL = 1e-6
MIN_ABS_T = 0.05
LATTICE_COLUMNS = 4
FALLBACK_WINDOW = Rectangle(rho_min=0.0, rho_max=63.0, eta_min=0.0, eta_max=math.pi)


class Status(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    SKIPPED = "skipped"


class InvariantResult(BaseModel):
    name: str
    status: Status
    detail: str = ""
    metrics: Dict[str, Any] = Field(default_factory=dict)


class ValidationReport(BaseModel):
    model: Dict[str, Any] = Field(default_factory=dict)
    results: List[InvariantResult] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.status != Status.FAIL for r in self.results)

    def summary(self) -> Dict[str, int]:
        counts = {s.value: 0 for s in Status}
        for r in self.results:
            counts[r.status.value] += 1
        return counts


def _result(name: str, ok: bool, detail: str = "", **metrics) -> InvariantResult:
    return InvariantResult(name=name, status=Status.PASS if ok else Status.FAIL, detail=detail, metrics=metrics)


def _skipped(name: str, reason: str) -> InvariantResult:
    return InvariantResult(name=name, status=Status.SKIPPED, detail=reason)


def lattice_window(scenario: Scenario) -> Optional[Rectangle]:
    """Window holding the first four positive half-wave columns at beta = pi/4 and 3 pi/4."""
    model = scenario.model
    if model.is_degenerate():
        return None
    spacing = math.pi / abs(model.slope_minus)
    probe = Rectangle(rho_min=0.0, rho_max=(LATTICE_COLUMNS + 1) * spacing, eta_min=0.0, eta_max=math.pi)
    omegas = sorted({p.rho for p in predicted_lattice(model, probe)})[:LATTICE_COLUMNS]
    if len(omegas) < LATTICE_COLUMNS:
        return None
    half_spacing = 0.5 * spacing
    return Rectangle(
        rho_min=omegas[0] - half_spacing,
        rho_max=omegas[-1] + half_spacing,
        eta_min=0.0,
        eta_max=math.pi,
    )


def lattice_skip_reason(scenario: Scenario) -> str:
    """Why the lattice checks cannot run for ``scenario``."""
    if not scenario.is_default():
        return "lattice prediction needs psi_in = psi_f = |1>"
    if scenario.model.is_degenerate():
        return "slope_te == slope_tm: no half-waveplate lattice"
    return "lattice scan did not complete"


def describe_model(scenario: Scenario) -> Dict[str, Any]:
    """Model parameters plus the first half-wave frequency when it exists."""
    info: Dict[str, Any] = scenario.model.model_dump()
    info["default_scenario"] = scenario.is_default()
    try:
        omega_s = half_waveplate_frequency(scenario.model, 0)
    except (ModelError, DomainError):
        return info
    info["omega_s"] = omega_s
    info["f_s_ghz"] = omega_to_ghz(omega_s)
    return info


def check_pauli_algebra() -> InvariantResult:
    s1, s2, s3 = (pauli(k) for k in (1, 2, 3))
    eye = identity()
    worst = max(
        np.max(np.abs(s @ s - eye)) for s in (s1, s2, s3)
    )
    for a, b, c in ((s1, s2, s3), (s2, s3, s1), (s3, s1, s2)):
        worst = max(worst, np.max(np.abs(a @ b - 1j * c)), np.max(np.abs(a @ b + b @ a)))
    return _result("pauli_algebra", worst <= ALGEBRA_TOL, max_deviation=float(worst))


def check_unitarity(scenario: Scenario, window: Rectangle, samples: int = 10_000) -> InvariantResult:
    rng = np.random.default_rng(SEED)
    omega = rng.uniform(window.rho_min, window.rho_max, samples)
    beta = rng.uniform(window.eta_min, window.eta_max, samples)
    u = build_u(scenario.model, omega, beta)
    worst = unitarity_deviation(u)
    return _result("unitarity", worst <= settings.UNITARY_TOL, samples=samples, max_deviation=worst)


def _random_points(T, window: Rectangle, count: int, rng, min_abs: float = MIN_ABS_T) -> List[ParamPoint]:
    points: List[ParamPoint] = []
    for _ in range(100 * count):
        rho = rng.uniform(window.rho_min, window.rho_max)
        eta = rng.uniform(window.eta_min, window.eta_max)
        if abs(T(rho, eta)) > min_abs:
            points.append(ParamPoint(rho=rho, eta=eta))
            if len(points) == count:
                break
    return points


def check_operator_gradient_equivalence(scenario: Scenario, window: Rectangle, count: int = 100) -> InvariantResult:
    name = "operator_gradient_equivalence"
    rng = np.random.default_rng(SEED + 1)
    T = waveplate_response(scenario)
    fam = waveplate_family(scenario.model)
    diff = DiffSettings(step_rho=1e-5, step_eta=1e-5, stencil=Stencil.CENTRAL_4)
    points = _random_points(T, window, count, rng)
    if not points:
        return _skipped(name, f"no points with |T| > {MIN_ABS_T} in the window")
    worst = 0.0
    for p in points:
        for axis in (Axis.RHO, Axis.ETA):
            weak = weak_value_operator_form(fam, scenario.psi_in, scenario.psi_f, p, axis, diff)
            pointer = pointer_from_response(T, p, axis, diff).value
            worst = max(worst, abs(weak - pointer))
    return _result(name, worst <= EQUIVALENCE_TOL, points=len(points), max_difference=worst)


def check_first_order_expansion(scenario: Scenario, window: Rectangle, count: int = 10) -> InvariantResult:
    """Remainder of the linearized transfer shrinks ~4x when the offset halves."""
    name = "first_order_expansion"
    rng = np.random.default_rng(SEED + 2)
    T = waveplate_response(scenario)
    fam = waveplate_family(scenario.model)
    points = _random_points(T, window, count, rng, min_abs=0.3)
    if not points:
        return _skipped(name, "no well-conditioned base points in the window")
    ratios = []
    for p in points:
        theta = rng.uniform(0.0, 2.0 * math.pi)
        delta = 1e-3 * np.array([math.cos(theta), math.sin(theta)])
        errors = []
        for scale in (1.0, 0.5):
            d = delta * scale
            exact = T(p.rho + d[0], p.eta + d[1])
            linear = first_order_transfer(fam, scenario.psi_in, scenario.psi_f, p, (d[0], d[1]))
            errors.append(abs(exact - linear))
        ratios.append(errors[0] / errors[1])
    ok = all(3.5 <= r <= 4.5 for r in ratios)
    return _result(name, ok, ratios=[float(r) for r in ratios])


def check_group_delay(scenario: Scenario) -> InvariantResult:
    name = "group_delay_closed_form"
    if not scenario.is_default():
        return _skipped(name, "closed form needs psi_in = psi_f = |1>")
    try:
        omega_s = half_waveplate_frequency(scenario.model, 0)
    except (ModelError, DomainError) as e:
        return _skipped(name, str(e))
    T = waveplate_response(scenario)
    worst = 0.0
    for beta0 in np.linspace(0.0, math.pi / 2.0, 81):
        if abs(beta0 - math.pi / 4.0) <= 0.02:
            continue
        numeric = pointer_from_response(T, ParamPoint(rho=omega_s, eta=beta0), Axis.RHO).re
        expected = group_delay_analytic(scenario, beta0)
        worst = max(worst, abs(numeric - expected) / max(abs(expected), 1e-12))
    m = scenario.model
    endpoint = max(
        abs(group_delay_analytic(scenario, 0.0) - m.slope_tm),
        abs(group_delay_analytic(scenario, math.pi / 2.0) - m.slope_te),
    )
    ok = worst <= GROUP_DELAY_RTOL and endpoint <= ENDPOINT_TOL
    return _result(name, ok, max_relative_error=worst, endpoint_error=endpoint, omega_s=omega_s)


def check_helicity_pointer(scenario: Scenario) -> InvariantResult:
    name = "helicity_pointer_closed_form"
    if not scenario.is_default():
        return _skipped(name, "closed form needs psi_in = psi_f = |1>")
    model = scenario.model
    if model.is_degenerate():
        return _skipped(name, "slope_te == slope_tm: phi_minus does not vary with omega")
    T = waveplate_response(scenario)
    beta = math.pi / 4.0
    worst = 0.0
    for phi in np.linspace(0.0, math.pi / 2.0 - 0.05, 60):
        omega = (phi - model.intercept_minus) / model.slope_minus
        numeric = pointer_from_response(T, ParamPoint(rho=omega, eta=beta), Axis.ETA).re
        worst = max(worst, abs(numeric - helicity_pointer_analytic(scenario, omega)))

    # at phi_minus in {0, pi} the closed form vanishes exactly; differencing
    # leaves rounding noise of order eps / h in the numeric pointer
    zero_error = 0.0
    zero_numeric = 0.0
    for phi in (0.0, math.pi):
        omega = (phi - model.intercept_minus) / model.slope_minus
        zero_error = max(zero_error, abs(helicity_pointer_analytic(scenario, omega)))
        p = ParamPoint(rho=omega, eta=beta)
        zero_numeric = max(zero_numeric, abs(pointer_from_response(T, p, Axis.ETA).re))

    # weak value escapes the spectrum of A_beta between pi/3 and pi/2
    fam = waveplate_family(model)
    bound = 0.0
    smallest = math.inf
    for phi in np.linspace(math.pi / 3.0 + 1e-3, math.pi / 2.0 - 1e-3, 40):
        omega = (phi - model.intercept_minus) / model.slope_minus
        p = ParamPoint(rho=omega, eta=beta)
        bound = max(bound, float(np.max(np.abs(generator_spectrum(generator_operator(fam, p, Axis.ETA))))))
        smallest = min(smallest, abs(pointer_from_response(T, p, Axis.ETA).re))
    ok = (
        worst <= HELICITY_TOL
        and zero_error <= ZERO_POINTER_TOL
        and zero_numeric <= ZERO_NUMERIC_TOL
        and smallest > 2.0
        and bound <= 2.0 + 1e-9
    )
    return _result(
        name,
        ok,
        max_error=worst,
        zero_pointer_error=zero_error,
        zero_pointer_numeric=zero_numeric,
        min_pointer_beyond_pi_3=smallest,
        spectral_radius=bound,
    )


def check_lattice(scenario: Scenario, window: Optional[Rectangle], scan: Optional[ScanResult]) -> InvariantResult:
    name = "singularity_lattice"
    if window is None or scan is None:
        return _skipped(name, lattice_skip_reason(scenario))
    expected = predicted_lattice(scenario.model, window)
    found = scan.records
    matched = 0
    for p in expected:
        if any(math.hypot(r.rho - p.rho, r.eta - p.eta) <= LATTICE_TOL * max(1.0, abs(p.rho)) for r in found):
            matched += 1
    report = scan.report
    ok = (
        len(found) == len(expected) == matched
        and all(abs(r.charge) == 1 and r.residual <= settings.NEWTON_TOL for r in found)
        and report.alternation_ok
        and report.net_charge == 0
    )
    return _result(
        name,
        ok,
        expected=len(expected),
        found=len(found),
        matched=matched,
        net_charge=report.net_charge,
        alternation_ok=report.alternation_ok,
    )


def _random_rectangle(window: Rectangle, rng) -> Rectangle:
    w = window.rho_max - window.rho_min
    h = window.eta_max - window.eta_min
    r0, r1 = sorted(rng.uniform(window.rho_min, window.rho_max, 2))
    e0, e1 = sorted(rng.uniform(window.eta_min, window.eta_max, 2))
    return Rectangle(
        rho_min=r0, rho_max=max(r1, r0 + 0.05 * w), eta_min=e0, eta_max=max(e1, e0 + 0.05 * h)
    )


def check_charge_conservation(
    scenario: Scenario, window: Optional[Rectangle], scan: Optional[ScanResult], count: int = 20
) -> InvariantResult:
    """Boundary winding equals enclosed charge, before and after small model changes."""
    name = "charge_conservation"
    if window is None or scan is None:
        return _skipped(name, lattice_skip_reason(scenario))
    rng = np.random.default_rng(SEED + 3)
    T = waveplate_response(scenario)
    mismatches = 0
    checked = 0
    for _ in range(20 * count):
        if checked == count:
            break
        loop = _random_rectangle(window, rng)
        if loop.rho_max > window.rho_max or loop.eta_max > window.eta_max:
            continue
        try:
            winding = boundary_winding(T, loop)
        except LoopError:
            continue
        enclosed = sum(r.charge for r in scan.records if loop.contains(r.rho, r.eta))
        checked += 1
        mismatches += int(winding != enclosed)

    # perturbations scaled to the model keep every zero inside its column
    model = scenario.model
    loop = Rectangle(
        rho_min=window.rho_min, rho_max=window.rho_max, eta_min=0.1, eta_max=math.pi / 2.0 - 0.1
    )
    before = boundary_winding(T, loop)
    count_before = len(predicted_lattice(model, loop))
    changed = 0
    tried = 0
    for _ in range(count):
        scale = 0.05 * abs(model.slope_minus)
        deltas = rng.uniform(-scale, scale, 4)
        perturbation = ModelPerturbation(
            d_slope_te=deltas[0], d_intercept_te=deltas[1], d_slope_tm=deltas[2], d_intercept_tm=deltas[3]
        )
        perturbed = Scenario(
            model=model.perturbed(**perturbation.model_dump()), psi_in=scenario.psi_in, psi_f=scenario.psi_f
        )
        if perturbed.model.is_degenerate() or len(predicted_lattice(perturbed.model, loop)) != count_before:
            continue
        try:
            after = boundary_winding(waveplate_response(perturbed), loop)
        except LoopError:
            continue
        tried += 1
        changed += int(after != before)
    ok = checked == count and mismatches == 0 and tried > 0 and changed == 0
    return _result(
        name,
        ok,
        rectangles=checked,
        mismatches=mismatches,
        perturbations=tried,
        perturbation_changes=changed,
        boundary_winding=before,
    )


def _scan(scenario: Scenario, window: Optional[Rectangle], n_rho: int, n_eta: int) -> Optional[ScanResult]:
    if window is None:
        return None
    grid = GridSpec(
        rho_min=window.rho_min,
        rho_max=window.rho_max,
        eta_min=window.eta_min,
        eta_max=window.eta_max,
        n_rho=n_rho,
        n_eta=n_eta,
    )
    return scan_singularities(waveplate_response(scenario), grid)


def run_validation(scenario: Scenario, n_rho: int = 300, n_eta: int = 150) -> ValidationReport:
    """Run every invariant check against ``scenario``; failures never raise."""
    window = lattice_window(scenario) if scenario.is_default() else None
    sample_window = window or FALLBACK_WINDOW
    report = ValidationReport(model=describe_model(scenario))

    scan: Optional[ScanResult] = None
    try:
        scan = _scan(scenario, window, n_rho, n_eta)
    except WeakValueError as e:
        logger.error("Validation scan failed", error=str(e))

    checks: List[Tuple[str, Callable[[], InvariantResult]]] = [
        ("pauli_algebra", check_pauli_algebra),
        ("unitarity", lambda: check_unitarity(scenario, sample_window)),
        ("operator_gradient_equivalence", lambda: check_operator_gradient_equivalence(scenario, sample_window)),
        ("first_order_expansion", lambda: check_first_order_expansion(scenario, sample_window)),
        ("group_delay_closed_form", lambda: check_group_delay(scenario)),
        ("helicity_pointer_closed_form", lambda: check_helicity_pointer(scenario)),
        ("singularity_lattice", lambda: check_lattice(scenario, window, scan)),
        ("charge_conservation", lambda: check_charge_conservation(scenario, window, scan)),
    ]
    for name, check in checks:
        try:
            result = check()
        except WeakValueError as e:
            result = InvariantResult(name=name, status=Status.FAIL, detail=str(e))
        report.results.append(result)
        logger.info("Invariant checked", invariant=result.name, status=result.status.value)
    logger.info("Validation complete", passed=report.passed, **report.summary())
    return report
