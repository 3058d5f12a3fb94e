"""Weak values by the operator route and by response-function gradients.

Operator route:   [A_j]_W = <psi_f| A_j |psi~> / <psi_f|psi~>,
                  A_j = -i (d_j U_S) U_S^dagger, psi~ = U_S psi_in.
Gradient route:   [A_j]_W = d_j arg T - i d_j ln|T| = -i d_j ln T.
Both agree wherever T(rho, eta) = <psi_f| U(rho, eta) |psi_in> is non-zero.
"""

import math
from functools import partial
from typing import Optional, Protocol, Sequence, Tuple, Union

import numpy as np
import structlog

from app.core.config import settings
from app.core.exceptions import ContractError, SingularityError, StepTooCoarseError
from app.models.domain import (
    Axis,
    DiffSettings,
    DispersionModel,
    ParamPoint,
    PointerValue,
    Scenario,
)
from app.polarization.algebra import (
    Operator2,
    Vec2C,
    adjoint,
    apply,
    inner,
    unitarity_deviation,
)
from app.waveplate.model import build_u, transfer
from app.weak.differentiation import (
    default_diff_settings,
    derivative,
    log_derivative,
    stencil_weights,
)

logger = structlog.get_logger()

DIRECTION_TOL = 1e-6


class ResponseFn(Protocol):
    """Vectorized complex response T(rho, eta)."""

    def __call__(self, rho, eta): ...


class UnitaryFamily(Protocol):
    """Unitary-valued map (rho, eta) -> 2x2 operator."""

    def __call__(self, rho, eta) -> Operator2: ...


def waveplate_family(model: DispersionModel) -> UnitaryFamily:
    """(rho, eta) -> U(omega, beta) for ``model``."""
    return partial(build_u, model)


def waveplate_response(scenario: Scenario) -> ResponseFn:
    """(rho, eta) -> T(omega, beta) for ``scenario``."""
    return partial(transfer, scenario)


def _coerce_axis(axis: Union[Axis, str]) -> Axis:
    try:
        return Axis(axis)
    except ValueError:
        raise ValueError(f"axis must be 'rho' or 'eta', got {axis!r}") from None


def _eval_along(fn, p: ParamPoint, axis: Axis, x: float):
    if axis == Axis.RHO:
        return fn(x, p.eta)
    return fn(p.rho, x)


def generator_operator(
    fam: UnitaryFamily,
    p: ParamPoint,
    axis: Union[Axis, str],
    diff: Optional[DiffSettings] = None,
) -> Operator2:
    """A_j(p) = -i [d_j U] U^dagger by finite differences."""
    axis = _coerce_axis(axis)
    diff = diff or default_diff_settings()
    u_s = np.asarray(fam(p.rho, p.eta), dtype=complex)
    deviation = unitarity_deviation(u_s)
    if deviation > settings.UNITARY_TOL:
        raise ContractError(f"family is not unitary at {p.as_tuple()} (deviation {deviation:.3e})")
    x0 = p.rho if axis == Axis.RHO else p.eta
    h = diff.step_for(axis, x0)
    du = derivative(lambda x: np.asarray(_eval_along(fam, p, axis, x), dtype=complex), x0, h, diff.stencil)
    return -1j * du @ adjoint(u_s)


def generator_spectrum(op: Operator2) -> np.ndarray:
    """Eigenvalues of the Hermitian part of a weak operator, ascending."""
    return np.linalg.eigvalsh(0.5 * (op + adjoint(op)))


def weak_value_operator_form(
    fam: UnitaryFamily,
    psi_in: Vec2C,
    psi_f: Vec2C,
    p: ParamPoint,
    axis: Union[Axis, str],
    diff: Optional[DiffSettings] = None,
    eps: Optional[float] = None,
) -> complex:
    """AAV weak value of A_j between U_S|psi_in> and <psi_f|."""
    eps = settings.EPS_SING if eps is None else eps
    u_s = np.asarray(fam(p.rho, p.eta), dtype=complex)
    psi_pre = apply(u_s, psi_in)
    denom = inner(psi_f, psi_pre)
    if abs(denom) <= eps:
        raise SingularityError(
            f"<psi_f|psi~_in> = {abs(denom):.3e} at {p.as_tuple()}: weak value is unbounded",
            magnitude=abs(denom),
        )
    a_j = generator_operator(fam, p, axis, diff)
    return inner(psi_f, apply(a_j, psi_pre)) / denom


def _pointer_samples(T: ResponseFn, p: ParamPoint, axis: Axis, diff: DiffSettings, eps: float):
    offsets, _ = stencil_weights(diff.stencil)
    x0 = p.rho if axis == Axis.RHO else p.eta
    h = diff.step_for(axis, x0)
    xs = np.sort(np.concatenate([[x0], x0 + offsets * h]))
    if axis == Axis.RHO:
        samples = np.asarray(T(xs, np.full_like(xs, p.eta)), dtype=complex)
    else:
        samples = np.asarray(T(np.full_like(xs, p.rho), xs), dtype=complex)
    samples = np.broadcast_to(samples, xs.shape)
    smallest = float(np.min(np.abs(samples)))
    if smallest <= eps:
        raise SingularityError(
            f"|T| = {smallest:.3e} on the stencil around {p.as_tuple()}: pointer is unbounded",
            magnitude=smallest,
        )
    return samples, h


def pointer_from_response(
    T: ResponseFn,
    p: ParamPoint,
    axis: Union[Axis, str],
    diff: Optional[DiffSettings] = None,
    eps: Optional[float] = None,
) -> PointerValue:
    """Pointer -i d_j ln T: re = d_j arg T, im = -d_j ln|T|."""
    axis = _coerce_axis(axis)
    diff = diff or default_diff_settings()
    eps = settings.EPS_SING if eps is None else eps
    samples, h = _pointer_samples(T, p, axis, diff, eps)
    d_log = log_derivative(samples, h, diff.stencil)
    return PointerValue(re=d_log.imag, im=-d_log.real, axis=axis)


def directional_pointer(
    T: ResponseFn,
    p: ParamPoint,
    direction: Sequence[float],
    diff: Optional[DiffSettings] = None,
    eps: Optional[float] = None,
) -> PointerValue:
    """Pointer for the superposition d_rho A_rho + d_eta A_eta.

    Computed from the two axis pointers and cross-checked against a
    derivative taken directly along the direction.
    """
    d_rho, d_eta = (float(c) for c in direction)
    norm = math.hypot(d_rho, d_eta)
    if abs(norm - 1.0) > 1e-12:
        raise ValueError(f"direction must be a unit vector, got norm {norm!r}")
    diff = diff or default_diff_settings()
    eps = settings.EPS_SING if eps is None else eps

    along_rho = pointer_from_response(T, p, Axis.RHO, diff, eps).value
    along_eta = pointer_from_response(T, p, Axis.ETA, diff, eps).value
    combined = d_rho * along_rho + d_eta * along_eta

    direct = _direct_pointer(T, p, (d_rho, d_eta), diff, eps)
    if abs(direct - combined) > DIRECTION_TOL * max(1.0, abs(combined)):
        raise StepTooCoarseError(
            f"directional pointer routes disagree ({combined!r} vs {direct!r}); reduce the step"
        )
    return PointerValue(re=combined.real, im=combined.imag, direction=(d_rho, d_eta))


def _direct_pointer(
    T: ResponseFn, p: ParamPoint, direction: Tuple[float, float], diff: DiffSettings, eps: float
) -> complex:
    offsets, _ = stencil_weights(diff.stencil)
    h = min(diff.step_for(Axis.RHO, p.rho), diff.step_for(Axis.ETA, p.eta))
    s = np.sort(np.concatenate([[0.0], offsets * h]))
    samples = np.asarray(T(p.rho + s * direction[0], p.eta + s * direction[1]), dtype=complex)
    smallest = float(np.min(np.abs(samples)))
    if smallest <= eps:
        raise SingularityError(
            f"|T| = {smallest:.3e} on the directional stencil at {p.as_tuple()}",
            magnitude=smallest,
        )
    return -1j * log_derivative(samples, h, diff.stencil)


def first_order_transfer(
    fam: UnitaryFamily,
    psi_in: Vec2C,
    psi_f: Vec2C,
    p0: ParamPoint,
    delta: Tuple[float, float],
    diff: Optional[DiffSettings] = None,
    eps: Optional[float] = None,
) -> complex:
    """<psi_f|psi~_in> (1 + i [A_rho]_W d_rho + i [A_eta]_W d_eta)."""
    d_rho, d_eta = delta
    u_s = np.asarray(fam(p0.rho, p0.eta), dtype=complex)
    t0 = inner(psi_f, apply(u_s, psi_in))
    w_rho = weak_value_operator_form(fam, psi_in, psi_f, p0, Axis.RHO, diff, eps)
    w_eta = weak_value_operator_form(fam, psi_in, psi_f, p0, Axis.ETA, diff, eps)
    return t0 * (1.0 + 1j * w_rho * d_rho + 1j * w_eta * d_eta)
