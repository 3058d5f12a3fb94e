"""Rotatable birefringent waveplate: U(omega, beta) and T(omega, beta).

omega is angular frequency in rad/ns and beta the plate angle in rad. All
evaluators broadcast over numpy arrays of omega and beta.
"""

import math
from typing import Tuple, Union

import numpy as np
import numpy.typing as npt

from app.core.exceptions import ContractError, DomainError, ModelError
from app.models.domain import DispersionModel, Scenario
from app.polarization.algebra import Operator2, adjoint, apply, inner, rotation

Real = Union[float, npt.NDArray[np.float64]]
ComplexValue = Union[complex, npt.NDArray[np.complex128]]


def ghz_to_omega(f_ghz: Real) -> Real:
    """omega [rad/ns] = 2 pi f [GHz]."""
    return 2.0 * math.pi * f_ghz


def omega_to_ghz(omega: Real) -> Real:
    """f [GHz] = omega / 2 pi."""
    return omega / (2.0 * math.pi)


def phases(model: DispersionModel, omega: Real) -> Tuple[Real, Real, Real, Real]:
    """Return (phi_te, phi_tm, phi_plus, phi_minus) at omega."""
    phi_te = model.slope_te * omega + model.intercept_te
    phi_tm = model.slope_tm * omega + model.intercept_tm
    return phi_te, phi_tm, 0.5 * (phi_te + phi_tm), 0.5 * (phi_te - phi_tm)


def phi_minus(model: DispersionModel, omega: Real) -> Real:
    """Half the TE-TM phase difference at omega."""
    return model.slope_minus * omega + model.intercept_minus


def build_u0(model: DispersionModel, omega: Real) -> Operator2:
    """Unrotated plate: exp[i phi_te (1+s3)/2 + i phi_tm (1-s3)/2].

    With sigma_3 = diag(-1, +1) this is diag(e^{i phi_tm}, e^{i phi_te}),
    i.e. the fast (TE) axis lies along |2> = x at beta = 0.
    """
    phi_te, phi_tm, _, _ = phases(model, np.asarray(omega, dtype=float))
    out = np.zeros(np.shape(phi_te) + (2, 2), dtype=complex)
    out[..., 0, 0] = np.exp(1j * phi_tm)
    out[..., 1, 1] = np.exp(1j * phi_te)
    return out


def build_u(model: DispersionModel, omega: Real, beta: Real) -> Operator2:
    """U(omega, beta) = R(beta) U(omega, 0) R(-beta)."""
    omega, beta = np.broadcast_arrays(np.asarray(omega, dtype=float), np.asarray(beta, dtype=float))
    rot = rotation(beta)
    return rot @ build_u0(model, omega) @ adjoint(rot)


def transfer(scenario: Scenario, omega: Real, beta: Real) -> ComplexValue:
    """T(omega, beta) = <psi_f| U(omega, beta) |psi_in>."""
    u = build_u(scenario.model, omega, beta)
    return inner(scenario.psi_f, apply(u, scenario.psi_in))


def transfer_closed_form(scenario: Scenario, omega: Real, beta: Real) -> ComplexValue:
    """e^{i phi_+} (cos phi_- - i sin phi_- cos 2 beta), default scenario only."""
    if not scenario.is_default():
        raise ContractError("closed-form transfer requires psi_in = psi_f = |1>")
    _, _, phi_p, phi_m = phases(scenario.model, np.asarray(omega, dtype=float))
    value = np.exp(1j * phi_p) * (np.cos(phi_m) - 1j * np.sin(phi_m) * np.cos(2.0 * np.asarray(beta)))
    if np.ndim(value) == 0:
        return complex(value)
    return value


def half_waveplate_frequency(model: DispersionModel, n: int = 0) -> float:
    """omega solving phi_minus(omega) = (2n + 1) pi / 2."""
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 0:
        raise ValueError(f"order n must be a non-negative integer, got {n!r}")
    if model.is_degenerate():
        raise ModelError("slope_te == slope_tm: phi_minus is constant, no half-waveplate frequency")
    omega = ((2 * n + 1) * math.pi / 2.0 - model.intercept_minus) / model.slope_minus
    if not omega > 0.0:
        raise DomainError(f"order {n} has no positive half-waveplate frequency (omega={omega!r})")
    return omega
