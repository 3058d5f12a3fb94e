"""Closed-form pointers for the z-in / z-out waveplate.

Both forms hold only for psi_in = psi_f = |1>; their imaginary parts vanish
on the lines where they are evaluated and are reported as exactly zero.
"""

import math
from typing import Optional, Union

from app.core.config import settings
from app.core.exceptions import ContractError, SingularityError
from app.models.domain import DispersionModel, Scenario
from app.waveplate.model import half_waveplate_frequency, phi_minus

ModelLike = Union[DispersionModel, Scenario]


def _default_model(source: ModelLike) -> DispersionModel:
    if isinstance(source, Scenario):
        if not source.is_default():
            raise ContractError("closed-form pointers require psi_in = psi_f = |1>")
        return source.model
    return source


def group_delay_analytic(source: ModelLike, beta0: float, eps: Optional[float] = None) -> float:
    """Group delay [ns] at the first half-wave frequency and plate angle beta0.

    sec(2 beta0) [cos^2(beta0) phi_tm' - sin^2(beta0) phi_te'], which for a
    linear model equals slope_plus - slope_minus * sec(2 beta0). Negative
    below beta = pi/4 (fast light), large and positive just above it.
    """
    model = _default_model(source)
    eps = settings.EPS_SEC if eps is None else eps
    # fails with ModelError for equal slopes
    half_waveplate_frequency(model, 0)
    cos2 = math.cos(2.0 * beta0)
    if abs(cos2) <= eps:
        raise SingularityError(f"sec(2*beta0) diverges at beta0={beta0!r}", magnitude=abs(cos2))
    c = math.cos(beta0)
    s = math.sin(beta0)
    return (c * c * model.slope_tm - s * s * model.slope_te) / cos2


def helicity_pointer_analytic(source: ModelLike, omega0: float, eps: Optional[float] = None) -> float:
    """beta-pointer 2 tan(phi_minus(omega0)) along beta = pi/4."""
    model = _default_model(source)
    eps = settings.EPS_SING if eps is None else eps
    phi = phi_minus(model, omega0)
    if abs(math.cos(phi)) <= eps:
        raise SingularityError(
            f"tan(phi_minus) diverges at omega0={omega0!r} (phi_minus={phi!r})",
            magnitude=abs(math.cos(phi)),
        )
    return 2.0 * math.tan(phi)
