"""Newton refinement of zeros of a complex response."""

import math
from typing import Optional

import numpy as np
import structlog

from app.core.config import settings
from app.core.exceptions import ConvergenceError, DegenerateZeroError
from app.models.domain import ParamPoint, SingularityRecord
from app.singularities.grid import loop_winding

logger = structlog.get_logger()

JACOBIAN_STEP = 1e-6
CHARGE_RADIUS_FLOOR = 1e-5
CHARGE_SAMPLES = 64
CONDITION_LIMIT = 1e12


def _evaluate(T, rho: float, eta: float) -> complex:
    return complex(np.asarray(T(rho, eta), dtype=complex))


def jacobian(T, rho: float, eta: float) -> np.ndarray:
    """d(Re T, Im T)/d(rho, eta) by central differences."""
    h_rho = JACOBIAN_STEP * max(1.0, abs(rho))
    h_eta = JACOBIAN_STEP * max(1.0, abs(eta))
    d_rho = (_evaluate(T, rho + h_rho, eta) - _evaluate(T, rho - h_rho, eta)) / (2.0 * h_rho)
    d_eta = (_evaluate(T, rho, eta + h_eta) - _evaluate(T, rho, eta - h_eta)) / (2.0 * h_eta)
    return np.array([[d_rho.real, d_eta.real], [d_rho.imag, d_eta.imag]])


def charge_at(T, rho: float, eta: float, radius: float, samples: int = CHARGE_SAMPLES) -> int:
    """Winding of T around a counterclockwise circle centred on (rho, eta)."""
    theta = 2.0 * math.pi * np.arange(samples) / samples
    values = np.asarray(T(rho + radius * np.cos(theta), eta + radius * np.sin(theta)), dtype=complex)
    winding, _ = loop_winding(values)
    return winding


def refine_zero(
    T,
    seed: ParamPoint,
    tol: Optional[float] = None,
    max_iter: Optional[int] = None,
    search_radius: Optional[float] = None,
) -> SingularityRecord:
    """2-D Newton iteration on (rho, eta) -> (Re T, Im T) starting at seed.

    Iterates may not leave the disc of ``search_radius`` around the seed.
    """
    tol = settings.NEWTON_TOL if tol is None else tol
    max_iter = settings.NEWTON_MAX_ITER if max_iter is None else max_iter
    search_radius = settings.NEWTON_SEARCH_RADIUS if search_radius is None else search_radius

    x = np.array(seed.as_tuple(), dtype=float)
    last_step = 0.0
    for iteration in range(max_iter + 1):
        value = _evaluate(T, x[0], x[1])
        if abs(value) <= tol:
            radius = max(2.0 * last_step, CHARGE_RADIUS_FLOOR * max(1.0, abs(x[0]), abs(x[1])))
            charge = charge_at(T, x[0], x[1], radius)
            if charge == 0:
                raise DegenerateZeroError(f"zero at ({x[0]!r}, {x[1]!r}) carries no net charge")
            logger.debug("Zero refined", rho=x[0], eta=x[1], iterations=iteration, charge=charge)
            return SingularityRecord(
                rho=float(x[0]), eta=float(x[1]), charge=charge, residual=abs(value), iterations=iteration
            )
        if iteration == max_iter:
            break
        jac = jacobian(T, x[0], x[1])
        if not np.all(np.isfinite(jac)) or np.linalg.cond(jac) > CONDITION_LIMIT:
            raise DegenerateZeroError(f"singular Jacobian at ({x[0]!r}, {x[1]!r})")
        step = np.linalg.solve(jac, -np.array([value.real, value.imag]))
        x = x + step
        last_step = float(np.hypot(*step))
        if not np.all(np.isfinite(x)) or math.hypot(*(x - seed.as_tuple())) > search_radius:
            raise ConvergenceError(
                f"Newton left the search disc (radius {search_radius}) around seed {seed.as_tuple()}"
            )
    raise ConvergenceError(f"no convergence from seed {seed.as_tuple()} after {max_iter} iterations")
