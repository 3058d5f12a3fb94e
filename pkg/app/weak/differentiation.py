"""Central finite-difference stencils.

Phase derivatives are taken on ln T built from principal-value steps between
consecutive stencil points, so no unwrapping state is carried between calls.
"""

import math
from typing import Callable, Tuple

import numpy as np

from app.core.config import settings
from app.core.exceptions import StepTooCoarseError
from app.models.domain import DiffSettings, Stencil

# offsets in units of h, with matching first-derivative weights
STENCILS = {
    Stencil.CENTRAL_2: (np.array([-1.0, 1.0]), np.array([-0.5, 0.5])),
    Stencil.CENTRAL_4: (
        np.array([-2.0, -1.0, 1.0, 2.0]),
        np.array([1.0, -8.0, 8.0, -1.0]) / 12.0,
    ),
}

MAX_PHASE_STEP = math.pi / 2


def default_diff_settings() -> DiffSettings:
    return DiffSettings(
        step_rho=settings.DIFF_STEP,
        step_eta=settings.DIFF_STEP,
        stencil=Stencil(settings.DIFF_STENCIL),
    )


def stencil_weights(stencil: Stencil) -> Tuple[np.ndarray, np.ndarray]:
    offsets, weights = STENCILS[Stencil(stencil)]
    return offsets.copy(), weights.copy()


def derivative(f: Callable[[float], np.ndarray], x: float, h: float, stencil: Stencil) -> np.ndarray:
    """Finite-difference derivative of a scalar- or array-valued f at x."""
    offsets, weights = STENCILS[Stencil(stencil)]
    total = sum(w * np.asarray(f(x + k * h)) for k, w in zip(offsets, weights))
    return total / h


def log_derivative(samples: np.ndarray, h: float, stencil: Stencil) -> complex:
    """d(ln T)/dx from samples at the stencil offsets *and* the centre.

    ``samples`` is ordered by offset with the centre value inserted, e.g.
    [T(-2h), T(-h), T(0), T(h), T(2h)] for central-4. Raises
    StepTooCoarseError when the phase moves by more than pi/2 between
    neighbouring samples.
    """
    offsets, weights = STENCILS[Stencil(stencil)]
    samples = np.asarray(samples, dtype=complex)
    steps = np.log(samples[1:] / samples[:-1])
    worst = float(np.max(np.abs(steps.imag)))
    if worst > MAX_PHASE_STEP:
        raise StepTooCoarseError(
            f"phase step {worst:.3f} rad exceeds pi/2 between stencil points; reduce the step"
        )
    # ln T relative to the first sample, then re-referenced to the centre
    rel = np.concatenate([[0.0], np.cumsum(steps)])
    centre = len(offsets) // 2
    rel = rel - rel[centre]
    rel = np.delete(rel, centre)
    return complex(np.dot(weights, rel) / h)
