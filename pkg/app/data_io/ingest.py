"""Pointer curves from tabulated transmission data.

Measured or simulated sweeps arrive as samples of T(omega) at fixed beta.
The frequency pointer is recovered from the unwrapped phase and log
magnitude by finite differences on the table's own grid.
"""

from typing import Optional

import numpy as np
import structlog
from scipy.interpolate import CubicSpline

from app.core.config import settings
from app.core.exceptions import DataError
from app.models.domain import PointerCurve, SweepTable

logger = structlog.get_logger()

MIN_USABLE_ROWS = 3


def _runs(mask: np.ndarray):
    """(start, stop) slices of consecutive True entries."""
    edges = np.diff(np.concatenate([[0], mask.astype(int), [0]]))
    starts = np.flatnonzero(edges == 1)
    stops = np.flatnonzero(edges == -1)
    return list(zip(starts, stops))


def ingest_pointer_curve(table: SweepTable, eps: Optional[float] = None) -> PointerCurve:
    """Frequency pointer along a tabulated sweep.

    Rows with |T| < eps are gaps. Each contiguous run of usable rows is
    unwrapped and differentiated on its own, so no derivative straddles a
    gap; a run of a single row has no neighbours and becomes a gap too.
    """
    eps = settings.EPS_SING if eps is None else eps
    magnitude = np.abs(table.t)
    usable = magnitude >= eps
    if int(usable.sum()) < MIN_USABLE_ROWS:
        raise DataError(
            f"only {int(usable.sum())} rows with |T| >= {eps:g}; need at least {MIN_USABLE_ROWS}"
        )

    re = np.full(table.omega.shape, np.nan)
    im = np.full(table.omega.shape, np.nan)
    gap = ~usable
    for start, stop in _runs(usable):
        if stop - start < 2:
            gap[start:stop] = True
            continue
        omega = table.omega[start:stop]
        phase = np.unwrap(np.angle(table.t[start:stop]))
        log_mag = np.log(magnitude[start:stop])
        edge_order = 2 if stop - start >= 3 else 1
        re[start:stop] = np.gradient(phase, omega, edge_order=edge_order)
        im[start:stop] = -np.gradient(log_mag, omega, edge_order=edge_order)

    if gap.any():
        logger.info("Sweep rows excluded as gaps", beta=table.beta, gaps=int(gap.sum()))
    return PointerCurve(axis="omega", fixed=table.beta, coord=table.omega.copy(), re=re, im=im, gap=gap)


class TabulatedResponse:
    """Callable T(omega, beta) interpolating a single sweep.

    Real and imaginary parts are cubic splines in omega; the table was taken
    at one beta so the response ignores the beta argument.
    """

    def __init__(self, table: SweepTable):
        self.table = table
        self._re = CubicSpline(table.omega, table.t.real)
        self._im = CubicSpline(table.omega, table.t.imag)

    @property
    def omega_range(self):
        return float(self.table.omega[0]), float(self.table.omega[-1])

    def __call__(self, omega, beta=None):
        lo, hi = self.omega_range
        omega = np.asarray(omega, dtype=float)
        if np.any((omega < lo) | (omega > hi)):
            raise DataError(f"omega outside the tabulated range [{lo!r}, {hi!r}]")
        value = self._re(omega) + 1j * self._im(omega)
        return complex(value) if value.ndim == 0 else value
