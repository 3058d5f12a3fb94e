"""Phase grids and plaquette winding numbers."""

import math
from typing import List, Optional, Tuple

import numpy as np
import structlog
from pydantic import BaseModel, Field

from app.core.config import settings
from app.models.domain import GridSpec, PhaseGrid

logger = structlog.get_logger()

TWO_PI = 2.0 * math.pi


def wrap_phase(d):
    """Map phase differences to the principal interval (-pi, pi]."""
    return d - TWO_PI * np.ceil((d - math.pi) / TWO_PI)


def phase_grid(T, g: GridSpec) -> PhaseGrid:
    """Sample arg T and |T| on every node of g (arrays indexed [i_rho, j_eta])."""
    rho, eta = np.meshgrid(g.rho_axis(), g.eta_axis(), indexing="ij")
    values = np.broadcast_to(np.asarray(T(rho, eta), dtype=complex), rho.shape)
    return PhaseGrid(spec=g, phase=np.angle(values), magnitude=np.abs(values))


def loop_winding(values: np.ndarray) -> Tuple[int, float]:
    """Winding of a closed sequence of complex samples (last joins first).

    Returns the rounded winding and the largest principal-value step.
    """
    phase = np.angle(values)
    steps = wrap_phase(np.diff(np.concatenate([phase, phase[:1]])))
    return int(round(float(np.sum(steps)) / TWO_PI)), float(np.max(np.abs(steps)))


class CellWinding(BaseModel):
    i: int
    j: int
    winding: int
    subdivided: bool = False


class WindingMap(BaseModel):
    """Non-zero plaquette windings plus cells whose edges were too coarse."""
    cells: List[CellWinding] = Field(default_factory=list)
    coarse: List[Tuple[int, int]] = Field(default_factory=list)

    def total(self) -> int:
        return sum(c.winding for c in self.cells)


def _cell_perimeter(g: GridSpec, i: int, j: int, factor: int) -> Tuple[np.ndarray, np.ndarray]:
    r0 = g.rho_min + i * g.d_rho
    e0 = g.eta_min + j * g.d_eta
    t = np.arange(factor) / factor
    rho = np.concatenate([r0 + t * g.d_rho, np.full(factor, r0 + g.d_rho), r0 + (1 - t) * g.d_rho, np.full(factor, r0)])
    eta = np.concatenate([np.full(factor, e0), e0 + t * g.d_eta, np.full(factor, e0 + g.d_eta), e0 + (1 - t) * g.d_eta])
    return rho, eta


def plaquette_windings(
    pg: PhaseGrid,
    response=None,
    threshold: Optional[float] = None,
    factor: Optional[int] = None,
) -> WindingMap:
    """Counterclockwise winding of every grid cell (rho horizontal, eta vertical).

    Cells with an edge step |d phase| >= threshold are resampled on a
    factor-times finer perimeter when ``response`` is given; otherwise, or if
    the finer perimeter is still coarse, they are listed in ``coarse``.
    """
    threshold = settings.SUBDIVIDE_THRESHOLD if threshold is None else threshold
    factor = settings.SUBDIVIDE_FACTOR if factor is None else factor
    p = pg.phase
    e_rho = wrap_phase(p[1:, :] - p[:-1, :])
    e_eta = wrap_phase(p[:, 1:] - p[:, :-1])
    circulation = e_rho[:, :-1] + e_eta[1:, :] - e_rho[:, 1:] - e_eta[:-1, :]
    winding = np.rint(circulation / TWO_PI).astype(int)

    big_rho = np.abs(e_rho) >= threshold
    big_eta = np.abs(e_eta) >= threshold
    coarse_mask = big_rho[:, :-1] | big_rho[:, 1:] | big_eta[:-1, :] | big_eta[1:, :]

    result = WindingMap()
    for i, j in zip(*np.nonzero(coarse_mask)):
        i, j = int(i), int(j)
        if response is None:
            result.coarse.append((i, j))
            continue
        rho, eta = _cell_perimeter(pg.spec, i, j, factor)
        w, worst = loop_winding(np.asarray(response(rho, eta), dtype=complex))
        winding[i, j] = w
        if worst >= threshold:
            result.coarse.append((i, j))
    refined = coarse_mask if response is not None else np.zeros_like(coarse_mask)

    for i, j in zip(*np.nonzero(winding)):
        result.cells.append(
            CellWinding(i=int(i), j=int(j), winding=int(winding[i, j]), subdivided=bool(refined[i, j]))
        )
    if result.coarse:
        logger.warning("Coarse plaquettes", count=len(result.coarse), subdivided=response is not None)
    return result
