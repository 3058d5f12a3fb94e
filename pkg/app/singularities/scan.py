"""Scan -> refine -> report over a parameter window."""

import math
from typing import List, Optional

import numpy as np
import structlog
from pydantic import BaseModel, ConfigDict, Field

from app.core.config import settings
from app.core.exceptions import WeakValueError
from app.models.domain import GridSpec, ParamPoint, PhaseGrid, SingularityRecord
from app.singularities.grid import WindingMap, phase_grid, plaquette_windings
from app.singularities.lattice import LatticeReport, lattice_report
from app.singularities.refine import refine_zero

logger = structlog.get_logger()

DUPLICATE_TOL = 1e-6


class SeedFailure(BaseModel):
    seed: ParamPoint
    error: str


class ScanResult(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    grid: PhaseGrid
    windings: WindingMap
    records: List[SingularityRecord] = Field(default_factory=list)
    failures: List[SeedFailure] = Field(default_factory=list)
    report: LatticeReport = Field(default_factory=LatticeReport)

    @property
    def seeds(self) -> int:
        return len(self.windings.cells)


def seed_for_cell(pg: PhaseGrid, i: int, j: int) -> ParamPoint:
    """The cell corner with the smallest |T|."""
    corners = [(i, j), (i + 1, j), (i, j + 1), (i + 1, j + 1)]
    ci, cj = min(corners, key=lambda c: pg.magnitude[c])
    g = pg.spec
    return ParamPoint(rho=g.rho_min + ci * g.d_rho, eta=g.eta_min + cj * g.d_eta)


def scan_singularities(
    T,
    g: GridSpec,
    subdivide: bool = True,
    tol: Optional[float] = None,
) -> ScanResult:
    """Locate, refine and classify every zero of T inside g."""
    tol = settings.NEWTON_TOL if tol is None else tol
    pg = phase_grid(T, g)
    windings = plaquette_windings(pg, response=T if subdivide else None)
    logger.info(
        "Plaquette scan complete",
        n_rho=g.n_rho,
        n_eta=g.n_eta,
        charged_cells=len(windings.cells),
        coarse_cells=len(windings.coarse),
    )

    result = ScanResult(grid=pg, windings=windings)
    radius = 2.0 * math.hypot(g.d_rho, g.d_eta)
    for cell in windings.cells:
        seed = seed_for_cell(pg, cell.i, cell.j)
        try:
            record = refine_zero(T, seed, tol=tol, search_radius=radius)
        except WeakValueError as e:
            logger.warning("Seed refinement failed", rho=seed.rho, eta=seed.eta, error=str(e))
            result.failures.append(SeedFailure(seed=seed, error=str(e)))
            continue
        if record.residual > tol or not g.contains(record.rho, record.eta):
            continue
        if any(_same_zero(record, r) for r in result.records):
            continue
        result.records.append(record)

    result.records.sort(key=lambda r: (r.rho, r.eta))
    result.report = lattice_report(result.records)
    logger.info(
        "Singularity scan complete",
        found=len(result.records),
        failed=len(result.failures),
        net_charge=result.report.net_charge,
        alternation_ok=result.report.alternation_ok,
    )
    return result


def _same_zero(a: SingularityRecord, b: SingularityRecord) -> bool:
    scale = max(1.0, abs(a.rho), abs(a.eta))
    return bool(np.hypot(a.rho - b.rho, a.eta - b.eta) <= DUPLICATE_TOL * scale)
