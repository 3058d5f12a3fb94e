"""Lattice-level topology: predicted zeros, charge bookkeeping, loop windings."""

import math
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import structlog
from pydantic import BaseModel, Field

from app.core.config import settings
from app.core.exceptions import LoopError, ModelError
from app.models.domain import (
    Axis,
    DiffSettings,
    DispersionModel,
    GridSpec,
    ModelPerturbation,
    ParamPoint,
    Rectangle,
    Scenario,
    SingularityRecord,
)
from app.singularities.grid import loop_winding
from app.weak.engine import pointer_from_response, waveplate_response

logger = structlog.get_logger()

NEIGHBOUR_TIE = 1e-9
MAX_LOOP_REFINEMENTS = 6


def predicted_lattice(model: DispersionModel, g: Union[GridSpec, Rectangle]) -> List[ParamPoint]:
    """All (omega_n, beta_m) with phi_minus = (2n+1) pi/2 and beta = (2m+1) pi/4 inside g."""
    if model.is_degenerate():
        raise ModelError("slope_te == slope_tm: no half-waveplate lattice")
    s, c = model.slope_minus, model.intercept_minus
    # phi_minus range over the window -> integer n range
    phi_lo, phi_hi = sorted((s * g.rho_min + c, s * g.rho_max + c))
    n_lo = math.ceil(phi_lo / math.pi - 0.5)
    n_hi = math.floor(phi_hi / math.pi - 0.5)
    omegas = sorted(((2 * n + 1) * math.pi / 2.0 - c) / s for n in range(n_lo, n_hi + 1))
    m_lo = math.ceil(2.0 * g.eta_min / math.pi - 0.5)
    m_hi = math.floor(2.0 * g.eta_max / math.pi - 0.5)
    betas = [(2 * m + 1) * math.pi / 4.0 for m in range(m_lo, m_hi + 1)]
    points = []
    for omega in omegas:
        for beta in betas:
            if g.contains(omega, beta):
                points.append(ParamPoint(rho=omega, eta=beta))
    return points


class NeighbourPair(BaseModel):
    index: int
    neighbour: int
    product: int


class LatticeReport(BaseModel):
    """Charge bookkeeping for a set of refined singularities."""
    count: int = 0
    counts_by_charge: Dict[int, int] = Field(default_factory=dict)
    net_charge: int = 0
    pairs: List[NeighbourPair] = Field(default_factory=list)
    violations: List[NeighbourPair] = Field(default_factory=list)

    @property
    def alternation_ok(self) -> bool:
        return not self.violations


def lattice_report(records: Sequence[SingularityRecord]) -> LatticeReport:
    """Net charge and nearest-neighbour charge products (expected -1)."""
    report = LatticeReport(count=len(records))
    for r in records:
        report.counts_by_charge[r.charge] = report.counts_by_charge.get(r.charge, 0) + 1
    report.net_charge = sum(r.charge for r in records)
    if len(records) < 2:
        return report

    coords = np.array([[r.rho, r.eta] for r in records])
    dist = np.hypot(*(coords[:, None, :] - coords[None, :, :]).transpose(2, 0, 1))
    np.fill_diagonal(dist, np.inf)
    for i, row in enumerate(dist):
        nearest = row.min()
        for j in np.flatnonzero(row <= nearest * (1.0 + NEIGHBOUR_TIE)):
            pair = NeighbourPair(index=i, neighbour=int(j), product=records[i].charge * records[int(j)].charge)
            report.pairs.append(pair)
            if pair.product != -1:
                report.violations.append(pair)
    return report


def _rectangle_path(loop: Rectangle, samples: int) -> Tuple[np.ndarray, np.ndarray]:
    t = np.arange(samples) / samples
    w = loop.rho_max - loop.rho_min
    h = loop.eta_max - loop.eta_min
    rho = np.concatenate([
        loop.rho_min + t * w,
        np.full(samples, loop.rho_max),
        loop.rho_max - t * w,
        np.full(samples, loop.rho_min),
    ])
    eta = np.concatenate([
        np.full(samples, loop.eta_min),
        loop.eta_min + t * h,
        np.full(samples, loop.eta_max),
        loop.eta_max - t * h,
    ])
    return rho, eta


def boundary_winding(T, loop: Rectangle, samples: int = 256, eps: Optional[float] = None) -> int:
    """Total winding of T counterclockwise around the rectangle.

    Sampling is doubled until every principal-value step is below the
    subdivision threshold.
    """
    eps = settings.EPS_SING if eps is None else eps
    for _ in range(MAX_LOOP_REFINEMENTS + 1):
        rho, eta = _rectangle_path(loop, samples)
        values = np.asarray(T(rho, eta), dtype=complex)
        smallest = float(np.min(np.abs(values)))
        if smallest <= eps:
            raise LoopError(f"|T| = {smallest:.3e} on the loop: it passes through a zero")
        winding, worst = loop_winding(values)
        if worst < settings.SUBDIVIDE_THRESHOLD:
            return winding
        samples *= 2
    raise LoopError(f"loop still undersampled at {samples // 2} samples per edge; it passes too near a zero")


def perturb_and_conserve(
    source: Union[DispersionModel, Scenario],
    perturbation: ModelPerturbation,
    loop: Rectangle,
    samples: int = 256,
) -> Tuple[int, int]:
    """Boundary winding before and after perturbing the dispersion model."""
    scenario = source if isinstance(source, Scenario) else Scenario.default(source)
    perturbed = Scenario(
        model=scenario.model.perturbed(**perturbation.model_dump()),
        psi_in=scenario.psi_in,
        psi_f=scenario.psi_f,
    )
    before = boundary_winding(waveplate_response(scenario), loop, samples)
    after = boundary_winding(waveplate_response(perturbed), loop, samples)
    logger.info("Charge conservation check", before=before, after=after, **perturbation.model_dump())
    return before, after


class GradientProfile(BaseModel):
    """|grad arg T| sampled along a segment between two points."""
    t: List[float]
    norms: List[float]
    min_index: int
    interior_minimum: bool


def gradient_norm_profile(
    T,
    a: ParamPoint,
    b: ParamPoint,
    samples: int = 101,
    margin: float = 0.05,
    diff: Optional[DiffSettings] = None,
) -> GradientProfile:
    """Sample |grad arg T| on the segment a->b, staying ``margin`` away from the ends.

    A saddle of the phase between two singularities shows up as an interior
    minimum strictly below both end values.
    """
    ts = np.linspace(margin, 1.0 - margin, samples)
    norms = []
    for t in ts:
        p = ParamPoint(rho=a.rho + t * (b.rho - a.rho), eta=a.eta + t * (b.eta - a.eta))
        g_rho = pointer_from_response(T, p, Axis.RHO, diff).re
        g_eta = pointer_from_response(T, p, Axis.ETA, diff).re
        norms.append(math.hypot(g_rho, g_eta))
    k = int(np.argmin(norms))
    interior = 0 < k < samples - 1 and norms[k] < norms[0] and norms[k] < norms[-1]
    return GradientProfile(t=ts.tolist(), norms=norms, min_index=k, interior_minimum=interior)
