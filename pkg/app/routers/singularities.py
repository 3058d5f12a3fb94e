"""Singularity scan route."""

import math
from typing import Optional

import structlog
from fastapi import APIRouter, HTTPException
from pydantic import BaseModel, Field

from app.core.dependencies import ModelOverrides, resolve_scenario, to_http_exception
from app.models.domain import GridSpec
from app.singularities.scan import scan_singularities
from app.waveplate.model import omega_to_ghz
from app.weak.engine import waveplate_response

router = APIRouter()
logger = structlog.get_logger()

MAX_NODES = 1_000_000


class ScanRequest(BaseModel):
    """Request model for scan -> refine -> report."""
    rho_min: float = 0.0
    rho_max: float = 63.0
    eta_min: float = 0.0
    eta_max: float = math.pi
    n_rho: int = Field(default=600, ge=2)
    n_eta: int = Field(default=300, ge=2)
    subdivide: bool = True
    model: Optional[ModelOverrides] = None


@router.post("/scan")
async def scan(request_data: ScanRequest):
    """Locate, refine and classify the zeros of T inside a window."""
    if request_data.n_rho * request_data.n_eta > MAX_NODES:
        raise HTTPException(status_code=400, detail=f"grid exceeds {MAX_NODES} nodes")
    try:
        scenario = resolve_scenario(request_data.model)
        grid = GridSpec(**request_data.model_dump(exclude={"subdivide", "model"}))
        result = scan_singularities(waveplate_response(scenario), grid, subdivide=request_data.subdivide)
        report = result.report
        return {
            "singularities": [
                {**r.model_dump(), "f_ghz": omega_to_ghz(r.rho)} for r in result.records
            ],
            "count": report.count,
            "net_charge": report.net_charge,
            "alternation_ok": report.alternation_ok,
            "seeds": result.seeds,
            "failures": [f.model_dump() for f in result.failures],
            "coarse_cells": len(result.windings.coarse),
        }
    except HTTPException:
        raise
    except Exception as e:
        raise to_http_exception(e, "Singularity scan")
