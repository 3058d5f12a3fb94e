"""Waveplate model routes: transfer function and predicted lattice."""

import math
from typing import Optional

import structlog
from fastapi import APIRouter, HTTPException
from pydantic import BaseModel, Field, model_validator

from app.core.dependencies import ModelOverrides, resolve_scenario, to_http_exception
from app.models.domain import Rectangle
from app.singularities.lattice import predicted_lattice
from app.waveplate.model import ghz_to_omega, omega_to_ghz, transfer, transfer_closed_form

router = APIRouter()
logger = structlog.get_logger()


class TransferRequest(BaseModel):
    """Request model for a single transfer-function evaluation."""
    omega: Optional[float] = Field(default=None, description="angular frequency [rad/ns]")
    f_ghz: Optional[float] = Field(default=None, description="frequency [GHz]")
    beta: float = Field(..., description="plate angle [rad]")
    model: Optional[ModelOverrides] = None

    @model_validator(mode="after")
    def one_frequency(self):
        if (self.omega is None) == (self.f_ghz is None):
            raise ValueError("give exactly one of omega or f_ghz")
        return self

    def angular(self) -> float:
        return self.omega if self.omega is not None else ghz_to_omega(self.f_ghz)


class LatticeRequest(BaseModel):
    """Request model for the predicted singularity lattice."""
    rho_min: float = 0.0
    rho_max: float = 63.0
    eta_min: float = 0.0
    eta_max: float = math.pi
    model: Optional[ModelOverrides] = None


@router.post("/transfer")
async def evaluate_transfer(request_data: TransferRequest):
    """T(omega, beta), plus the closed form for the z-in / z-out scenario."""
    try:
        scenario = resolve_scenario(request_data.model)
        omega = request_data.angular()
        t = complex(transfer(scenario, omega, request_data.beta))
        result = {
            "omega": omega,
            "f_ghz": omega_to_ghz(omega),
            "beta": request_data.beta,
            "re": t.real,
            "im": t.imag,
            "abs": abs(t),
            "arg": math.atan2(t.imag, t.real),
        }
        if scenario.is_default():
            closed = complex(transfer_closed_form(scenario, omega, request_data.beta))
            result["closed_form"] = {"re": closed.real, "im": closed.imag}
        return result
    except HTTPException:
        raise
    except Exception as e:
        raise to_http_exception(e, "Transfer evaluation")


@router.post("/lattice")
async def lattice(request_data: LatticeRequest):
    """Predicted zeros (omega_n, beta_m) inside an open window."""
    try:
        scenario = resolve_scenario(request_data.model)
        window = Rectangle(
            rho_min=request_data.rho_min,
            rho_max=request_data.rho_max,
            eta_min=request_data.eta_min,
            eta_max=request_data.eta_max,
        )
        points = predicted_lattice(scenario.model, window)
        return {
            "points": [{"omega": p.rho, "f_ghz": omega_to_ghz(p.rho), "beta": p.eta} for p in points],
            "total": len(points),
        }
    except HTTPException:
        raise
    except Exception as e:
        raise to_http_exception(e, "Lattice prediction")
