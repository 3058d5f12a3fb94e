"""Weak-value routes: pointers, operator-form weak values and closed forms."""

from typing import List, Optional

import structlog
from fastapi import APIRouter, HTTPException, Query
from pydantic import BaseModel, Field

from app.core.dependencies import (
    ModelOverrides,
    get_diff_settings,
    get_scenario,
    resolve_scenario,
    to_http_exception,
)
from app.models.domain import Axis, ParamPoint, Stencil
from app.weak.analytic import group_delay_analytic, helicity_pointer_analytic
from app.weak.engine import (
    directional_pointer,
    generator_operator,
    generator_spectrum,
    pointer_from_response,
    waveplate_family,
    waveplate_response,
    weak_value_operator_form,
)
from app.waveplate.model import half_waveplate_frequency

router = APIRouter()
logger = structlog.get_logger()


class PointerRequest(BaseModel):
    """Request model for a response-gradient pointer."""
    omega: float
    beta: float
    axis: Optional[Axis] = Axis.RHO
    direction: Optional[List[float]] = Field(default=None, min_length=2, max_length=2)
    step: Optional[float] = Field(default=None, gt=0)
    stencil: Optional[Stencil] = None
    model: Optional[ModelOverrides] = None


class OperatorRequest(BaseModel):
    """Request model for an operator-form weak value."""
    omega: float
    beta: float
    axis: Axis = Axis.RHO
    step: Optional[float] = Field(default=None, gt=0)
    stencil: Optional[Stencil] = None
    model: Optional[ModelOverrides] = None


def _matrix(op) -> List[List[List[float]]]:
    return [[[float(v.real), float(v.imag)] for v in row] for row in op]


@router.post("/pointer")
async def pointer(request_data: PointerRequest):
    """-i d ln T along an axis, or along a unit direction when one is given."""
    try:
        scenario = resolve_scenario(request_data.model)
        diff = get_diff_settings(request_data.step, request_data.stencil)
        T = waveplate_response(scenario)
        p = ParamPoint(rho=request_data.omega, eta=request_data.beta)
        if request_data.direction is not None:
            value = directional_pointer(T, p, request_data.direction, diff)
        else:
            value = pointer_from_response(T, p, request_data.axis, diff)
        return value.model_dump(mode="json")
    except HTTPException:
        raise
    except Exception as e:
        raise to_http_exception(e, "Pointer evaluation")


@router.post("/operator")
async def operator_weak_value(request_data: OperatorRequest):
    """AAV weak value of the generator together with its matrix and spectrum."""
    try:
        scenario = resolve_scenario(request_data.model)
        diff = get_diff_settings(request_data.step, request_data.stencil)
        fam = waveplate_family(scenario.model)
        p = ParamPoint(rho=request_data.omega, eta=request_data.beta)
        op = generator_operator(fam, p, request_data.axis, diff)
        weak = weak_value_operator_form(fam, scenario.psi_in, scenario.psi_f, p, request_data.axis, diff)
        return {
            "axis": request_data.axis.value,
            "re": weak.real,
            "im": weak.imag,
            "generator": _matrix(op),
            "spectrum": [float(v) for v in generator_spectrum(op)],
        }
    except HTTPException:
        raise
    except Exception as e:
        raise to_http_exception(e, "Operator weak value")


@router.get("/group-delay")
async def group_delay(beta0: float = Query(..., description="plate angle [rad]")):
    """Closed-form group delay at the first half-wave frequency."""
    try:
        scenario = get_scenario()
        return {
            "beta0": beta0,
            "omega_s": half_waveplate_frequency(scenario.model, 0),
            "group_delay": group_delay_analytic(scenario, beta0),
        }
    except HTTPException:
        raise
    except Exception as e:
        raise to_http_exception(e, "Group delay")


@router.get("/helicity")
async def helicity(omega0: float = Query(..., description="angular frequency [rad/ns]")):
    """Closed-form beta-pointer 2 tan(phi_minus) along beta = pi/4."""
    try:
        return {"omega0": omega0, "pointer": helicity_pointer_analytic(get_scenario(), omega0)}
    except HTTPException:
        raise
    except Exception as e:
        raise to_http_exception(e, "Helicity pointer")
