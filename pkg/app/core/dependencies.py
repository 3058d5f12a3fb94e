"""Shared dependencies for the HTTP surface."""

from typing import Any, Dict, Optional

import structlog
from fastapi import HTTPException
from pydantic import BaseModel, Field

from app.core.config import settings
from app.core.exceptions import ConfigError, WeakValueError
from app.models.domain import DiffSettings, Scenario, Stencil
from app.waveplate.model_file import build_scenario

logger = structlog.get_logger()

# Global instances
_default_scenario: Optional[Scenario] = None


class ModelOverrides(BaseModel):
    """Per-request changes to the configured dispersion model and states."""
    slope_te: Optional[float] = None
    intercept_te: Optional[float] = None
    slope_tm: Optional[float] = None
    intercept_tm: Optional[float] = None
    psi_in: Optional[str] = Field(default=None, description="state name or 'c1,c2'")
    psi_f: Optional[str] = Field(default=None, description="state name or 'c1,c2'")

    def values(self) -> Dict[str, Any]:
        return {k: v for k, v in self.model_dump().items() if v is not None}


def get_scenario() -> Scenario:
    """Scenario from the configured preset and model file, built once."""
    global _default_scenario

    if _default_scenario is None:
        _default_scenario = build_scenario(settings.MODEL_PRESET, settings.MODEL_CONFIG_PATH)
        logger.info(
            "Default scenario loaded",
            preset=settings.MODEL_PRESET,
            config=settings.MODEL_CONFIG_PATH,
            **_default_scenario.model.model_dump(),
        )
    return _default_scenario


def resolve_scenario(overrides: Optional[ModelOverrides]) -> Scenario:
    if overrides is None or not overrides.values():
        return get_scenario()
    return build_scenario(settings.MODEL_PRESET, settings.MODEL_CONFIG_PATH, overrides.values())


def get_diff_settings(step: Optional[float] = None, stencil: Optional[Stencil] = None) -> DiffSettings:
    return DiffSettings(
        step_rho=step or settings.DIFF_STEP,
        step_eta=step or settings.DIFF_STEP,
        stencil=stencil or Stencil(settings.DIFF_STENCIL),
    )


def to_http_exception(e: Exception, operation: str) -> HTTPException:
    """400 for bad input, 422 for quantities that cannot be computed."""
    if isinstance(e, (ConfigError, ValueError)):
        logger.warning(f"{operation} rejected", error=str(e))
        return HTTPException(status_code=400, detail=str(e))
    if isinstance(e, WeakValueError):
        logger.error(f"{operation} failed", error=str(e), kind=type(e).__name__)
        return HTTPException(status_code=422, detail={"error": type(e).__name__, "message": str(e)})
    logger.error(f"{operation} failed", error=str(e))
    return HTTPException(status_code=500, detail=f"{operation} failed")
