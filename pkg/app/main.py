"""Main FastAPI application for the weak-value waveplate service."""

from contextlib import asynccontextmanager

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
import structlog
from prometheus_fastapi_instrumentator import Instrumentator

from app.core.config import settings
from app.core.dependencies import get_scenario
from app.core.exceptions import WeakValueError
from app.core.logging import setup_logging
from app.routers import singularities, waveplate, weak

# Setup structured logging
setup_logging()
logger = structlog.get_logger()


@asynccontextmanager
async def lifespan(app: FastAPI):
    """Application lifecycle manager."""
    logger.info("Starting weak-value service", version=settings.APP_VERSION, preset=settings.MODEL_PRESET)
    yield
    logger.info("Shutting down weak-value service")


# Create FastAPI app
app = FastAPI(
    title=settings.APP_NAME,
    description="Transfer functions, generalized weak values and phase-singularity maps of a rotatable waveplate",
    version=settings.APP_VERSION,
    lifespan=lifespan,
    docs_url="/docs" if settings.ENVIRONMENT != "production" else None,
    redoc_url="/redoc" if settings.ENVIRONMENT != "production" else None,
)

# CORS middleware
app.add_middleware(
    CORSMiddleware,
    allow_origins=settings.CORS_ORIGINS,
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

# Prometheus metrics
if settings.ENABLE_METRICS:
    Instrumentator().instrument(app).expose(app, endpoint="/metrics")

# Include routers
app.include_router(waveplate.router, prefix="/api/waveplate", tags=["waveplate"])
app.include_router(weak.router, prefix="/api/weak", tags=["weak"])
app.include_router(singularities.router, prefix="/api/singularities", tags=["singularities"])


@app.get("/", tags=["root"])
async def root():
    """Root endpoint."""
    return {
        "service": settings.APP_NAME,
        "version": settings.APP_VERSION,
        "environment": settings.ENVIRONMENT,
        "status": "operational",
    }


@app.get("/health", tags=["health"])
async def health_check():
    """Health check endpoint: the configured model must load."""
    health_status = {
        "status": "healthy",
        "service": settings.SERVICE_NAME,
        "version": settings.APP_VERSION,
        "checks": {},
    }
    try:
        get_scenario()
        health_status["checks"]["model"] = "healthy"
    except WeakValueError as e:
        health_status["checks"]["model"] = f"unhealthy: {str(e)}"
        health_status["status"] = "degraded"

    status_code = 200 if health_status["status"] == "healthy" else 503
    return JSONResponse(content=health_status, status_code=status_code)


@app.get("/config", tags=["debug"])
async def get_config():
    """Get current configuration (development only)."""
    if settings.is_production():
        return JSONResponse(content={"error": "Not available in production"}, status_code=403)

    return {
        "environment": settings.ENVIRONMENT,
        "model_preset": settings.MODEL_PRESET,
        "model_config_path": settings.MODEL_CONFIG_PATH,
        "eps_sing": settings.EPS_SING,
        "eps_sec": settings.EPS_SEC,
        "diff_step": settings.DIFF_STEP,
        "diff_stencil": settings.DIFF_STENCIL,
        "newton_tol": settings.NEWTON_TOL,
        "newton_max_iter": settings.NEWTON_MAX_ITER,
        "unitary_tol": settings.UNITARY_TOL,
    }


if __name__ == "__main__":
    import uvicorn

    uvicorn.run(
        "app.main:app",
        host="0.0.0.0",
        port=settings.SERVICE_PORT,
        reload=settings.ENVIRONMENT == "development",
        log_config=None,  # Use structlog instead
    )
