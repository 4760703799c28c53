"""Entry point for the FastAPI application.

This module sets up the FastAPI app, configures logging and includes
all routers defined in the ``routers`` package.  Library errors are
returned as 422 responses.  To run the application locally use
``uvicorn mpr_sampling.main:app --reload``.
"""

import logging

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from . import __version__
from .config import get_settings
from .errors import MprSamplingError
from .logging_setup import configure_logging
from .routers import analysis, policies, simulations

logger = logging.getLogger(__name__)

configure_logging()

app = FastAPI(title="MPR Sampling Analysis", version=__version__)
logger.info("MPR sampling service %s starting (env=%s)", __version__, get_settings().env)


@app.exception_handler(MprSamplingError)
async def library_error_handler(request: Request, exc: MprSamplingError) -> JSONResponse:
    logger.info("%s %s rejected: %s", request.method, request.url.path, exc)
    return JSONResponse(
        status_code=422,
        content={"detail": str(exc), "error": type(exc).__name__},
    )


@app.get("/health")
def health() -> dict:
    return {"status": "ok", "version": __version__, "env": get_settings().env}


# Include routers for API endpoints
app.include_router(analysis.router)
app.include_router(policies.router)
app.include_router(simulations.router)
