"""Read-only Litestar application over the isospectral toolkit."""

from litestar import Litestar, get
from litestar.openapi import OpenAPIConfig
from litestar.openapi.plugins import ScalarRenderPlugin

from isospectral import __version__
from isospectral.config import logging_config, settings
from isospectral.controllers.estimation import EstimationController
from isospectral.controllers.figure import FigureController
from isospectral.controllers.measure import MeasureController


@get("/", tags=["root"])
async def root() -> dict[str, str]:
    """Root endpoint for basic API health check."""
    return {
        "message": "Isospectral oscillator API running",
        "tolerance_profile": settings.tolerance_profile.value,
    }


openapi_config = OpenAPIConfig(
    title="Isospectral oscillators",
    version=__version__,
    render_plugins=[
        ScalarRenderPlugin(),
    ],
)

app = Litestar(
    route_handlers=[
        root,
        MeasureController,
        EstimationController,
        FigureController,
    ],
    openapi_config=openapi_config,
    logging_config=logging_config(),
    debug=settings.debug,
)
