"""Controllers and error handlers for API endpoints."""

from typing import Any

from litestar import Request, Response

from isospectral.errors import IsospectralError


def domain_error_handler(_: Request[Any, Any, Any], exc: IsospectralError) -> Response[Any]:
    """Handle arguments outside the domain of an operation."""
    return Response(
        status_code=400,
        content={"status_code": 400, "detail": str(exc)},
    )


def computation_error_handler(_: Request[Any, Any, Any], exc: IsospectralError) -> Response[Any]:
    """Handle computations that failed or are undefined for the requested state."""
    return Response(
        status_code=422,
        content={"status_code": 422, "detail": str(exc)},
    )
