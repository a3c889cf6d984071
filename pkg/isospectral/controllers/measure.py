"""Controller for measure endpoints."""

from typing import Annotated

import numpy as np
from litestar import Controller, get
from litestar.di import Provide
from litestar.exceptions import HTTPException
from litestar.params import Parameter

from isospectral.controllers import computation_error_handler, domain_error_handler
from isospectral.dtos.report import MeasureReportDTO, PhotonStatisticsDTO, WavefunctionSampleDTO
from isospectral.errors import ConvergenceError, DomainError, UndefinedFanoError
from isospectral.models import Measure, MeasureReport, PhotonStatistics, SweepPoint, WavefunctionSample
from isospectral.repositories.report import ReportRepository
from isospectral.repositories.state import StateRepository, provide_state_repo
from isospectral.states import state_overlaps
from isospectral.susy import sample


def _parse_measures(value: str | None) -> list[Measure]:
    if not value:
        return list(Measure)
    try:
        return [Measure(item.strip()) for item in value.split(",") if item.strip()]
    except ValueError as exc:
        raise HTTPException(status_code=400, detail=f"unknown measure in {value!r}") from exc


class MeasureController(Controller):
    """Controller for non-Gaussianity and non-classicality measures."""

    path = "/measures"
    tags = ["measures"]
    dependencies = {"states_repo": Provide(provide_state_repo)}
    exception_handlers = {
        DomainError: domain_error_handler,
        ConvergenceError: computation_error_handler,
        UndefinedFanoError: computation_error_handler,
    }

    @get("/", return_dto=MeasureReportDTO, sync_to_thread=True)
    def get_report(
        self,
        lam: Annotated[float, Parameter(query="lambda")],
        states_repo: StateRepository,
        temperature: Annotated[float | None, Parameter(query="T", gt=0)] = None,
        measures: Annotated[str | None, Parameter(description="Comma-separated measure tags")] = None,
    ) -> MeasureReport:
        """Evaluate the requested measures at one (lambda, T) point."""
        requested = _parse_measures(measures)
        # invalid lambda or T raise here rather than becoming per-measure flags
        states_repo.get(lam, temperature)
        return ReportRepository(states_repo).evaluate(SweepPoint(lam, temperature), requested)

    @get("/photon-distribution", return_dto=PhotonStatisticsDTO, sync_to_thread=True)
    def get_photon_distribution(
        self,
        lam: Annotated[float, Parameter(query="lambda")],
        states_repo: StateRepository,
        temperature: Annotated[float | None, Parameter(query="T", gt=0)] = None,
    ) -> PhotonStatistics:
        """Get the photon-number distribution p(n) of a state."""
        state = states_repo.get(lam, temperature)
        distribution = states_repo.photon_distribution(lam, temperature)
        n = np.arange(distribution.size)
        return PhotonStatistics(
            lam=lam,
            temperature=temperature,
            probabilities=distribution.tolist(),
            mean=float(n @ distribution),
            second_moment=float(n**2 @ distribution),
            converged=state_overlaps(state).converged,
        )

    @get("/wavefunction", return_dto=WavefunctionSampleDTO, sync_to_thread=True)
    def get_wavefunction(
        self,
        lam: Annotated[float, Parameter(query="lambda")],
        x: Annotated[float, Parameter(query="x")],
        level: Annotated[int, Parameter(query="n", ge=0, le=400, default=0)],
    ) -> WavefunctionSample:
        """Amplitude phi_n(x; lambda) of one eigenfunction."""
        return sample(level, lam, x)
