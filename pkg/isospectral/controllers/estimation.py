"""Controller for parameter-estimation endpoints."""

from typing import Annotated

from litestar import Controller, get
from litestar.params import Parameter

from isospectral import estimation
from isospectral.controllers import computation_error_handler, domain_error_handler
from isospectral.dtos.report import BoundReportDTO, FisherResultDTO
from isospectral.errors import ConvergenceError, DomainError
from isospectral.models import BoundReport, FisherResult


class EstimationController(Controller):
    """Controller for Fisher information and Cramer-Rao bounds."""

    path = "/estimation"
    tags = ["estimation"]
    exception_handlers = {
        DomainError: domain_error_handler,
        ConvergenceError: computation_error_handler,
    }

    @get("/qfi", return_dto=FisherResultDTO, sync_to_thread=True)
    def get_qfi(
        self,
        lam: Annotated[float, Parameter(query="lambda")],
        temperature: Annotated[float | None, Parameter(query="T", gt=0)] = None,
    ) -> FisherResult:
        """Quantum Fisher information of the ground (no T) or Gibbs state."""
        return estimation.qfi(lam, temperature)

    @get("/cfi", return_dto=FisherResultDTO, sync_to_thread=True)
    def get_cfi(
        self,
        lam: Annotated[float, Parameter(query="lambda")],
        temperature: Annotated[float | None, Parameter(query="T", gt=0)] = None,
    ) -> FisherResult:
        """Classical Fisher information of position measurements."""
        return estimation.classical_fi_position(lam, temperature)

    @get("/crb", return_dto=BoundReportDTO, sync_to_thread=True)
    def get_bound(
        self,
        lam: Annotated[float, Parameter(query="lambda")],
        repetitions: Annotated[int, Parameter(query="M", ge=1, default=1)],
        temperature: Annotated[float | None, Parameter(query="T", gt=0)] = None,
    ) -> BoundReport:
        """Quantum Cramer-Rao bound 1/(M H) on the variance of lambda."""
        return estimation.bound_report(lam, repetitions, temperature)
