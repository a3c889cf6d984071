"""Parameter sweeps over (T, lambda) grids."""

import logging
from collections.abc import Iterator, Sequence

from joblib import Parallel, delayed

from isospectral.config import SweepConfig
from isospectral.models import Measure, MeasureReport, SweepPoint
from isospectral.repositories.report import ReportRepository
from isospectral.repositories.state import StateRepository

logger = logging.getLogger(__name__)


def sweep_points(config: SweepConfig) -> list[SweepPoint]:
    """Cells ordered by T (ground first, then ascending T) and by lambda within each T."""
    temperatures: list[float | None] = [None] if config.include_ground else []
    temperatures += sorted(set(config.temps))
    return [SweepPoint(float(lam), temperature) for temperature in temperatures for lam in config.lambda_grid()]


def evaluate_point(point: SweepPoint, requested: Sequence[Measure]) -> MeasureReport:
    return ReportRepository(StateRepository()).evaluate(point, requested)


def run_sweep(config: SweepConfig) -> Iterator[MeasureReport]:
    """Yield one report per cell, in cell order whatever the completion order of the workers."""
    points = sweep_points(config)
    logger.info("sweeping %d cells on %d worker(s)", len(points), config.threads)
    if config.threads == 1:
        repository = ReportRepository(StateRepository())
        for point in points:
            yield repository.evaluate(point, config.measures)
        return
    parallel = Parallel(n_jobs=config.threads, return_as="generator")
    yield from parallel(delayed(evaluate_point)(point, config.measures) for point in points)
