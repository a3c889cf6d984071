"""Repository that evaluates measure reports and serialises result tables."""

import logging
from collections.abc import Iterable, Sequence
from dataclasses import asdict, fields
from datetime import UTC, datetime

import pandas as pd

from isospectral import estimation, measures
from isospectral.errors import IsospectralError, UndefinedFanoError
from isospectral.models import Measure, MeasureReport, OutputFormat, SweepPoint
from isospectral.repositories.state import StateRepository
from isospectral.states import state_overlaps

logger = logging.getLogger(__name__)

NA = "NA"
NOT_CONVERGED = "not-converged"
REPORT_COLUMNS = [f.name for f in fields(MeasureReport)]


class ReportRepository:
    """Evaluates every requested measure at one (lambda, T) point.

    A failing measure leaves its columns empty and records the reason in
    ``flags``; it never aborts the other measures of the point.
    """

    def __init__(self, states: StateRepository) -> None:
        self.states = states

    def evaluate(self, point: SweepPoint, requested: Iterable[Measure] = tuple(Measure)) -> MeasureReport:
        report = MeasureReport(lam=point.lam, temperature=point.temperature)
        wanted = set(requested)
        for measure in Measure:
            if measure not in wanted:
                continue
            try:
                self._fill(report, measure)
            except UndefinedFanoError:
                report.flags[measure.value] = "undefined"
            except IsospectralError as exc:
                logger.warning("%s failed at lambda=%g, T=%s: %s", measure.value, point.lam, point.temperature, exc)
                report.flags[measure.value] = "error"
        return report

    def _fill(self, report: MeasureReport, measure: Measure) -> None:
        lam, temperature = report.lam, report.temperature
        state = self.states.get(lam, temperature)
        match measure:
            case Measure.MOMENTS:
                moments = self.states.moments(lam, temperature)
                report.var_x, report.var_p = moments.var_x, moments.var_p
                report.uncertainty_product = measures.uncertainty_product(moments)
            case Measure.NONG:
                raw = measures.nong_delta_raw(state, self.states.moments(lam, temperature))
                if raw < 0:
                    report.flags[measure.value] = "clipped"
                report.delta_nong = max(raw, 0.0)
            case Measure.FANO:
                if not state_overlaps(state).converged:
                    report.flags[measure.value] = NOT_CONVERGED
                report.fano = measures.fano_factor(state)
            case Measure.WIGNER:
                result = measures.wigner_negativity_estimate(state)
                if not result.converged:
                    report.flags[measure.value] = NOT_CONVERGED
                report.wigner_negativity = result.value
            case Measure.QCS:
                report.qcs_variance = measures.qcs(state, self.states.moments(lam, temperature))
                report.qcs_kernel = measures.qcs_kernel(state)
            case Measure.QFI:
                result = estimation.qfi(lam, temperature)
                if not result.converged:
                    report.flags[measure.value] = NOT_CONVERGED
                report.qfi = result.value
            case Measure.CFI:
                report.classical_fi = estimation.classical_fi_position(lam, temperature).value


def has_non_converged(reports: Iterable[MeasureReport]) -> bool:
    return any(flag in (NOT_CONVERGED, "error") for report in reports for flag in report.flags.values())


def reports_frame(reports: Sequence[MeasureReport]) -> pd.DataFrame:
    """One row per report, columns in MeasureReport order; flags as ``measure=reason`` pairs."""
    rows = []
    for report in reports:
        row = asdict(report)
        row["flags"] = ";".join(f"{key}={value}" for key, value in sorted(report.flags.items())) or None
        rows.append(row)
    return pd.DataFrame(rows, columns=REPORT_COLUMNS)


def render_table(
    frame: pd.DataFrame,
    fmt: OutputFormat = OutputFormat.CSV,
    title: str | None = None,
    timestamp: bool = False,
) -> str:
    """CSV with '#'-prefixed comment and header lines, or JSON lines."""
    if fmt is OutputFormat.JSONL:
        if frame.empty:
            return ""
        return frame.to_json(orient="records", lines=True, double_precision=15).rstrip("\n") + "\n"
    lines = []
    if title:
        lines.append(f"# {title}")
    if timestamp:
        lines.append(f"# generated {datetime.now(UTC).isoformat(timespec='seconds')}")
    lines.append("# " + ",".join(map(str, frame.columns)))
    body = frame.to_csv(header=False, index=False, na_rep=NA, lineterminator="\n")
    return "\n".join(lines) + "\n" + body
