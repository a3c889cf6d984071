import io
import json

import pandas as pd
import pytest

from isospectral.config import SweepConfig
from isospectral.models import Measure, MeasureReport, OutputFormat, SweepPoint
from isospectral.repositories.report import (
    NA,
    REPORT_COLUMNS,
    ReportRepository,
    has_non_converged,
    render_table,
    reports_frame,
)
from isospectral.sweep import run_sweep, sweep_points


def test_state_repository_caches_and_evicts(states):
    first = states.get(1.0, 0.5)
    assert states.get(1.0, 0.5) is first
    assert states.get(1.0) is not first
    small = type(states)(maxsize=1)
    state = small.get(1.0)
    small.get(2.0)
    assert small.get(1.0) is not state


def test_sweep_points_order():
    config = SweepConfig.load(lambda_min=1, lambda_max=100, lambda_count=3, temps=[0.5, 0.25], threads=1)
    points = sweep_points(config)
    assert [p.temperature for p in points] == [None] * 3 + [0.25] * 3 + [0.5] * 3
    assert [p.lam for p in points[:3]] == pytest.approx([1.0, 10.0, 100.0])


def test_vacuum_report(states):
    report = ReportRepository(states).evaluate(SweepPoint(0.0))
    assert report.var_x == pytest.approx(0.5, abs=1e-10)
    assert report.var_p == pytest.approx(0.5, abs=1e-10)
    assert report.delta_nong == pytest.approx(0.0, abs=1e-9)
    assert report.wigner_negativity == pytest.approx(0.0, abs=1e-5)
    assert report.qcs_variance == pytest.approx(1.0, abs=1e-10)
    assert report.qfi == pytest.approx(2.0 / 3.0, rel=1e-8)
    assert report.fano is None
    assert report.flags == {"fano": "undefined"}


def test_failing_measure_does_not_abort_the_point(states, monkeypatch):
    from isospectral import estimation
    from isospectral.errors import ConvergenceError

    def broken(*args, **kwargs):
        raise ConvergenceError("boom")

    monkeypatch.setattr(estimation, "qfi", broken)
    report = ReportRepository(states).evaluate(SweepPoint(1.0), (Measure.QFI, Measure.MOMENTS))
    assert report.flags == {"qfi": "error"}
    assert report.qfi is None
    assert report.var_x is not None
    assert has_non_converged([report])


def test_sequential_and_parallel_sweeps_agree():
    flags = {"lambda_min": 0.5, "lambda_max": 50, "lambda_count": 3, "measures": [Measure.QFI], "temps": [0.5]}
    sequential = list(run_sweep(SweepConfig.load(threads=1, **flags)))
    parallel = list(run_sweep(SweepConfig.load(threads=2, **flags)))
    assert [(r.lam, r.temperature) for r in parallel] == [(r.lam, r.temperature) for r in sequential]
    assert [r.qfi for r in parallel] == pytest.approx([r.qfi for r in sequential], rel=1e-12)


def _reports() -> list[MeasureReport]:
    return [
        MeasureReport(lam=0.0, var_x=0.5, flags={"fano": "undefined"}),
        MeasureReport(lam=1.0, temperature=0.25, var_x=0.49),
    ]


def test_csv_table_layout():
    text = render_table(reports_frame(_reports()), OutputFormat.CSV, "demo")
    lines = text.splitlines()
    assert lines[0] == "# demo"
    assert lines[1] == "# " + ",".join(REPORT_COLUMNS)
    assert len(lines) == 4
    assert f",{NA}," in lines[2]
    assert lines[2].endswith("fano=undefined")
    frame = pd.read_csv(io.StringIO(text), comment="#", header=None, names=REPORT_COLUMNS, na_values=[NA])
    assert frame["var_x"].tolist() == [0.5, 0.49]


def test_csv_timestamp_is_optional():
    frame = reports_frame(_reports())
    assert "# generated" not in render_table(frame, OutputFormat.CSV, "demo")
    assert "# generated" in render_table(frame, OutputFormat.CSV, "demo", timestamp=True)


def test_jsonl_table_uses_null():
    text = render_table(reports_frame(_reports()), OutputFormat.JSONL)
    rows = [json.loads(line) for line in text.splitlines()]
    assert len(rows) == 2
    assert rows[0]["temperature"] is None
    assert rows[0]["flags"] == "fano=undefined"
    assert rows[1]["temperature"] == 0.25
