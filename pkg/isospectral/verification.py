"""Acceptance checks run by ``isospectral verify``."""

import logging
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from isospectral import estimation, measures
from isospectral.errors import IsospectralError
from isospectral.models import CheckResult, Measure, MeasureReport, SweepPoint
from isospectral.numerics import position_rule
from isospectral.repositories.report import ReportRepository
from isospectral.repositories.state import StateRepository
from isospectral.states import gibbs_weights, ground_state, photon_distribution, thermal_state
from isospectral.susy import eigenfunctions, hamiltonian_residual

logger = logging.getLogger(__name__)

THERMAL_TEMPERATURES = (0.25, 0.33, 0.5)


@dataclass(frozen=True)
class VerifyGrids:
    """Grid sizes of one verification run."""

    ground_count: int
    wigner_count: int
    optimality_lambdas: tuple[float, ...]
    thermal_lambdas: tuple[float, ...]
    squeeze_count: int
    fano_xtol: float
    fano_samples: int


@dataclass(frozen=True)
class FanoScan:
    """Where F(lambda) crosses 1 on a sampled range, and its smallest sampled value."""

    crossing: float | None
    lowest: float
    lowest_at: float

    def crosses_within(self, lo: float, hi: float) -> bool:
        return self.crossing is not None and lo <= self.crossing <= hi

    def __str__(self) -> str:
        if self.crossing is None:
            return f"no crossing, min F {self.lowest:.4f} at lambda {self.lowest_at:.0f}"
        return f"crossing at lambda {self.crossing:.1f}"


FULL = VerifyGrids(61, 16, tuple(np.geomspace(1e-2, 1e3, 10)), (1.0, 10.0, 100.0), 25, 1.0, 11)
QUICK = VerifyGrids(25, 10, (0.0, 1.0, 10.0, 100.0), (10.0,), 9, 5.0, 5)


class Verifier:
    """Shares one report cache across the checks of a run."""

    def __init__(self, grids: VerifyGrids) -> None:
        self.grids = grids
        self.states = StateRepository(maxsize=4096)
        self.reports = ReportRepository(self.states)
        self._ground: list[MeasureReport] | None = None

    def ground_sweep(self) -> list[MeasureReport]:
        if self._ground is None:
            lambdas = np.geomspace(1e-2, 1e3, self.grids.ground_count)
            self._ground = [
                self.reports.evaluate(SweepPoint(float(lam)), (Measure.MOMENTS, Measure.NONG, Measure.QCS))
                for lam in lambdas
            ]
        return self._ground

    def closed_form_qfi(self) -> CheckResult:
        errors = [
            abs(estimation.qfi_pure(lam).value / estimation.qfi_closed_form(lam) - 1.0)
            for lam in (0.0, 0.1, 1.0, 10.0, 100.0, 1e3)
        ]
        worst = max(errors)
        return CheckResult("closed-form-qfi", worst <= 1e-6, f"max relative error {worst:.3e}")

    def position_optimality(self) -> CheckResult:
        ground = max(abs(estimation.position_optimality_residual(lam)) for lam in self.grids.optimality_lambdas)
        thermal = np.array(
            [
                estimation.position_optimality_residual(lam, t)
                for t in THERMAL_TEMPERATURES
                for lam in self.grids.thermal_lambdas
            ]
        )
        bounded = bool(np.all(thermal >= -1e-6))
        return CheckResult(
            "position-optimality",
            ground <= 1e-4 and float(np.max(np.abs(thermal))) <= 1e-3,
            f"ground residual {ground:.3e}, thermal (H - F)/H in [{thermal.min():.3e}, {thermal.max():.3e}], "
            f"F <= H {'everywhere' if bounded else 'violated'}",
        )

    def nong_curve(self) -> CheckResult:
        reports = self.ground_sweep()
        lam = np.array([r.lam for r in reports])
        delta = np.array([r.delta_nong for r in reports])
        peak = int(np.argmax(delta))
        interior = 0 < peak < lam.size - 1
        maxima = int(np.sum((delta[1:-1] > delta[:-2]) & (delta[1:-1] > delta[2:])))
        small = (lam >= 1e-2) & (lam <= 0.3) & (delta > 0)
        slope = float(np.polyfit(np.log(lam[small]), np.log(delta[small]), 1)[0])
        passed = (
            interior
            and maxima == 1
            and 0.23 <= delta[peak] <= 0.29
            and 55 <= lam[peak] <= 90
            and abs(slope - 2.0) <= 0.1
        )
        return CheckResult(
            "nong-curve",
            bool(passed),
            f"max {delta[peak]:.4f} at lambda {lam[peak]:.1f}, small-lambda slope {slope:.3f}",
        )

    def _fano_scan(self, temperature: float | None, lo: float, hi: float) -> FanoScan:
        def excess(lam: float) -> float:
            return measures.fano_factor(self.states.get(lam, temperature)) - 1.0

        lambdas = np.geomspace(lo, hi, self.grids.fano_samples)
        values = np.array([excess(float(lam)) for lam in lambdas])
        lowest = int(np.argmin(values))
        changes = np.flatnonzero(np.sign(values[:-1]) != np.sign(values[1:]))
        crossing = None
        if changes.size:
            i = int(changes[0])
            crossing = float(optimize.brentq(excess, lambdas[i], lambdas[i + 1], xtol=self.grids.fano_xtol))
        return FanoScan(crossing, float(values[lowest] + 1.0), float(lambdas[lowest]))

    def fano_thresholds(self) -> CheckResult:
        ground = self._fano_scan(None, 100.0, 600.0)
        thermal = self._fano_scan(0.25, 500.0, 1500.0)
        passed = ground.crosses_within(285, 345) and thermal.crosses_within(765, 1035)
        return CheckResult("fano-thresholds", passed, f"ground: {ground}; T=0.25: {thermal}")

    def squeezing(self) -> CheckResult:
        ground = max(r.var_x for r in self.ground_sweep())
        limit = abs(self.states.moments(1e-3).var_x - 0.5)
        lambdas = np.geomspace(1e-2, 1e3, self.grids.squeeze_count)
        cold = min(self.states.moments(float(lam), 0.25).var_x for lam in lambdas)
        hot = min(self.states.moments(float(lam), 0.5).var_x for lam in lambdas)
        return CheckResult(
            "squeezing",
            ground < 0.5 and limit <= 1e-6 and cold < 0.5 and hot > 0.5,
            f"ground max VarX {ground:.6f}, |VarX(1e-3) - 1/2| {limit:.2e}, "
            f"T=0.25 min VarX {cold:.6f}, T=0.5 min VarX {hot:.6f}",
        )

    def wigner(self) -> CheckResult:
        vacuum = measures.wigner_negativity(ground_state(0.0))
        lambdas = np.geomspace(1.0, 1e3, self.grids.wigner_count)
        nu = np.array([measures.wigner_negativity(self.states.get(float(lam))) for lam in lambdas])
        peak = int(np.argmax(nu))
        # three points rising into the peak and three falling out of it, peak included
        rises = peak >= 2 and bool(np.all(np.diff(nu[peak - 2 : peak + 1]) > 0))
        falls = peak <= nu.size - 3 and bool(np.all(np.diff(nu[peak : peak + 3]) < 0))
        state = self.states.get(10.0)
        field = measures.wigner(state)
        phi = eigenfunctions(0, state.lam, field.grid.xs)[0]
        marginal = float(np.max(np.abs(measures.wigner_marginal(field) - phi**2)))
        return CheckResult(
            "wigner",
            vacuum <= 1e-5 and rises and falls and marginal <= 1e-5,
            f"vacuum negativity {vacuum:.2e}, peak at lambda {lambdas[peak]:.1f}, marginal error {marginal:.2e}",
        )

    def coherence_scale(self) -> CheckResult:
        vacuum = abs(measures.qcs(ground_state(0.0)) - 1.0)
        values = np.array([r.qcs_variance for r in self.ground_sweep()])
        increasing = bool(np.all(np.diff(values) > 0))
        return CheckResult(
            "qcs",
            vacuum <= 1e-6 and increasing,
            f"|C(0) - 1| {vacuum:.2e}, monotone {'yes' if increasing else 'no'}",
        )

    def thermal_ordering(self) -> CheckResult:
        deltas = [
            measures.nong_delta(self.states.get(50.0, t), self.states.moments(50.0, t)) for t in (0.5, 0.33, 0.25, None)
        ]
        ordered = all(a > b for a, b in zip(deltas, deltas[1:]))
        return CheckResult("thermal-nong-ordering", ordered, "delta at lambda 50: " + ", ".join(f"{d:.5f}" for d in deltas))

    def structure(self) -> CheckResult:
        rule = position_rule(8)
        orthonormality = 0.0
        for lam in (1.0, 10.0, 100.0):
            phi = eigenfunctions(8, lam, rule.nodes)
            gram = (phi * rule.weights) @ phi.T
            orthonormality = max(orthonormality, float(np.max(np.abs(gram - np.eye(9)))))
        residual = max(hamiltonian_residual(n, lam) for n in range(6) for lam in (1.0, 10.0))
        moments = [self.states.moments(r.lam) for r in self.ground_sweep()]
        heisenberg = min(m.var_x * m.var_p - m.covariance**2 for m in moments)
        normalisation = max(
            abs(float(np.sum(photon_distribution(state))) - 1.0)
            for state in (ground_state(1.0), ground_state(10.0), ground_state(100.0), thermal_state(10.0, 0.25))
        )
        normalisation = max(normalisation, max(abs(gibbs_weights(t).probabilities.sum() - 1.0) for t in THERMAL_TEMPERATURES))
        return CheckResult(
            "structure",
            orthonormality <= 1e-8 and residual <= 1e-6 and heisenberg >= 0.25 - 1e-9 and normalisation <= 1e-6,
            f"orthonormality {orthonormality:.2e}, eigen-residual {residual:.2e}, "
            f"min det sigma {heisenberg:.6f}, normalisation {normalisation:.2e}",
        )

    def signal_to_noise(self) -> CheckResult:
        value = estimation.signal_to_noise(1e4)
        error = abs(value * 3.0 - 1.0)
        return CheckResult("signal-to-noise", error <= 0.01, f"lambda^2 H at 1e4 = {value:.6f}")

    def checks(self) -> list[Callable[[], CheckResult]]:
        return [
            self.closed_form_qfi,
            self.position_optimality,
            self.nong_curve,
            self.fano_thresholds,
            self.squeezing,
            self.wigner,
            self.coherence_scale,
            self.thermal_ordering,
            self.structure,
            self.signal_to_noise,
        ]


def run_checks(quick: bool = False) -> list[CheckResult]:
    verifier = Verifier(QUICK if quick else FULL)
    results = []
    for check in verifier.checks():
        try:
            result = check()
        except IsospectralError as exc:
            result = CheckResult(check.__name__.replace("_", "-"), False, f"raised {type(exc).__name__}: {exc}")
        logger.info("%s: %s", result.name, "pass" if result.passed else "FAIL")
        results.append(result)
    return results


def format_results(results: list[CheckResult]) -> str:
    lines = [f"{'PASS' if r.passed else 'FAIL'}  {r.name:<22} {r.detail}" for r in results]
    passed = sum(r.passed for r in results)
    lines.append(f"{passed}/{len(results)} checks passed")
    return "\n".join(lines)
