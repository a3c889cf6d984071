"""Data tables behind each figure of the ground- and thermal-state analyses."""

from dataclasses import dataclass

import numpy as np
import pandas as pd

from isospectral.config import SweepConfig
from isospectral.models import FigureTag, Measure
from isospectral.repositories.report import reports_frame
from isospectral.states import ground_state, photon_distribution
from isospectral.susy import excited_wavefunction, ground_wavefunction, isospectral_potential
from isospectral.sweep import run_sweep

THERMAL_TEMPERATURES = (0.25, 0.33, 0.5)
POTENTIAL_LAMBDAS = (0.0, 10.0, 1e3, 1e5)
PHOTON_LAMBDA = 500.0


@dataclass(frozen=True)
class FigureSweep:
    """A figure drawn from a (T, lambda) sweep."""

    title: str
    measures: tuple[Measure, ...]
    columns: tuple[str, ...]
    temps: tuple[float, ...] = ()
    include_ground: bool = True
    lambda_min: float = 1e-2
    lambda_max: float = 1e3


FIGURE_SWEEPS: dict[FigureTag, FigureSweep] = {
    FigureTag.GNONG: FigureSweep(
        "GNONG: relative-entropy non-Gaussianity of the ground state",
        (Measure.NONG,),
        ("lam", "delta_nong"),
    ),
    FigureTag.SQZ_FIG: FigureSweep(
        "SqzFig: quadrature variances and uncertainty product of the ground state",
        (Measure.MOMENTS,),
        ("lam", "var_x", "var_p", "uncertainty_product"),
    ),
    FigureTag.GNONC: FigureSweep(
        "GNONC: Fano factor, Wigner negativity and quadrature coherence scale of the ground state",
        (Measure.FANO, Measure.WIGNER, Measure.QCS),
        ("lam", "fano", "wigner_negativity", "qcs_variance", "qcs_kernel"),
    ),
    FigureTag.TNONG: FigureSweep(
        "TNONG: relative-entropy non-Gaussianity of thermal states with the ground-state baseline",
        (Measure.NONG,),
        ("temperature", "lam", "delta_nong"),
        temps=THERMAL_TEMPERATURES,
    ),
    FigureTag.SQUEE: FigureSweep(
        "Squee: squeezing quadrature of thermal states",
        (Measure.MOMENTS,),
        ("temperature", "lam", "var_x", "var_p"),
        temps=THERMAL_TEMPERATURES,
        include_ground=False,
    ),
    FigureTag.NONC01: FigureSweep(
        "NONC01: Fano factor, Wigner negativity and quadrature coherence scale of thermal states",
        (Measure.FANO, Measure.WIGNER, Measure.QCS),
        ("temperature", "lam", "fano", "wigner_negativity", "qcs_variance", "qcs_kernel"),
        temps=THERMAL_TEMPERATURES,
        include_ground=False,
        lambda_max=2e3,
    ),
    FigureTag.TQFI: FigureSweep(
        "TQFI: quantum Fisher information of ground and thermal states",
        (Measure.QFI,),
        ("temperature", "lam", "qfi"),
        temps=THERMAL_TEMPERATURES,
    ),
}


def potentials_table(x: np.ndarray | None = None) -> pd.DataFrame:
    """Isospectral potentials with the ground and first excited states on [-5, 5] for a few lambda."""
    x = np.linspace(-5.0, 5.0, 401) if x is None else x
    frames = [
        pd.DataFrame(
            {
                "lam": lam,
                "x": x,
                "potential": isospectral_potential(lam, x),
                "ground_wavefunction": ground_wavefunction(lam, x),
                "first_excited_wavefunction": excited_wavefunction(1, lam, x),
            }
        )
        for lam in POTENTIAL_LAMBDAS
    ]
    return pd.concat(frames, ignore_index=True)


def photon_table(lam: float = PHOTON_LAMBDA) -> pd.DataFrame:
    distribution = photon_distribution(ground_state(lam))
    return pd.DataFrame({"n": np.arange(distribution.size), "probability": distribution})


def figure_table(tag: FigureTag | str, threads: int = 1, lambda_count: int = 61) -> tuple[str, pd.DataFrame]:
    """Title and data rows of a figure."""
    tag = FigureTag(tag)
    if tag is FigureTag.ISO_SHO:
        return "isoSHO: isospectral potentials, ground and first excited states", potentials_table()
    if tag is FigureTag.PN_DIST:
        return f"PNdist: photon-number distribution of the ground state at lambda={PHOTON_LAMBDA:g}", photon_table()
    recipe = FIGURE_SWEEPS[tag]
    config = SweepConfig(
        lambda_min=recipe.lambda_min,
        lambda_max=recipe.lambda_max,
        lambda_count=lambda_count,
        temps=list(recipe.temps),
        include_ground=recipe.include_ground,
        measures=list(recipe.measures),
        threads=threads,
    )
    frame = reports_frame(list(run_sweep(config)))
    return recipe.title, frame[[*recipe.columns, "flags"]]
