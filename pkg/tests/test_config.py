import numpy as np
import pytest

from isospectral.config import TOLERANCE_PROFILES, SweepConfig, get_profile, logging_config, settings
from isospectral.errors import ConfigError
from isospectral.models import Measure, OutputFormat, ToleranceProfile


def test_profiles_are_ordered_by_strictness():
    strict, default, fast = (TOLERANCE_PROFILES[p] for p in ToleranceProfile)
    assert strict.rel_tol < default.rel_tol < fast.rel_tol
    assert strict.grid_spacing < default.grid_spacing < fast.grid_spacing


def test_get_profile_follows_settings(fast_profile):
    assert get_profile() is TOLERANCE_PROFILES[ToleranceProfile.FAST]
    assert get_profile("strict") is TOLERANCE_PROFILES[ToleranceProfile.STRICT]


def test_settings_defaults():
    assert settings.threads >= 1
    assert settings.tolerance_profile in ToleranceProfile


def test_logging_config_uses_requested_level():
    config = logging_config("debug")
    assert config.loggers["isospectral"]["level"] == "DEBUG"
    assert config.formatters["generic"]["format"].startswith("%(levelname)")


def test_sweep_defaults():
    config = SweepConfig.load(threads=1)
    grid = config.lambda_grid()
    assert grid.size == 61
    assert grid[0] == pytest.approx(1e-2)
    assert grid[-1] == pytest.approx(1e3)
    assert np.allclose(np.diff(np.log(grid)), np.log(1e5) / 60)
    assert config.include_ground
    assert config.measures == list(Measure)
    assert config.format is OutputFormat.CSV


def test_linear_grid_and_single_point():
    assert np.allclose(SweepConfig.load(lambda_min=0, lambda_max=1, lambda_count=3, lambda_log=False).lambda_grid(), [0, 0.5, 1])
    assert SweepConfig.load(lambda_min=5, lambda_max=5, lambda_count=1).lambda_grid().tolist() == [5.0]


def test_config_file_and_flag_precedence(tmp_path):
    path = tmp_path / "sweep.cfg"
    path.write_text(
        "lambda_min=1\nlambda_max=10\nlambda_count=3\ntemps=0.25,0.5\nmeasures=qfi,nong\ninclude_ground=false\n",
        encoding="utf-8",
    )
    config = SweepConfig.load(path)
    assert config.temps == [0.25, 0.5]
    assert config.measures == [Measure.QFI, Measure.NONG]
    assert not config.include_ground
    assert config.lambda_count == 3
    assert SweepConfig.load(path, lambda_count=4, temps=None).lambda_count == 4


def test_unknown_config_key(tmp_path):
    path = tmp_path / "sweep.cfg"
    path.write_text("lambda_min=1\nresolution=high\n", encoding="utf-8")
    with pytest.raises(ConfigError):
        SweepConfig.load(path)


def test_missing_config_file(tmp_path):
    with pytest.raises(ConfigError):
        SweepConfig.load(tmp_path / "absent.cfg")


@pytest.mark.parametrize(
    "flags",
    [
        {"lambda_min": -1.0, "lambda_max": 1.0, "lambda_log": False},
        {"lambda_min": 0.0, "lambda_max": 1.0},
        {"lambda_min": 10.0, "lambda_max": 1.0},
        {"lambda_count": 0},
        {"temps": [0.5, -0.1]},
        {"include_ground": False},
        {"measures": "entanglement"},
        {"threads": 0},
    ],
)
def test_invalid_sweeps_are_rejected(flags):
    with pytest.raises(ConfigError):
        SweepConfig.load(**flags)
