"""Application configuration using Pydantic Settings."""

import math
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Annotated

import numpy as np
from litestar.logging.config import LoggingConfig
from pydantic import Field, ValidationError, field_validator, model_validator
from pydantic_settings import BaseSettings, NoDecode, PydanticBaseSettingsSource, SettingsConfigDict

from isospectral.errors import ConfigError
from isospectral.models import LAMBDA_FLOOR, Measure, OutputFormat, Tolerance, ToleranceProfile


class Settings(BaseSettings):
    """Main application settings."""

    debug: bool = False
    log_level: str = "INFO"
    tolerance_profile: ToleranceProfile = ToleranceProfile.DEFAULT
    threads: int = Field(default_factory=lambda: os.process_cpu_count() or 1)
    host: str = "127.0.0.1"
    port: int = 8000

    model_config = SettingsConfigDict(
        env_prefix="ISOSPECTRAL_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )


settings = Settings()  # type: ignore

LOG_FORMAT = "%(levelname)-5.5s [%(name)s] %(message)s"


def logging_config(level: str | None = None) -> LoggingConfig:
    """Console logging shared by the CLI and the HTTP app; records go to stderr."""
    level = (level or settings.log_level).upper()
    return LoggingConfig(
        formatters={"generic": {"format": LOG_FORMAT}},
        handlers={"console": {"class": "logging.StreamHandler", "formatter": "generic"}},
        root={"level": "WARNING", "handlers": ["console"]},
        loggers={"isospectral": {"level": level, "handlers": ["console"], "propagate": False}},
        log_exceptions="debug",
    )


@dataclass(frozen=True)
class NumericsProfile:
    """Numerical knobs shared by every module."""

    abs_tol: float
    rel_tol: float
    max_subdivisions: int
    abs_tol_2d: float
    rel_tol_2d: float
    max_refinements_2d: int
    grid_spacing: float
    kernel_spacing: float
    wigner_points: int
    fock_cap: int
    gibbs_tail: float

    def tolerance(self) -> Tolerance:
        return Tolerance(self.abs_tol, self.rel_tol, self.max_subdivisions)

    def tolerance_2d(self) -> Tolerance:
        return Tolerance(self.abs_tol_2d, self.rel_tol_2d, self.max_refinements_2d)


TOLERANCE_PROFILES: dict[ToleranceProfile, NumericsProfile] = {
    ToleranceProfile.STRICT: NumericsProfile(
        abs_tol=1e-12,
        rel_tol=1e-10,
        max_subdivisions=400,
        abs_tol_2d=1e-8,
        rel_tol_2d=1e-8,
        max_refinements_2d=3,
        grid_spacing=0.01,
        kernel_spacing=0.02,
        wigner_points=1201,
        fock_cap=400,
        gibbs_tail=1e-14,
    ),
    ToleranceProfile.DEFAULT: NumericsProfile(
        abs_tol=1e-10,
        rel_tol=1e-8,
        max_subdivisions=200,
        abs_tol_2d=1e-7,
        rel_tol_2d=1e-6,
        max_refinements_2d=2,
        grid_spacing=0.02,
        kernel_spacing=0.025,
        wigner_points=801,
        fock_cap=400,
        gibbs_tail=1e-12,
    ),
    ToleranceProfile.FAST: NumericsProfile(
        abs_tol=1e-8,
        rel_tol=1e-6,
        max_subdivisions=100,
        abs_tol_2d=1e-5,
        rel_tol_2d=1e-5,
        max_refinements_2d=1,
        grid_spacing=0.04,
        kernel_spacing=0.05,
        wigner_points=401,
        fock_cap=400,
        gibbs_tail=1e-11,
    ),
}


def get_profile(name: ToleranceProfile | str | None = None) -> NumericsProfile:
    """Profile by name, defaulting to ISOSPECTRAL_TOLERANCE_PROFILE."""
    return TOLERANCE_PROFILES[ToleranceProfile(name or settings.tolerance_profile)]


class SweepConfig(BaseSettings):
    """Parameters of one sweep, read from a flat key=value file and command-line flags."""

    lambda_min: float = 1e-2
    lambda_max: float = 1e3
    lambda_count: int = 61
    lambda_log: bool = True
    temps: Annotated[list[float], NoDecode] = []
    include_ground: bool = True
    measures: Annotated[list[Measure], NoDecode] = list(Measure)
    out: Path | None = None
    format: OutputFormat = OutputFormat.CSV
    threads: int = Field(default_factory=lambda: settings.threads)
    no_timestamp: bool = False

    model_config = SettingsConfigDict(extra="forbid", case_sensitive=False)

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls: type[BaseSettings],
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,
    ) -> tuple[PydanticBaseSettingsSource, ...]:
        # flags (init kwargs) win over the config file; the environment is not consulted
        return init_settings, dotenv_settings

    @field_validator("temps", "measures", mode="before")
    @classmethod
    def _split_list(cls, value: object) -> object:
        if isinstance(value, str):
            return [item.strip() for item in value.split(",") if item.strip()]
        return value

    @model_validator(mode="after")
    def _check_grid(self) -> "SweepConfig":
        if self.lambda_count < 1:
            raise ValueError("lambda_count must be at least 1")
        if self.lambda_min > self.lambda_max:
            raise ValueError("lambda_min must not exceed lambda_max")
        if self.lambda_min <= LAMBDA_FLOOR:
            raise ValueError("every lambda must be > -1/sqrt(2)")
        if self.lambda_log and self.lambda_min <= 0:
            raise ValueError("a log-spaced lambda grid needs lambda_min > 0")
        if any(not (t > 0 and math.isfinite(t)) for t in self.temps):
            raise ValueError("temperatures must be positive")
        if not self.temps and not self.include_ground:
            raise ValueError("the sweep has no temperature and excludes the ground state")
        if not self.measures:
            raise ValueError("at least one measure is required")
        if self.threads < 1:
            raise ValueError("threads must be at least 1")
        return self

    @classmethod
    def load(cls, path: Path | None = None, **flags: object) -> "SweepConfig":
        """Build from an optional config file; flags that are None are left to the file."""
        if path is not None and not Path(path).is_file():
            raise ConfigError(f"config file not found: {path}")
        overrides = {key: value for key, value in flags.items() if value is not None}
        try:
            return cls(_env_file=path, **overrides)  # type: ignore[call-arg]
        except ValidationError as exc:
            raise ConfigError(str(exc)) from exc

    def lambda_grid(self) -> np.ndarray:
        if self.lambda_count == 1:
            return np.array([self.lambda_min])
        if self.lambda_log:
            return np.geomspace(self.lambda_min, self.lambda_max, self.lambda_count)
        return np.linspace(self.lambda_min, self.lambda_max, self.lambda_count)
