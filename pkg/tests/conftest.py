"""Shared fixtures."""

import numpy as np
import pytest

from isospectral.config import settings
from isospectral.models import ToleranceProfile
from isospectral.numerics import uniform_rule
from isospectral.repositories.state import StateRepository


@pytest.fixture
def states() -> StateRepository:
    return StateRepository()


@pytest.fixture
def fast_profile(monkeypatch: pytest.MonkeyPatch) -> None:
    """Run a test under the coarse numerics profile."""
    monkeypatch.setattr(settings, "tolerance_profile", ToleranceProfile.FAST)


@pytest.fixture
def fine_rule():
    """Trapezoid rule independent of the active profile."""
    return uniform_rule(16.0, 0.005)


@pytest.fixture
def x_grid() -> np.ndarray:
    return np.linspace(-4.0, 4.0, 81)
