"""Repository for oscillator states and their derived quantities."""

from functools import lru_cache

import numpy as np

from isospectral.measures import quadrature_moments
from isospectral.models import MomentSet, OscillatorState
from isospectral.states import make_state, photon_distribution


class StateRepository:
    """Cached states, moments and photon-number distributions keyed by (lambda, T)."""

    def __init__(self, maxsize: int = 512) -> None:
        self.maxsize = maxsize
        self._state = lru_cache(maxsize=maxsize)(make_state)
        self._moments = lru_cache(maxsize=maxsize)(self._build_moments)
        self._photons = lru_cache(maxsize=maxsize)(self._build_photons)

    def get(self, lam: float, temperature: float | None = None) -> OscillatorState:
        """Return the ground state (T is None) or the Gibbs state at (lambda, T)."""
        return self._state(float(lam), temperature)

    def moments(self, lam: float, temperature: float | None = None) -> MomentSet:
        """Return the quadrature moments of a state."""
        return self._moments(float(lam), temperature)

    def photon_distribution(self, lam: float, temperature: float | None = None) -> np.ndarray:
        """Return p(n) of a state."""
        return self._photons(float(lam), temperature)

    def _build_moments(self, lam: float, temperature: float | None) -> MomentSet:
        return quadrature_moments(self.get(lam, temperature))

    def _build_photons(self, lam: float, temperature: float | None) -> np.ndarray:
        return photon_distribution(self.get(lam, temperature))


_shared = StateRepository()


async def provide_state_repo() -> StateRepository:
    """Provide the process-wide state repository."""
    return _shared
