"""Domain models for the isospectral oscillator toolkit."""

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from isospectral.errors import DomainError

# Eigenfunctions are square-integrable only above this value.
LAMBDA_FLOOR = -1.0 / math.sqrt(2.0)


class QuadratureKind(str, Enum):
    """How a quadrature rule was built."""

    GAUSS_HERMITE = "gauss-hermite"
    COMPOSITE_ADAPTIVE = "composite-adaptive"
    UNIFORM = "uniform"


class StateKind(str, Enum):
    """Ground or Gibbs state."""

    GROUND = "ground"
    THERMAL = "thermal"


class FisherMethod(str, Enum):
    """How a Fisher information value was obtained."""

    CLOSED_FORM = "closed-form"
    PURE_OVERLAP = "pure-overlap"
    MIXED_SUM = "mixed-sum"
    CLASSICAL_POSITION = "classical-position"


class Measure(str, Enum):
    """Measure tags accepted by sweeps."""

    MOMENTS = "moments"
    NONG = "nong"
    FANO = "fano"
    WIGNER = "wigner"
    QCS = "qcs"
    QFI = "qfi"
    CFI = "cfi"


class FigureTag(str, Enum):
    """Figures whose data can be regenerated."""

    ISO_SHO = "isoSHO"
    GNONG = "GNONG"
    SQZ_FIG = "SqzFig"
    GNONC = "GNONC"
    TNONG = "TNONG"
    SQUEE = "Squee"
    NONC01 = "NONC01"
    TQFI = "TQFI"
    PN_DIST = "PNdist"


class OutputFormat(str, Enum):
    """Serialisation formats for sweep and figure tables."""

    CSV = "csv"
    JSONL = "jsonl"


class ToleranceProfile(str, Enum):
    """Named numerics profiles."""

    STRICT = "strict"
    DEFAULT = "default"
    FAST = "fast"


@dataclass(frozen=True)
class Tolerance:
    """Error budget of a quadrature."""

    abs_tol: float
    rel_tol: float
    max_subdivisions: int

    def __post_init__(self) -> None:
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise DomainError("Tolerances must be strictly positive")
        if self.max_subdivisions < 1:
            raise DomainError("max_subdivisions must be at least 1")

    def bound(self, value: float) -> float:
        """Admissible error for an estimate of the given size."""
        return max(self.abs_tol, self.rel_tol * abs(value))


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Nodes and weights of a fixed rule; reused across many integrands."""

    nodes: np.ndarray
    weights: np.ndarray
    kind: QuadratureKind

    def __post_init__(self) -> None:
        if self.nodes.shape != self.weights.shape or self.nodes.ndim != 1:
            raise DomainError("nodes and weights must be 1-D arrays of equal length")
        if self.nodes.size > 1 and not np.all(np.diff(self.nodes) > 0):
            raise DomainError("quadrature nodes must be strictly increasing")
        if not np.all(self.weights > 0):
            raise DomainError("quadrature weights must be positive")

    @property
    def size(self) -> int:
        return int(self.nodes.size)

    def integrate(self, values: np.ndarray) -> np.ndarray | float:
        """Apply the rule along the last axis of ``values``."""
        return values @ self.weights


@dataclass(frozen=True)
class QuadratureResult:
    """An integral estimate with its error budget and provenance."""

    value: float
    error: float
    converged: bool
    method: str
    evaluations: int = 0


@dataclass(frozen=True)
class DeformationParameter:
    """The real index of the isospectral family (hbar = omega = m = 1)."""

    value: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.value) or self.value <= LAMBDA_FLOOR:
            raise DomainError(f"lambda must be finite and > -1/sqrt(2), got {self.value!r}")

    @classmethod
    def of(cls, lam: "float | DeformationParameter") -> "DeformationParameter":
        return lam if isinstance(lam, cls) else cls(float(lam))

    @property
    def scaled(self) -> float:
        """sqrt(2) * lambda, the combination every closed form uses."""
        return math.sqrt(2.0) * self.value

    def __float__(self) -> float:
        return self.value


@dataclass(frozen=True)
class WavefunctionSample:
    """One amplitude of an eigenfunction."""

    x: float
    value: float
    n: int
    lam: DeformationParameter


@dataclass(frozen=True, eq=False)
class GibbsWeights:
    """Raw (not renormalised) Gibbs populations of the equally spaced spectrum."""

    probabilities: np.ndarray
    partition: float
    temperature: float

    @property
    def n_cut(self) -> int:
        return int(self.probabilities.size - 1)

    @property
    def deficit(self) -> float:
        """Weight left out by the truncation."""
        return float(max(0.0, 1.0 - self.probabilities.sum()))


@dataclass(frozen=True, eq=False)
class OscillatorState:
    """Ground state at lambda, or Gibbs state at (lambda, T) truncated at n_cut."""

    lam: DeformationParameter
    kind: StateKind
    temperature: float | None = None
    n_cut: int | None = None
    weights: GibbsWeights | None = None

    def __post_init__(self) -> None:
        thermal = self.kind is StateKind.THERMAL
        if thermal != (self.temperature is not None) or thermal != (self.n_cut is not None):
            raise DomainError("temperature and n_cut are present if and only if the state is thermal")
        if thermal and self.weights is None:
            raise DomainError("a thermal state needs its Gibbs weights")

    @property
    def is_pure(self) -> bool:
        return self.kind is StateKind.GROUND

    @property
    def populations(self) -> np.ndarray:
        """Level populations p_k for k = 0..n_max."""
        if self.weights is None:
            return np.ones(1)
        return self.weights.probabilities

    @property
    def n_max(self) -> int:
        return self.populations.size - 1


@dataclass(frozen=True, eq=False)
class FockOverlapMatrix:
    """c[m][n] = <m|phi_n(lambda)> against SHO number states."""

    entries: np.ndarray
    m_cut: int
    n_cut: int
    lam: DeformationParameter
    converged: bool = True

    @property
    def column_norms(self) -> np.ndarray:
        return np.sqrt(np.sum(self.entries**2, axis=0))

    @property
    def norm_deficit(self) -> float:
        return float(np.max(np.abs(1.0 - self.column_norms**2)))


@dataclass(frozen=True, eq=False)
class PositionKernel:
    """Density matrix rho(x, x') sampled on the nodes of a rule."""

    rule: QuadratureRule
    values: np.ndarray

    @property
    def grid(self) -> np.ndarray:
        return self.rule.nodes

    @property
    def trace(self) -> float:
        return float(self.rule.integrate(np.diag(self.values)))

    @property
    def purity(self) -> float:
        w = self.rule.weights
        return float(w @ (self.values**2) @ w)


@dataclass(frozen=True)
class PhaseSpaceGrid:
    """Rectangular (x, p) grid, endpoints included."""

    x_min: float
    x_max: float
    p_min: float
    p_max: float
    x_points: int
    p_points: int

    def __post_init__(self) -> None:
        if not all(map(math.isfinite, (self.x_min, self.x_max, self.p_min, self.p_max))):
            raise DomainError("phase-space grid extents must be finite")
        if self.x_max <= self.x_min or self.p_max <= self.p_min:
            raise DomainError("phase-space grid extents must be non-empty")
        if self.x_points < 2 or self.p_points < 2:
            raise DomainError("phase-space grid needs at least two points per axis")

    @classmethod
    def square(cls, half_width: float, points: int) -> "PhaseSpaceGrid":
        return cls(-half_width, half_width, -half_width, half_width, points, points)

    @property
    def xs(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.x_points)

    @property
    def ps(self) -> np.ndarray:
        return np.linspace(self.p_min, self.p_max, self.p_points)

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / (self.x_points - 1)

    @property
    def dp(self) -> float:
        return (self.p_max - self.p_min) / (self.p_points - 1)

    def refined(self) -> "PhaseSpaceGrid":
        """Same extents, halved spacings; every old node is kept."""
        return PhaseSpaceGrid(
            self.x_min,
            self.x_max,
            self.p_min,
            self.p_max,
            2 * self.x_points - 1,
            2 * self.p_points - 1,
        )


@dataclass(frozen=True)
class MomentSet:
    """First and second moments of the quadratures."""

    mean_x: float
    mean_p: float
    xx: float
    pp: float
    xp_sym: float

    @property
    def var_x(self) -> float:
        return self.xx - self.mean_x**2

    @property
    def var_p(self) -> float:
        return self.pp - self.mean_p**2

    @property
    def covariance(self) -> float:
        return self.xp_sym - self.mean_x * self.mean_p


@dataclass(frozen=True, eq=False)
class CovarianceMatrix:
    """2x2 quadrature covariance matrix and the first-moment pair."""

    matrix: np.ndarray
    first_moments: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self) -> None:
        if self.matrix.shape != (2, 2) or not np.allclose(self.matrix, self.matrix.T, rtol=0.0, atol=1e-12):
            raise DomainError("covariance matrix must be 2x2 and symmetric")

    @property
    def det(self) -> float:
        return float(np.linalg.det(self.matrix))


@dataclass(frozen=True, eq=False)
class WignerField:
    """W(x, p) sampled on a phase-space grid, rows along x."""

    grid: PhaseSpaceGrid
    values: np.ndarray


@dataclass(frozen=True)
class FisherResult:
    """A Fisher information value with its provenance."""

    value: float
    method: FisherMethod
    lam: float
    temperature: float | None = None
    n_cut: int | None = None
    converged: bool = True
    discrepancy: float = 0.0


@dataclass(frozen=True, eq=False)
class DerivativeOverlaps:
    """matrix[m][n] = <phi_m|d phi_n/d lambda> for m, n <= n_cut, and the norms ||d phi_n/d lambda||^2."""

    matrix: np.ndarray
    norms: np.ndarray

    @property
    def tail(self) -> np.ndarray:
        """Weight of each derivative outside the kept levels, by completeness."""
        return np.clip(self.norms - np.sum(self.matrix**2, axis=0), 0.0, None)


@dataclass(frozen=True)
class SweepPoint:
    """One (lambda, T) cell; T is None for the ground state."""

    lam: float
    temperature: float | None = None


@dataclass
class MeasureReport:
    """Every measure computed for one (lambda, T) point.

    Values are None when not requested or undefined; the reason is in ``flags``.
    """

    lam: float
    temperature: float | None = None
    var_x: float | None = None
    var_p: float | None = None
    uncertainty_product: float | None = None
    delta_nong: float | None = None
    fano: float | None = None
    wigner_negativity: float | None = None
    qcs_variance: float | None = None
    qcs_kernel: float | None = None
    qfi: float | None = None
    classical_fi: float | None = None
    flags: dict[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class PhotonStatistics:
    """Photon-number distribution of a state with its first two moments."""

    lam: float
    temperature: float | None
    probabilities: list[float]
    mean: float
    second_moment: float
    converged: bool


@dataclass(frozen=True)
class BoundReport:
    """Quantum Cramer-Rao bound for M repetitions."""

    lam: float
    temperature: float | None
    repetitions: int
    qfi: float
    variance_bound: float
    signal_to_noise: float


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one acceptance check."""

    name: str
    passed: bool
    detail: str
