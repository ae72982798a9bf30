"""Problem abstractions, constraint sets, gradient oracles, and solver configuration.

The central object is :class:`MinimaxProblem`, a bundle of deterministic
oracles for the saddle objective f(x, y) together with declared smoothness /
concavity constants and a bounded convex constraint set for the ascent
variable.  Stochastic gradient access is layered on top via
:class:`StochasticOracle`, which adds isotropic Gaussian noise with an
explicitly threaded :class:`numpy.random.Generator` so that every run is
reproducible from its seed.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

__all__ = [
    "ContractViolation",
    "InvalidRegime",
    "BudgetExceeded",
    "NondifferentiableRegime",
    "CannotAudit",
    "Regime",
    "ConstraintSet",
    "Box",
    "Ball",
    "Simplex",
    "ProductBall",
    "project",
    "diameter",
    "ProblemConstants",
    "ClosedFormOracles",
    "KernelSpec",
    "MinimaxProblem",
    "StochasticOracle",
    "SolverConfig",
    "sample_batch_gradient",
]


class ContractViolation(ValueError):
    """An argument violates a documented precondition."""


class InvalidRegime(ValueError):
    """Requested schedule or audit does not apply to the problem's regime."""


class NondifferentiableRegime(InvalidRegime):
    """The smooth stationarity measure is undefined for this problem (mu = 0)."""


class CannotAudit(ValueError):
    """A bound audit cannot be evaluated (e.g. no certified minimum available)."""


class BudgetExceeded(RuntimeError):
    """An iterative subsolver hit its iteration cap.

    Carries the best iterate found so far in ``best``.
    """

    def __init__(self, message: str, best=None):
        super().__init__(message)
        self.best = best


class Regime(str, enum.Enum):
    """Problem/noise regime tag used by the reference parameter schedules."""

    NC_SC_DET = "nc_sc_det"
    NC_SC_STOCH = "nc_sc_stoch"
    NC_C_DET = "nc_c_det"
    NC_C_STOCH = "nc_c_stoch"


# ---------------------------------------------------------------------------
# Constraint sets
# ---------------------------------------------------------------------------


class ConstraintSet:
    """A closed convex bounded set with exact Euclidean projection."""

    dim: int

    def project(self, p: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def diameter(self) -> float:
        raise NotImplementedError

    def contains(self, p: np.ndarray, tol: float = 1e-12) -> bool:
        return bool(np.linalg.norm(self.project(np.asarray(p, dtype=float)) - p) <= tol)

    def _check_dim(self, p: np.ndarray) -> np.ndarray:
        p = np.asarray(p, dtype=float)
        if p.shape != (self.dim,):
            raise ContractViolation(
                f"expected a vector of dimension {self.dim}, got shape {p.shape}"
            )
        return p


@dataclass(frozen=True)
class Box(ConstraintSet):
    """Axis-aligned box { y : lo <= y <= hi } (coordinatewise clamp)."""

    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "lo", np.atleast_1d(np.asarray(self.lo, dtype=float)))
        object.__setattr__(self, "hi", np.atleast_1d(np.asarray(self.hi, dtype=float)))
        if self.lo.shape != self.hi.shape or np.any(self.lo > self.hi):
            raise ContractViolation("box bounds must satisfy lo <= hi elementwise")

    @property
    def dim(self) -> int:
        return self.lo.size

    def project(self, p: np.ndarray) -> np.ndarray:
        p = self._check_dim(p)
        return np.clip(p, self.lo, self.hi)

    def diameter(self) -> float:
        return float(np.linalg.norm(self.hi - self.lo))


@dataclass(frozen=True)
class Ball(ConstraintSet):
    """Euclidean ball { y : ||y - center|| <= radius } (radial rescale)."""

    center: np.ndarray
    radius: float

    def __post_init__(self):
        object.__setattr__(
            self, "center", np.atleast_1d(np.asarray(self.center, dtype=float))
        )
        if self.radius < 0:
            raise ContractViolation("ball radius must be nonnegative")

    @property
    def dim(self) -> int:
        return self.center.size

    def project(self, p: np.ndarray) -> np.ndarray:
        p = self._check_dim(p)
        d = p - self.center
        nrm = np.linalg.norm(d)
        if nrm <= self.radius:
            return p.copy()
        return self.center + d * (self.radius / nrm)

    def diameter(self) -> float:
        return 2.0 * self.radius


@dataclass(frozen=True)
class Simplex(ConstraintSet):
    """Probability simplex { y >= 0, sum(y) = 1 }.

    Projection is the exact O(n log n) sort-and-threshold algorithm.
    """

    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ContractViolation("simplex dimension must be >= 1")

    @property
    def dim(self) -> int:
        return self.n

    def project(self, p: np.ndarray) -> np.ndarray:
        v = self._check_dim(p)
        u = np.sort(v)[::-1]
        cssv = np.cumsum(u)
        rho = np.nonzero(u * np.arange(1, self.n + 1) > (cssv - 1.0))[0][-1]
        theta = (cssv[rho] - 1.0) / (rho + 1.0)
        return np.clip(v - theta, 0.0, None)

    def diameter(self) -> float:
        # farthest pair of points are two distinct vertices e_i, e_j
        return float(np.sqrt(2.0)) if self.n > 1 else 0.0


@dataclass(frozen=True)
class ProductBall(ConstraintSet):
    """Product of N Euclidean balls of a common radius, one per block.

    Points are flat vectors of length N * block_dim; projection is applied
    blockwise.  Used for per-sample perturbation constraints.
    """

    centers: np.ndarray  # (N, block_dim)
    radius: float

    def __post_init__(self):
        object.__setattr__(
            self, "centers", np.atleast_2d(np.asarray(self.centers, dtype=float))
        )
        if self.radius < 0:
            raise ContractViolation("radius must be nonnegative")

    @property
    def dim(self) -> int:
        return self.centers.size

    def project(self, p: np.ndarray) -> np.ndarray:
        p = self._check_dim(p)
        blocks = p.reshape(self.centers.shape)
        d = blocks - self.centers
        nrm = np.linalg.norm(d, axis=1, keepdims=True)
        scale = np.where(nrm > self.radius, self.radius / np.maximum(nrm, 1e-300), 1.0)
        return (self.centers + d * scale).ravel()

    def diameter(self) -> float:
        return 2.0 * self.radius * float(np.sqrt(self.centers.shape[0]))


def project(constraint: ConstraintSet, p: np.ndarray) -> np.ndarray:
    """Euclidean projection of ``p`` onto ``constraint``."""
    return constraint.project(p)


def diameter(constraint: ConstraintSet) -> float:
    """Diameter sup ||y - y'|| of ``constraint``."""
    return constraint.diameter()


# ---------------------------------------------------------------------------
# Problems
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ProblemConstants:
    """Declared analytic constants of a minimax problem.

    ell
        Joint gradient Lipschitz constant of f.
    lip_L
        Lipschitz constant of f(., y) in x (0 if unknown/not needed).
    mu
        Strong-concavity modulus in y; 0 means merely concave.
    diameter_D
        Diameter of the constraint set.
    sigma
        Gradient-oracle noise level (standard deviation per block).
    """

    ell: float
    lip_L: float = 0.0
    mu: float = 0.0
    diameter_D: float = 0.0
    sigma: float = 0.0

    def __post_init__(self):
        if self.ell <= 0:
            raise ContractViolation("ell must be positive")
        if self.mu < 0 or self.lip_L < 0 or self.diameter_D < 0 or self.sigma < 0:
            raise ContractViolation("constants must be nonnegative")
        if self.mu > self.ell * (1 + 1e-12):
            raise ContractViolation("mu must not exceed ell (kappa >= 1)")

    @property
    def kappa(self) -> float:
        if self.mu <= 0:
            raise InvalidRegime("kappa undefined when mu = 0")
        return self.ell / self.mu


@dataclass(frozen=True)
class ClosedFormOracles:
    """Optional analytic ground truth used for diagnostics and audits."""

    phi: Optional[Callable[[np.ndarray], float]] = None
    grad_phi: Optional[Callable[[np.ndarray], np.ndarray]] = None
    y_star: Optional[Callable[[np.ndarray], np.ndarray]] = None
    moreau_grad: Optional[Callable[[np.ndarray], np.ndarray]] = None
    moreau_env: Optional[Callable[[np.ndarray], float]] = None
    phi_min: Optional[float] = None


@dataclass(frozen=True)
class KernelSpec:
    """Marks a problem as runnable by a compiled inner-loop kernel.

    ``family`` selects the kernel implementation in :mod:`minimax_lab.kernels`;
    ``params`` are the raw numeric arrays the kernel needs.
    """

    family: str
    params: dict


@dataclass(frozen=True)
class MinimaxProblem:
    """Oracle bundle for min_x max_{y in Y} f(x, y)."""

    name: str
    dim_x: int
    dim_y: int
    value: Callable[[np.ndarray, np.ndarray], float]
    grad_x: Callable[[np.ndarray, np.ndarray], np.ndarray]
    grad_y: Callable[[np.ndarray, np.ndarray], np.ndarray]
    constants: ProblemConstants
    constraint: ConstraintSet
    ground_truth: Optional[ClosedFormOracles] = None
    kernel: Optional[KernelSpec] = None

    def __post_init__(self):
        if self.dim_x < 1 or self.dim_y < 1:
            raise ContractViolation("dimensions must be positive")
        if self.constraint.dim != self.dim_y:
            raise ContractViolation("constraint dimension must equal dim_y")


@dataclass(frozen=True)
class StochasticOracle:
    """Additive isotropic Gaussian noise on both gradient blocks.

    ``noise_sigma`` is the standard deviation per block: a single draw G
    satisfies E[G] = grad f and E||G_block - grad_block||^2 = noise_sigma^2,
    so a batch of M draws has per-block variance noise_sigma^2 / M.
    """

    base: MinimaxProblem
    noise_sigma: float

    def __post_init__(self):
        if self.noise_sigma < 0:
            raise ContractViolation("noise_sigma must be nonnegative")


def sample_batch_gradient(
    oracle: StochasticOracle,
    x: np.ndarray,
    y: np.ndarray,
    M: int,
    rng: np.random.Generator,
) -> tuple[np.ndarray, np.ndarray, np.random.Generator]:
    """Mean of M independent stochastic gradient draws at (x, y).

    The same batch of draws feeds both blocks (each draw perturbs gx and gy
    jointly).  The generator is advanced in place and returned, so callers can
    thread it through a run.  With ``noise_sigma == 0`` the exact gradients
    are returned without consuming randomness, which makes zero-noise
    stochastic runs bit-identical to their deterministic counterparts.
    """
    if M < 1:
        raise ContractViolation("batch size M must be >= 1")
    gx = np.asarray(oracle.base.grad_x(x, y), dtype=float)
    gy = np.asarray(oracle.base.grad_y(x, y), dtype=float)
    if oracle.noise_sigma == 0.0:
        return gx, gy, rng
    # per-coordinate std so that the total per-block variance is sigma^2
    sx = oracle.noise_sigma / np.sqrt(oracle.base.dim_x)
    sy = oracle.noise_sigma / np.sqrt(oracle.base.dim_y)
    nx = rng.standard_normal((M, oracle.base.dim_x)).mean(axis=0) * sx
    ny = rng.standard_normal((M, oracle.base.dim_y)).mean(axis=0) * sy
    return gx + nx, gy + ny, rng


@dataclass(frozen=True)
class SolverConfig:
    """Stepsizes, horizon, batch size, and regime tag for a solver run."""

    eta_x: float
    eta_y: float
    horizon_T: int
    batch_M: int = 1
    zeta: Optional[float] = None  # max-oracle tolerance (GDmax family only)
    seed: int = 0
    regime: Optional[Regime] = None
    record_stride: Optional[int] = None  # None = auto (full for T <= 1e4)
    inner_batch_M: int = 1  # inner max-oracle batch (SGDmax only)
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.eta_x <= 0 or self.eta_y <= 0:
            raise ContractViolation("stepsizes must be positive")
        if self.horizon_T < 0:
            raise ContractViolation("horizon must be nonnegative")
        if self.batch_M < 1:
            raise ContractViolation("batch size must be >= 1")
        if self.zeta is not None and self.zeta <= 0:
            raise ContractViolation("zeta must be positive when given")
        # two-time-scale runs require the descent stepsize to be the slow one
        if self.regime is not None and self.zeta is None and self.eta_x > self.eta_y:
            raise ContractViolation(
                "two-time-scale schedules require eta_x <= eta_y"
            )

    def stride(self) -> int:
        """Recording stride: every iterate for T <= 1e4, else ~1e4 records."""
        if self.record_stride is not None:
            return max(1, int(self.record_stride))
        if self.horizon_T <= 10_000:
            return 1
        return int(np.ceil(self.horizon_T / 10_000))
