"""Simultaneous two-time-scale descent-ascent solvers and max-oracle variants.

Four algorithms:

* :func:`run_gda` / :func:`run_sgda` — simultaneous gradient descent on x and
  projected gradient ascent on y, both reading the same previous iterate, with
  unequal stepsizes (the descent stepsize is the slow one);
* :func:`run_gdmax` / :func:`run_sgdmax` — at each outer step, first solve the
  inner maximization to a tolerance ``zeta`` with (stochastic) gradient
  ascent, then take one descent step on x.

Plus :func:`extragradient_scc`, the subsolver used by the stationarity
translations, and :func:`theorem_stepsizes`, which reproduces the reference
parameter schedules (stepsizes, batch sizes, inner tolerance, horizon) with
their exact constants.

Traces are recorded on a thinned grid (every iterate up to 1e4 iterations,
about 1e4 evenly strided records beyond that); structured problems carrying a
:class:`~minimax_lab.core.KernelSpec` dispatch the main loop to a compiled
kernel, everything else runs the generic oracle loop.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import kernels
from .core import (
    BudgetExceeded,
    ContractViolation,
    InvalidRegime,
    MinimaxProblem,
    ProblemConstants,
    Regime,
    SolverConfig,
    StochasticOracle,
    sample_batch_gradient,
)

__all__ = [
    "IterateTrace",
    "run_gda",
    "run_sgda",
    "inner_max_ga",
    "run_gdmax",
    "run_sgdmax",
    "extragradient_scc",
    "theorem_stepsizes",
    "select_output",
]


@dataclass
class IterateTrace:
    """Recorded iterates of a solver run.

    ``ts[k]`` is the iteration index of record ``k``; ``ts[0] == 0`` holds the
    initial point and the final record holds the last completed iterate.  For
    runs longer than the recording threshold the grid is strided, so the
    record count is ``~min(T, 1e4)`` rather than ``T + 1``.
    Diagnostics (primal value, its gradient norms, tracking error, primal
    gap) are attached lazily by the stationarity module on the same grid.
    """

    ts: np.ndarray
    xs: np.ndarray
    ys: np.ndarray
    f_vals: np.ndarray
    grad_x_norms: np.ndarray
    grad_y_norms: np.ndarray
    config: SolverConfig
    problem_name: str = ""
    aborted: bool = False
    abort_index: Optional[int] = None
    selected_index: Optional[int] = None
    inner_iters: Optional[np.ndarray] = None
    wall_ms_total: float = 0.0
    diagnostics: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.ts)

    def record_of(self, t: int) -> int:
        """Record index holding iteration ``t`` (must be on the grid)."""
        k = int(np.searchsorted(self.ts, t))
        if k >= len(self.ts) or self.ts[k] != t:
            raise KeyError(f"iteration {t} is not on the recording grid")
        return k


def _should_record(t: int, T: int, stride: int) -> bool:
    return t % stride == 0 or t == T


def _finish_trace(rec, config, problem, abort_t, wall_ms, inner=None) -> IterateTrace:
    ts, xs, ys, fs, gxn, gyn = rec
    trace = IterateTrace(
        ts=np.asarray(ts, dtype=np.int64),
        xs=np.asarray(xs, dtype=float),
        ys=np.asarray(ys, dtype=float),
        f_vals=np.asarray(fs, dtype=float),
        grad_x_norms=np.asarray(gxn, dtype=float),
        grad_y_norms=np.asarray(gyn, dtype=float),
        config=config,
        problem_name=problem.name,
        aborted=abort_t >= 0,
        abort_index=int(abort_t) if abort_t >= 0 else None,
        wall_ms_total=wall_ms,
    )
    if inner is not None:
        trace.inner_iters = np.asarray(inner, dtype=np.int64)
    return trace


def _check_start(problem: MinimaxProblem, x0, y0):
    x0 = np.atleast_1d(np.asarray(x0, dtype=float))
    y0 = np.atleast_1d(np.asarray(y0, dtype=float))
    if x0.shape != (problem.dim_x,) or y0.shape != (problem.dim_y,):
        raise ContractViolation("initial point dimensions do not match the problem")
    if not problem.constraint.contains(y0, tol=1e-9):
        raise ContractViolation("y0 must lie in the constraint set")
    return x0, y0


def run_gda(
    problem: MinimaxProblem,
    config: SolverConfig,
    x0,
    y0,
    backend: Optional[str] = None,
) -> IterateTrace:
    """Simultaneous descent-ascent: both updates read the previous pair.

        x_t = x_{t-1} - eta_x * grad_x f(x_{t-1}, y_{t-1})
        y_t = P_Y(y_{t-1} + eta_y * grad_y f(x_{t-1}, y_{t-1}))

    ``backend`` is one of ``None`` (auto), ``"numba"``, ``"numpy"`` (the same
    kernel source interpreted by CPython), or ``"generic"`` (force the plain
    oracle loop even for kernel-capable problems).
    """
    x0, y0 = _check_start(problem, x0, y0)
    stride = config.stride()
    T = config.horizon_T
    t0 = time.perf_counter()
    if problem.kernel is not None and backend != "generic":
        fn = kernels.get_kernel(problem.kernel.family, backend)
        p = problem.kernel.params
        if problem.kernel.family == "quadratic_ball":
            out = fn(p["A"], p["B"], p["mu"], p["radius"], x0, y0,
                     config.eta_x, config.eta_y, T, stride)
        elif problem.kernel.family == "bilinear_box":
            out = fn(p["scale"], p["lo"], p["hi"], x0, y0,
                     config.eta_x, config.eta_y, T, stride)
        else:  # pragma: no cover - unknown family falls back
            out = None
        if out is not None:
            ts, xs, ys, fs, gxn, gyn, abort_t = out
            wall = (time.perf_counter() - t0) * 1e3
            return _finish_trace((ts, xs, ys, fs, gxn, gyn), config, problem,
                                 abort_t, wall)
    trace = _generic_loop(problem, config, x0, y0, oracle=None, rng=None)
    trace.wall_ms_total = (time.perf_counter() - t0) * 1e3
    return trace


def run_sgda(
    oracle: StochasticOracle, config: SolverConfig, x0, y0
) -> IterateTrace:
    """Stochastic variant: batch-averaged noisy gradients, one shared batch
    feeding both blocks each iteration.  Deterministic given the seed; with
    ``noise_sigma == 0`` the trace is bit-identical to the generic
    :func:`run_gda` path."""
    x0, y0 = _check_start(oracle.base, x0, y0)
    rng = np.random.default_rng(config.seed)
    t0 = time.perf_counter()
    trace = _generic_loop(oracle.base, config, x0, y0, oracle=oracle, rng=rng)
    trace.wall_ms_total = (time.perf_counter() - t0) * 1e3
    return trace


def _generic_loop(problem, config, x0, y0, oracle, rng) -> IterateTrace:
    stride = config.stride()
    T = config.horizon_T
    proj = problem.constraint.project
    ts, xs, ys, fs, gxn, gyn = [], [], [], [], [], []
    x, y = x0.copy(), y0.copy()
    abort_t = -1
    t = 0
    while True:
        if oracle is None:
            gx = np.asarray(problem.grad_x(x, y), dtype=float)
            gy = np.asarray(problem.grad_y(x, y), dtype=float)
        else:
            gx, gy, rng = sample_batch_gradient(oracle, x, y, config.batch_M, rng)
        if _should_record(t, T, stride):
            ts.append(t)
            xs.append(x.copy())
            ys.append(y.copy())
            fs.append(problem.value(x, y))
            gxn.append(float(np.linalg.norm(gx)))
            gyn.append(float(np.linalg.norm(gy)))
            if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
                abort_t = t
                break
        elif not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
            # off-grid non-finite iterate: flush a diagnostic record and stop
            ts.append(t)
            xs.append(x.copy())
            ys.append(y.copy())
            fs.append(problem.value(x, y))
            gxn.append(float(np.linalg.norm(gx)))
            gyn.append(float(np.linalg.norm(gy)))
            abort_t = t
            break
        if t == T:
            break
        x = x - config.eta_x * gx
        y = proj(y + config.eta_y * gy)
        t += 1
    return _finish_trace((ts, xs, ys, fs, gxn, gyn), config, problem, abort_t, 0.0)


# ---------------------------------------------------------------------------
# Max-oracle family
# ---------------------------------------------------------------------------


def inner_max_budget(constants: ProblemConstants, zeta: float) -> tuple[float, int]:
    """(ascent stepsize, iteration budget) of the zeta-accurate max-oracle.

    Strongly concave case: stepsize 1/ell, geometric contraction gives a
    budget of ceil(kappa * log(ell D^2 / zeta)); the output additionally
    satisfies ||y* - y||^2 <= zeta / ell.  Merely concave case: stepsize
    1/(2 ell), budget max{1, ceil(2 ell D^2 / zeta)}.
    """
    ell, mu, D = constants.ell, constants.mu, constants.diameter_D
    if mu > 0:
        arg = ell * D * D / zeta
        n = 1 if arg <= 1.0 else int(math.ceil(constants.kappa * math.log(arg)))
        return 1.0 / ell, max(1, n)
    return 1.0 / (2.0 * ell), max(1, int(math.ceil(2.0 * ell * D * D / zeta)))


def inner_max_ga(
    problem: MinimaxProblem,
    x,
    y_init,
    zeta: float,
    oracle: Optional[StochasticOracle] = None,
    batch_M: int = 1,
    rng: Optional[np.random.Generator] = None,
    eta_y: Optional[float] = None,
) -> tuple[np.ndarray, int]:
    """Projected (stochastic) gradient ascent max-oracle to suboptimality zeta."""
    if zeta <= 0:
        raise ContractViolation("zeta must be positive")
    x = np.asarray(x, dtype=float)
    y = np.atleast_1d(np.asarray(y_init, dtype=float)).copy()
    step, budget = inner_max_budget(problem.constants, zeta)
    if eta_y is not None:
        step = eta_y
    proj = problem.constraint.project
    for it in range(budget):
        if oracle is None:
            gy = np.asarray(problem.grad_y(x, y), dtype=float)
        else:
            _, gy, rng = sample_batch_gradient(oracle, x, y, batch_M, rng)
        y_new = proj(y + step * gy)
        if not np.all(np.isfinite(y_new)):
            raise BudgetExceeded("non-finite iterate in inner ascent", best=y)
        moved = float(np.linalg.norm(y_new - y))
        y = y_new
        if moved == 0.0:  # exact fixed point, no further progress possible
            return y, it + 1
    return y, budget


def run_gdmax(
    problem: MinimaxProblem, config: SolverConfig, x0, y0
) -> IterateTrace:
    """Outer descent with an inner gradient-ascent max-oracle.

    Each iteration first refines y to a zeta-accurate maximizer at the
    current x (warm-started from the previous y), then takes one descent
    step using that maximizer.  The recorded y is the oracle output."""
    return _gdmax_loop(problem, config, x0, y0, oracle=None)


def run_sgdmax(
    oracle: StochasticOracle, config: SolverConfig, x0, y0
) -> IterateTrace:
    """Stochastic max-oracle variant: inner ascent uses mini-batched noisy
    gradients (batch ``config.inner_batch_M``), the outer step averages
    ``config.batch_M`` draws."""
    return _gdmax_loop(oracle.base, config, x0, y0, oracle=oracle)


def _gdmax_loop(problem, config, x0, y0, oracle) -> IterateTrace:
    if config.zeta is None:
        raise ContractViolation("max-oracle solvers require config.zeta")
    x0, y0 = _check_start(problem, x0, y0)
    rng = np.random.default_rng(config.seed)
    stride = config.stride()
    T = config.horizon_T
    stoch = oracle is not None and oracle.noise_sigma > 0
    # merely concave stochastic inner ascent needs the noise-robust stepsize
    eta_inner = None
    if stoch and problem.constants.mu == 0:
        eta_inner = min(
            1.0 / (2.0 * problem.constants.ell),
            config.zeta / (2.0 * oracle.noise_sigma**2),
        )
    ts, xs, ys, fs, gxn, gyn, inner = [], [], [], [], [], [], []
    x, y = x0.copy(), y0.copy()
    abort_t = -1
    t0 = time.perf_counter()
    t = 0
    while True:
        y, n_inner = inner_max_ga(
            problem, x, y, config.zeta,
            oracle=oracle if stoch else None,
            batch_M=config.inner_batch_M, rng=rng, eta_y=eta_inner,
        )
        if oracle is None or not stoch:
            gx = np.asarray(problem.grad_x(x, y), dtype=float)
        else:
            gx, _, rng = sample_batch_gradient(oracle, x, y, config.batch_M, rng)
        if _should_record(t, T, stride):
            ts.append(t)
            xs.append(x.copy())
            ys.append(y.copy())
            fs.append(problem.value(x, y))
            gxn.append(float(np.linalg.norm(gx)))
            gyn.append(float(np.linalg.norm(problem.grad_y(x, y))))
            inner.append(n_inner)
            if not np.all(np.isfinite(x)):
                abort_t = t
                break
        if t == T:
            break
        x = x - config.eta_x * gx
        t += 1
    wall = (time.perf_counter() - t0) * 1e3
    return _finish_trace((ts, xs, ys, fs, gxn, gyn), config, problem, abort_t,
                         wall, inner=inner)


# ---------------------------------------------------------------------------
# Extragradient subsolver
# ---------------------------------------------------------------------------


def extragradient_scc(
    problem_reg: MinimaxProblem,
    x0,
    y0,
    tol: float,
    max_iter: int = 1_000_000,
    step: Optional[float] = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Extragradient on a strongly-convex-concave saddle problem.

    Half step with gradients at the current point, full step with gradients
    at the half point, ascent block projected at both.  Terminates when
    ``||grad_x|| <= tol`` and the projected ascent residual
    ``||P_Y(y + (1/ell) grad_y) - y|| <= tol / ell``.
    """
    if tol <= 0:
        raise ContractViolation("tol must be positive")
    x = np.atleast_1d(np.asarray(x0, dtype=float)).copy()
    y = np.atleast_1d(np.asarray(y0, dtype=float)).copy()
    ell = problem_reg.constants.ell
    eta = step if step is not None else 1.0 / (2.0 * ell)
    proj = problem_reg.constraint.project
    for _ in range(max_iter):
        gx = np.asarray(problem_reg.grad_x(x, y), dtype=float)
        gy = np.asarray(problem_reg.grad_y(x, y), dtype=float)
        rx = float(np.linalg.norm(gx))
        ry = float(np.linalg.norm(proj(y + gy / ell) - y))
        if rx <= tol and ry <= tol / ell:
            return x, y
        xh = x - eta * gx
        yh = proj(y + eta * gy)
        gxh = np.asarray(problem_reg.grad_x(xh, yh), dtype=float)
        gyh = np.asarray(problem_reg.grad_y(xh, yh), dtype=float)
        x = x - eta * gxh
        y = proj(y + eta * gyh)
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
            raise BudgetExceeded("extragradient diverged", best=(x, y))
    raise BudgetExceeded(
        f"extragradient did not reach tol={tol} within {max_iter} iterations",
        best=(x, y),
    )


# ---------------------------------------------------------------------------
# Reference parameter schedules
# ---------------------------------------------------------------------------


def theorem_stepsizes(
    regime: Regime,
    constants: ProblemConstants,
    epsilon: float,
    delta_phi_estimate: float,
    delta_zero_estimate: float = 0.0,
    algorithm: str = "gda",
    sigma: Optional[float] = None,
    seed: int = 0,
) -> SolverConfig:
    """Exact reference schedule (stepsizes, batch, inner tolerance, horizon).

    ``delta_phi_estimate`` is the caller's upper estimate of the initial
    primal suboptimality (of the primal function in the strongly concave
    regime, of its Moreau envelope otherwise); ``delta_zero_estimate`` bounds
    the initial primal gap.  The horizon is the smallest T at which the
    corresponding averaged-squared-residual bound drops to epsilon^2.
    """
    if epsilon <= 0:
        raise InvalidRegime("epsilon must be positive")
    if delta_phi_estimate < 0 or delta_zero_estimate < 0:
        raise InvalidRegime("suboptimality estimates must be nonnegative")
    ell = constants.ell
    D = constants.diameter_D
    sig = constants.sigma if sigma is None else float(sigma)
    eps2 = epsilon * epsilon
    strongly = regime in (Regime.NC_SC_DET, Regime.NC_SC_STOCH)
    stochastic = regime in (Regime.NC_SC_STOCH, Regime.NC_C_STOCH)
    if strongly and constants.mu <= 0:
        raise InvalidRegime("strong-concavity schedule requires mu > 0")
    if not strongly and (constants.lip_L <= 0 or D <= 0):
        raise InvalidRegime("merely-concave schedule requires L > 0 and D > 0")
    if stochastic and sig <= 0:
        raise InvalidRegime("stochastic schedule requires sigma > 0")
    L = constants.lip_L

    if algorithm == "gda":
        if strongly:
            kap = constants.kappa
            eta_x = 1.0 / (16.0 * (kap + 1.0) ** 2 * ell)
            eta_y = 1.0 / ell
            numer = 128.0 * kap**2 * ell * delta_phi_estimate + 5.0 * kap * ell**2 * D**2
            if regime is Regime.NC_SC_DET:
                M = 1
                T = int(math.ceil(numer / eps2))
            else:
                M = max(1, int(math.ceil(26.0 * kap * sig**2 / eps2)))
                T = int(math.ceil(2.0 * numer / eps2))
        else:
            if regime is Regime.NC_C_DET:
                eta_y = 1.0 / ell
                eta_x = min(
                    eps2 / (16.0 * ell * L**2),
                    eps2**2 / (4096.0 * ell**3 * L**2 * D**2),
                )
                M = 1
                budget = 2.0  # deterministic residual is eps^2 / 2
            else:
                eta_y = min(1.0 / (2.0 * ell), eps2 / (16.0 * ell * sig**2))
                root = math.sqrt(L**2 + sig**2)
                eta_x = min(
                    eps2 / (16.0 * ell * (L**2 + sig**2)),
                    eps2**2 / (8192.0 * ell**3 * D**2 * L * root),
                    eps2**3 / (65536.0 * ell**3 * D**2 * sig**2 * L * root),
                )
                M = 1
                budget = 4.0  # stochastic residual is 3 eps^2 / 4
            T = int(math.ceil(
                budget * (4.0 * delta_phi_estimate / eta_x
                          + 8.0 * ell * delta_zero_estimate) / eps2
            ))
        return SolverConfig(eta_x=eta_x, eta_y=eta_y, horizon_T=T, batch_M=M,
                            seed=seed, regime=regime)

    if algorithm == "gdmax":
        if strongly:
            kap = constants.kappa
            eta_x = 1.0 / (8.0 * kap * ell)
            zeta = eps2 / (6.0 * ell)
            eta_y = 1.0 / ell
            if regime is Regime.NC_SC_DET:
                M, Mi = 1, 1
                T = int(math.ceil(64.0 * kap * ell * delta_phi_estimate / eps2))
            else:
                M = max(1, int(math.ceil(12.0 * kap * sig**2 / eps2)))
                Mi = max(1, int(math.ceil(2.0 * sig**2 * kap / (ell * zeta))))
                # residual budget: 3 ell zeta = eps^2/2, sigma^2/(2M) <= eps^2/24
                T = int(math.ceil(32.0 * 24.0 * kap * ell * delta_phi_estimate
                                  / (11.0 * eps2)))
        else:
            zeta = eps2 / (24.0 * ell)
            eta_y = 1.0 / (2.0 * ell)
            if regime is Regime.NC_C_DET:
                eta_x = eps2 / (ell * L**2)
                M, Mi = 1, 1
            else:
                eta_x = eps2 / (ell * (L**2 + sig**2))
                M, Mi = 1, 1
            T = int(math.ceil(12.0 * delta_phi_estimate / (eta_x * eps2)))
        return SolverConfig(eta_x=eta_x, eta_y=eta_y, horizon_T=T, batch_M=M,
                            zeta=zeta, inner_batch_M=Mi, seed=seed, regime=regime)

    raise InvalidRegime(f"unknown algorithm {algorithm!r}")


def select_output(
    trace: IterateTrace, rng: np.random.Generator
) -> tuple[np.ndarray, int]:
    """Uniform draw over the recorded iterates with t >= 1.

    On a full recording grid this is the uniform draw over {1..T}; on a
    thinned grid the draw is uniform over the surviving candidates.  The
    chosen iteration index is written back into ``trace.selected_index``.
    """
    candidates = np.nonzero(trace.ts >= 1)[0]
    if len(candidates) == 0:
        if len(trace.ts) == 0:
            raise ContractViolation("empty trace")
        candidates = np.array([0])
    k = int(candidates[rng.integers(len(candidates))])
    trace.selected_index = int(trace.ts[k])
    return trace.xs[k].copy(), trace.selected_index
