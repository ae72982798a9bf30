"""Primal-function evaluation, Moreau-envelope machinery, and stationarity
notions.

Three measures of approximate stationarity for min_x max_{y in Y} f(x, y)
with primal function Phi(x) = max_y f(x, y):

* ``grad_phi`` — ||grad Phi(x)|| <= eps, available when f(x, .) is strongly
  concave (Phi is then differentiable and grad Phi(x) = grad_x f(x, y*(x)));
* ``moreau_grad`` — ||grad Phi_{1/2l}(x)|| <= eps, where Phi_{1/2l} is the
  Moreau envelope min_w Phi(w) + l ||w - x||^2 of the l-weakly-convex Phi;
* ``check_joint_stationarity`` — the pair condition: ||grad_x f(x, y)|| <= eps
  together with a projected ascent residual <= eps / l.

``translate_phi_to_joint`` and ``check_converse_translation`` implement the
constructive equivalences between the function notions and the pair notion,
with the proof constants exposed in the returned report.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .core import (
    ClosedFormOracles,
    ContractViolation,
    BudgetExceeded,
    MinimaxProblem,
    NondifferentiableRegime,
    ProblemConstants,
)
from .solvers import IterateTrace, extragradient_scc, inner_max_ga

__all__ = [
    "Notion",
    "StationarityReport",
    "eval_phi",
    "grad_phi",
    "moreau_prox",
    "moreau_grad",
    "moreau_env",
    "check_joint_stationarity",
    "translate_phi_to_joint",
    "check_converse_translation",
    "attach_diagnostics",
]


class Notion(str, enum.Enum):
    GRAD_PHI = "grad_phi"
    MOREAU_GRAD = "moreau_grad"
    JOINT = "joint"


@dataclass
class StationarityReport:
    """Certificate that a point (or pair) meets a stationarity notion."""

    point_x: np.ndarray
    notion: Notion
    epsilon_achieved: float
    certificate: dict = field(default_factory=dict)
    inner_tolerance: float = 0.0
    implied_bound: Optional[float] = None
    measured: Optional[float] = None
    passed: Optional[bool] = None


def _y_init(problem: MinimaxProblem) -> np.ndarray:
    return problem.constraint.project(np.zeros(problem.dim_y))


def eval_phi(
    problem: MinimaxProblem, x, tol: float
) -> tuple[float, np.ndarray]:
    """Phi(x) to within tol, via the tol-accurate inner max-oracle."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    y, _ = inner_max_ga(problem, x, _y_init(problem), tol)
    return float(problem.value(x, y)), y


def grad_phi(problem: MinimaxProblem, x, tol: float) -> np.ndarray:
    """grad Phi(x) = grad_x f(x, y*(x)) to within tol (needs mu > 0).

    The inner tolerance is zeta = tol^2 / ell, so that the oracle's certified
    distance ||y - y*|| <= sqrt(zeta / ell) gives an l-Lipschitz error
    ell * ||y - y*|| <= tol on the returned gradient.
    """
    if problem.constants.mu <= 0:
        raise NondifferentiableRegime(
            "the primal function may be nonsmooth when mu = 0; "
            "use moreau_grad instead"
        )
    x = np.atleast_1d(np.asarray(x, dtype=float))
    zeta = tol * tol / problem.constants.ell
    y, _ = inner_max_ga(problem, x, _y_init(problem), zeta)
    return np.asarray(problem.grad_x(x, y), dtype=float)


def _regularized(problem: MinimaxProblem, x_anchor: np.ndarray) -> MinimaxProblem:
    """min_w max_y f(w, y) + ell ||w - x_anchor||^2 (strongly convex in w)."""
    ell = problem.constants.ell

    def value(w, y):
        w = np.asarray(w, dtype=float)
        return float(problem.value(w, y) + ell * np.sum((w - x_anchor) ** 2))

    def gx(w, y):
        w = np.asarray(w, dtype=float)
        return np.asarray(problem.grad_x(w, y), dtype=float) + 2.0 * ell * (
            w - x_anchor
        )

    return MinimaxProblem(
        name=problem.name + "+prox_reg",
        dim_x=problem.dim_x,
        dim_y=problem.dim_y,
        value=value,
        grad_x=gx,
        grad_y=problem.grad_y,
        constants=ProblemConstants(
            ell=3.0 * ell,  # the quadratic term adds 2*ell to the x-block
            lip_L=problem.constants.lip_L,
            mu=problem.constants.mu,
            diameter_D=problem.constants.diameter_D,
            sigma=problem.constants.sigma,
        ),
        constraint=problem.constraint,
    )


def moreau_prox(
    problem: MinimaxProblem, x, tol: float, method: str = "auto"
) -> np.ndarray:
    """Proximal point argmin_w Phi(w) + ell ||w - x||^2.

    ``method="direct"`` requires a closed-form Phi oracle and a scalar
    descent variable: it ternary-searches the strongly convex scalar
    objective to bracket width tol.  ``method="saddle"`` solves the
    regularized saddle problem with the extragradient subsolver.  ``auto``
    prefers the direct path when available.
    """
    if tol <= 0:
        raise ContractViolation("tol must be positive")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    ell = problem.constants.ell
    gt = problem.ground_truth
    direct_ok = gt is not None and gt.phi is not None and problem.dim_x == 1
    if method == "auto":
        method = "direct" if direct_ok else "saddle"
    if method == "direct":
        if not direct_ok:
            raise ContractViolation(
                "direct prox path needs a closed-form Phi and a scalar x"
            )
        L = problem.constants.lip_L
        half_width = (L / (2.0 * ell) if L > 0 else 1.0) + 1.0
        lo = float(x[0]) - half_width
        hi = float(x[0]) + half_width

        def g(w):
            wv = np.array([w])
            return gt.phi(wv) + ell * (w - float(x[0])) ** 2

        while hi - lo > tol:
            m1 = lo + (hi - lo) / 3.0
            m2 = hi - (hi - lo) / 3.0
            if g(m1) <= g(m2):
                hi = m2
            else:
                lo = m1
        return np.array([(lo + hi) / 2.0])
    if method != "saddle":
        raise ContractViolation(f"unknown prox method {method!r}")
    reg = _regularized(problem, x)
    inner_tol = max(ell * tol / 4.0, 1e-14)
    w, _ = extragradient_scc(reg, x, _y_init(problem), inner_tol)
    return w


def moreau_grad(
    problem: MinimaxProblem, x, tol: float, method: str = "auto"
) -> np.ndarray:
    """grad Phi_{1/2l}(x) = 2 ell (x - prox(x)); error <= 2 ell * prox error."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    ell = problem.constants.ell
    prox = moreau_prox(problem, x, tol / (2.0 * ell), method=method)
    return 2.0 * ell * (x - prox)


def moreau_env(
    problem: MinimaxProblem, x, tol: float, method: str = "auto"
) -> float:
    """Moreau envelope value Phi(prox(x)) + ell ||prox(x) - x||^2."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    ell = problem.constants.ell
    prox = moreau_prox(problem, x, tol / max(1.0, 2.0 * ell), method=method)
    gt = problem.ground_truth
    if gt is not None and gt.phi is not None:
        phi_val = float(gt.phi(prox))
    else:
        phi_val, _ = eval_phi(problem, prox, tol / 2.0)
    return phi_val + ell * float(np.sum((prox - x) ** 2))


def check_joint_stationarity(
    problem: MinimaxProblem, x, y
) -> tuple[float, float]:
    """Pair residuals (||grad_x f(x, y)||, ||P_Y(y + grad_y f / ell) - y||).

    The pair is eps-stationary iff the first is <= eps and the second is
    <= eps / ell.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    y = np.atleast_1d(np.asarray(y, dtype=float))
    ell = problem.constants.ell
    gx = np.asarray(problem.grad_x(x, y), dtype=float)
    gy = np.asarray(problem.grad_y(x, y), dtype=float)
    y_res = problem.constraint.project(y + gy / ell) - y
    return float(np.linalg.norm(gx)), float(np.linalg.norm(y_res))


class _CountingProblem:
    """Wraps a problem's gradient oracles with an evaluation counter."""

    def __init__(self, problem: MinimaxProblem):
        self.count = 0
        p = problem

        def gx(x, y):
            self.count += 1
            return p.grad_x(x, y)

        def gy(x, y):
            self.count += 1
            return p.grad_y(x, y)

        self.problem = MinimaxProblem(
            name=p.name,
            dim_x=p.dim_x,
            dim_y=p.dim_y,
            value=p.value,
            grad_x=gx,
            grad_y=gy,
            constants=p.constants,
            constraint=p.constraint,
            ground_truth=p.ground_truth,
        )


def translate_phi_to_joint(
    problem: MinimaxProblem, x_hat, epsilon: float
) -> tuple[np.ndarray, np.ndarray, int]:
    """Turn a function-notion stationary point into a stationary pair.

    Strongly concave case: ascend at fixed x_hat until the projected ascent
    residual drops below epsilon / ell; the pair (x_hat, y') then has
    ||grad_x f|| <= ||grad Phi(x_hat)|| + ell ||y' - y*||.  Merely concave
    case: solve the regularized saddle problem anchored at x_hat to residual
    epsilon and return its iterate pair.  Also returns the number of extra
    gradient evaluations spent.
    """
    if epsilon <= 0:
        raise ContractViolation("epsilon must be positive")
    x_hat = np.atleast_1d(np.asarray(x_hat, dtype=float))
    ell = problem.constants.ell
    if problem.constants.mu > 0:
        kap = problem.constants.kappa
        D = problem.constants.diameter_D
        proj = problem.constraint.project
        y = _y_init(problem)
        target = epsilon / ell
        cap = 200 + int(math.ceil(
            4.0 * kap * max(1.0, math.log(max(ell * D / epsilon, 2.0)))
        ))
        count = 0
        for _ in range(cap):
            gy = np.asarray(problem.grad_y(x_hat, y), dtype=float)
            count += 1
            step = proj(y + gy / ell)
            if float(np.linalg.norm(step - y)) <= target:
                return x_hat, y, count
            y = step
        raise BudgetExceeded("inner ascent did not certify the pair", best=y)
    counting = _CountingProblem(problem)
    reg = _regularized(counting.problem, x_hat)
    w, y = extragradient_scc(reg, x_hat, _y_init(problem), epsilon)
    return w, y, counting.count


def check_converse_translation(
    problem: MinimaxProblem, x_hat, y_hat, tol: float = 1e-6
) -> StationarityReport:
    """Audit the pair-to-function direction of the stationarity equivalences.

    Strongly concave case: a pair with residuals (eps/kappa, eps/(kappa*ell))
    implies ||grad Phi(x_hat)|| <= eps + eps/kappa; the proof bounds the
    maximizer distance by ||y_hat - y*|| <= kappa * (ascent residual).
    Merely concave case: a pair with residuals (eps^2, eps^2/ell) implies
    ||grad Phi_{1/2l}(x_hat)|| <= 4 eps sqrt(ell D + 1), from the proof's
    chain (ell/4) ||x_hat - prox||^2 <= eps^2 D + ||grad_x f||^2 / ell.
    """
    x_hat = np.atleast_1d(np.asarray(x_hat, dtype=float))
    y_hat = np.atleast_1d(np.asarray(y_hat, dtype=float))
    gx_norm, y_res = check_joint_stationarity(problem, x_hat, y_hat)
    ell = problem.constants.ell
    cert = {"gx_norm": gx_norm, "y_residual": y_res, "y": y_hat.copy()}
    if problem.constants.mu > 0:
        kap = problem.constants.kappa
        # smallest eps for which the pair is (eps/kappa)-joint-stationary
        eps = kap * max(gx_norm, ell * y_res)
        implied = eps + eps / kap
        gt = problem.ground_truth
        if gt is not None and gt.grad_phi is not None:
            measured = float(np.linalg.norm(gt.grad_phi(x_hat)))
        else:
            measured = float(np.linalg.norm(grad_phi(problem, x_hat, tol)))
        return StationarityReport(
            point_x=x_hat,
            notion=Notion.GRAD_PHI,
            epsilon_achieved=eps,
            certificate=cert,
            inner_tolerance=tol,
            implied_bound=implied,
            measured=measured,
            passed=measured <= implied + tol,
        )
    D = problem.constants.diameter_D
    eps = math.sqrt(max(gx_norm, ell * y_res))
    implied = 4.0 * eps * math.sqrt(ell * D + 1.0)
    gt = problem.ground_truth
    if gt is not None and gt.moreau_grad is not None:
        measured = float(np.linalg.norm(gt.moreau_grad(x_hat)))
    else:
        measured = float(np.linalg.norm(moreau_grad(problem, x_hat, tol)))
    return StationarityReport(
        point_x=x_hat,
        notion=Notion.MOREAU_GRAD,
        epsilon_achieved=eps,
        certificate=cert,
        inner_tolerance=tol,
        implied_bound=implied,
        measured=measured,
        passed=measured <= implied + tol,
    )


# ---------------------------------------------------------------------------
# Trace diagnostics
# ---------------------------------------------------------------------------


def attach_diagnostics(
    trace: IterateTrace,
    problem: MinimaxProblem,
    which: tuple[str, ...] = ("phi", "grad_phi", "moreau_grad", "delta", "gap"),
    tol: float = 1e-8,
    stride: int = 1,
    prefer_ground_truth: bool = True,
) -> IterateTrace:
    """Compute per-record diagnostics lazily on (a further thinning of) the
    recording grid, preferring closed-form oracles where available.

    Fills ``trace.diagnostics`` with arrays aligned to the records; entries
    not computed (off-stride or unavailable) are NaN.
    """
    n = len(trace.ts)
    gt = problem.ground_truth if prefer_ground_truth else None
    idx = list(range(0, n, max(1, stride)))
    if (n - 1) not in idx:
        idx.append(n - 1)

    def blank():
        return np.full(n, np.nan)

    out = {}
    phi_vals = None
    if "phi" in which or "gap" in which:
        phi_vals = blank()
        for k in idx:
            if gt is not None and gt.phi is not None:
                phi_vals[k] = gt.phi(trace.xs[k])
            else:
                phi_vals[k], _ = eval_phi(problem, trace.xs[k], tol)
        if "phi" in which:
            out["phi"] = phi_vals
    if "grad_phi" in which and problem.constants.mu > 0:
        arr = blank()
        for k in idx:
            if gt is not None and gt.grad_phi is not None:
                g = gt.grad_phi(trace.xs[k])
            else:
                g = grad_phi(problem, trace.xs[k], tol)
            arr[k] = np.linalg.norm(g)
        out["grad_phi_norm"] = arr
    if "moreau_grad" in which:
        arr = blank()
        for k in idx:
            if gt is not None and gt.moreau_grad is not None:
                g = gt.moreau_grad(trace.xs[k])
            else:
                g = moreau_grad(problem, trace.xs[k], tol)
            arr[k] = np.linalg.norm(g)
        out["moreau_grad_norm"] = arr
    if "delta" in which and problem.constants.mu > 0:
        arr = blank()
        for k in idx:
            if gt is not None and gt.y_star is not None:
                ys = gt.y_star(trace.xs[k])
            else:
                _, ys = eval_phi(problem, trace.xs[k], tol)
            arr[k] = float(np.sum((ys - trace.ys[k]) ** 2))
        out["delta"] = arr
    if "gap" in which:
        arr = blank()
        for k in idx:
            arr[k] = phi_vals[k] - trace.f_vals[k]
        out["gap"] = arr
    trace.diagnostics.update(out)
    return trace
