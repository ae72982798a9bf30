"""Property checks and bound audits with exact constants.

Each audit replays quantities derivable from a recorded trace (primal values,
maximizer tracking error, Moreau-envelope gradients) and checks the
corresponding per-step inequality or aggregate rate bound with its exact
constants, allowing only an explicit numerical slack.  Audits are pure
functions of (trace, problem) and fail loudly rather than silently skipping.

Per-step audits instantiate the descent stepsize from the reference schedule
implied by the problem constants, not from the trace's configuration: the
inequalities are stated for that schedule, so traces produced with inflated
stepsizes are expected to violate them (this is the negative-fixture path).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .core import (
    CannotAudit,
    ContractViolation,
    InvalidRegime,
    MinimaxProblem,
    Regime,
)
from .solvers import IterateTrace

__all__ = [
    "AuditResult",
    "finite_diff_check",
    "estimate_constants",
    "check_ystar_lipschitz",
    "check_weak_convexity",
    "audit_nsc_descent",
    "audit_nsc_delta_recursion",
    "audit_nc_descent",
    "audit_rate_bound",
    "run_suite",
    "SUITES",
]


@dataclass
class AuditResult:
    """Outcome of one audit: worst-case lhs vs rhs and the allowed slack."""

    name: str
    passed: bool
    lhs: float
    rhs: float
    slack: float = 0.0
    details: dict = field(default_factory=dict)

    @property
    def margin(self) -> float:
        return self.rhs - self.lhs

    def to_json(self) -> str:
        def clean(v):
            if isinstance(v, (np.floating, np.integer)):
                return float(v)
            if isinstance(v, np.ndarray):
                return v.tolist()
            if isinstance(v, dict):
                return {k: clean(x) for k, x in v.items()}
            if isinstance(v, (list, tuple)):
                return [clean(x) for x in v]
            return v

        return json.dumps(
            {
                "name": self.name,
                "passed": bool(self.passed),
                "lhs": float(self.lhs),
                "rhs": float(self.rhs),
                "margin": float(self.margin),
                "slack": float(self.slack),
                "details": clean(self.details),
            }
        )

    def __str__(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"{tag} {self.name}: lhs={self.lhs:.6g} rhs={self.rhs:.6g}"


def _worst(name, pairs, slack, details=None) -> AuditResult:
    """Fold per-step (lhs, rhs) pairs into a single worst-margin result."""
    pairs = list(pairs)
    if not pairs:
        raise CannotAudit(f"{name}: nothing to audit")
    margins = [r + slack - l for l, r in pairs]
    k = int(np.argmin(margins))
    lhs, rhs = pairs[k]
    out = AuditResult(
        name=name,
        passed=bool(all(m >= 0 for m in margins)),
        lhs=float(lhs),
        rhs=float(rhs),
        slack=float(slack),
        details={"worst_index": k, "n_checked": len(pairs)},
    )
    if details:
        out.details.update(details)
    return out


def finite_diff_check(scalar_fn, grad_fn, x, h: float) -> float:
    """Max relative error of grad_fn vs central differences of scalar_fn."""
    if h <= 0:
        raise ContractViolation("h must be positive")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    g = np.atleast_1d(np.asarray(grad_fn(x), dtype=float))
    worst = 0.0
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = h
        num = (scalar_fn(x + e) - scalar_fn(x - e)) / (2.0 * h)
        worst = max(worst, abs(num - g[i]) / (1.0 + abs(g[i])))
    return worst


def estimate_constants(
    problem: MinimaxProblem,
    n_samples: int,
    rng: np.random.Generator,
    x_scale: float = 2.0,
) -> tuple[float, float, float]:
    """Sampled lower-bound estimates (ell_hat, L_hat, mu_hat).

    ell_hat: max joint-gradient difference ratio over sampled pairs (a lower
    bound on the true smoothness constant).  L_hat: max value difference
    ratio in x at fixed y.  mu_hat: tightest concavity modulus consistent
    with sampled quadratic lower bounds in y (an upper bound on nothing --
    it can only overestimate the true infimum mu by missing its witness).
    """
    if n_samples < 2:
        raise ContractViolation("need at least two samples")
    m, n = problem.dim_x, problem.dim_y
    proj = problem.constraint.project
    ell_hat = 0.0
    L_hat = 0.0
    mu_hat = math.inf
    for _ in range(n_samples):
        x1 = rng.normal(size=m) * x_scale
        x2 = rng.normal(size=m) * x_scale
        y1 = proj(rng.normal(size=n) * x_scale)
        y2 = proj(rng.normal(size=n) * x_scale)
        z = np.concatenate([x1 - x2, y1 - y2])
        dz = float(np.linalg.norm(z))
        if dz > 1e-12:
            g1 = np.concatenate(
                [problem.grad_x(x1, y1), problem.grad_y(x1, y1)]
            )
            g2 = np.concatenate(
                [problem.grad_x(x2, y2), problem.grad_y(x2, y2)]
            )
            ell_hat = max(ell_hat, float(np.linalg.norm(g1 - g2)) / dz)
        dx = float(np.linalg.norm(x1 - x2))
        if dx > 1e-12:
            L_hat = max(
                L_hat,
                abs(problem.value(x1, y1) - problem.value(x2, y1)) / dx,
            )
        dy = float(np.linalg.norm(y1 - y2))
        if dy > 1e-12:
            gy = np.asarray(problem.grad_y(x1, y1), dtype=float)
            gap = (
                problem.value(x1, y1)
                + float(gy @ (y2 - y1))
                - problem.value(x1, y2)
            )
            mu_hat = min(mu_hat, max(0.0, 2.0 * gap / (dy * dy)))
    if not math.isfinite(mu_hat):
        mu_hat = 0.0
    return ell_hat, L_hat, mu_hat


def _ystar(problem: MinimaxProblem, x, tol=1e-10):
    gt = problem.ground_truth
    if gt is not None and gt.y_star is not None:
        return np.asarray(gt.y_star(x), dtype=float)
    from .stationarity import eval_phi

    zeta = problem.constants.ell * tol * tol
    return eval_phi(problem, x, zeta)[1]


def check_ystar_lipschitz(
    problem: MinimaxProblem, n_pairs: int, rng: np.random.Generator
) -> AuditResult:
    """Max sampled ratio ||y*(x) - y*(x')|| / ||x - x'|| against kappa."""
    if problem.constants.mu <= 0:
        raise InvalidRegime("maximizer Lipschitz audit requires mu > 0")
    kap = problem.constants.kappa
    worst = 0.0
    for _ in range(n_pairs):
        x1 = rng.normal(size=problem.dim_x) * 2.0
        x2 = x1 + rng.normal(size=problem.dim_x)
        d = float(np.linalg.norm(x1 - x2))
        if d < 1e-9:
            continue
        r = float(np.linalg.norm(_ystar(problem, x1) - _ystar(problem, x2))) / d
        worst = max(worst, r)
    return AuditResult(
        name="ystar_lipschitz",
        passed=worst <= kap * (1.0 + 1e-6),
        lhs=worst,
        rhs=kap,
        slack=kap * 1e-6,
        details={"n_pairs": n_pairs},
    )


def check_weak_convexity(
    problem: MinimaxProblem,
    n_pairs: int,
    rng: np.random.Generator,
    modulus: Optional[float] = None,
    phi_tol: float = 1e-9,
) -> AuditResult:
    """Midpoint convexity of Phi + (modulus/2) ||.||^2 (default modulus ell)."""
    ell = problem.constants.ell if modulus is None else float(modulus)
    gt = problem.ground_truth

    def phi(x):
        if gt is not None and gt.phi is not None:
            return float(gt.phi(x))
        from .stationarity import eval_phi

        return eval_phi(problem, x, phi_tol)[0]

    def g(x):
        return phi(x) + 0.5 * ell * float(x @ x)

    pairs = []
    for _ in range(n_pairs):
        x1 = rng.normal(size=problem.dim_x) * 2.0
        x2 = rng.normal(size=problem.dim_x) * 2.0
        mid = 0.5 * (x1 + x2)
        pairs.append((g(mid), 0.5 * (g(x1) + g(x2))))
    return _worst(
        "weak_convexity", pairs, slack=2.0 * phi_tol, details={"modulus": ell}
    )


# ---------------------------------------------------------------------------
# Per-step audits (strongly concave regime)
# ---------------------------------------------------------------------------


def _reference_eta_x(problem: MinimaxProblem) -> float:
    kap = problem.constants.kappa
    return 1.0 / (16.0 * (kap + 1.0) ** 2 * problem.constants.ell)


def _require_full_grid(trace: IterateTrace):
    if len(trace.ts) < 2 or np.any(np.diff(trace.ts) != 1):
        raise InvalidRegime("per-step audits need an unthinned recording grid")


def _nsc_series(trace: IterateTrace, problem: MinimaxProblem):
    gt = problem.ground_truth
    if (
        problem.constants.mu <= 0
        or gt is None
        or gt.phi is None
        or gt.grad_phi is None
        or gt.y_star is None
    ):
        raise InvalidRegime(
            "audit needs a strongly concave problem with closed-form "
            "primal oracles"
        )
    _require_full_grid(trace)
    n = len(trace.ts)
    phi = np.array([gt.phi(trace.xs[k]) for k in range(n)])
    gp2 = np.array(
        [float(np.sum(np.asarray(gt.grad_phi(trace.xs[k])) ** 2)) for k in range(n)]
    )
    delta = np.array(
        [
            float(np.sum((np.asarray(gt.y_star(trace.xs[k])) - trace.ys[k]) ** 2))
            for k in range(n)
        ]
    )
    return phi, gp2, delta


def audit_nsc_descent(
    trace: IterateTrace, problem: MinimaxProblem, slack_rel: float = 1e-9
) -> AuditResult:
    """Per-step primal descent with the reference two-time-scale stepsize:

        Phi(x_t) <= Phi(x_{t-1}) - (7 eta_x / 16) ||grad Phi(x_{t-1})||^2
                                  + (9 eta_x ell^2 / 16) delta_{t-1}
    """
    phi, gp2, delta = _nsc_series(trace, problem)
    eta = _reference_eta_x(problem)
    ell = problem.constants.ell
    pairs = []
    for t in range(1, len(phi)):
        rhs = (
            phi[t - 1]
            - (7.0 * eta / 16.0) * gp2[t - 1]
            + (9.0 * eta * ell * ell / 16.0) * delta[t - 1]
        )
        pairs.append((phi[t], rhs))
    scale = 1.0 + float(np.max(np.abs(phi)))
    return _worst(
        "nsc_descent", pairs, slack=slack_rel * scale, details={"eta_x": eta}
    )


def audit_nsc_delta_recursion(
    trace: IterateTrace, problem: MinimaxProblem, slack_rel: float = 1e-9
) -> AuditResult:
    """Maximizer tracking-error recursion with the reference stepsize:

        delta_t <= (1 - 1/2k + 4 k^3 ell^2 eta_x^2) delta_{t-1}
                   + 4 k^3 eta_x^2 ||grad Phi(x_{t-1})||^2

    The contraction factor is also checked against the 1 - 1/(4k) cap.
    """
    _, gp2, delta = _nsc_series(trace, problem)
    eta = _reference_eta_x(problem)
    ell = problem.constants.ell
    kap = problem.constants.kappa
    gamma = 1.0 - 1.0 / (2.0 * kap) + 4.0 * kap**3 * ell**2 * eta**2
    beta = 4.0 * kap**3 * eta**2
    pairs = []
    for t in range(1, len(delta)):
        pairs.append((delta[t], gamma * delta[t - 1] + beta * gp2[t - 1]))
    scale = 1.0 + float(np.max(delta))
    res = _worst(
        "nsc_delta_recursion",
        pairs,
        slack=slack_rel * scale,
        details={"eta_x": eta, "gamma": gamma},
    )
    if gamma > 1.0 - 1.0 / (4.0 * kap):
        res.passed = False
        res.details["contraction_cap_exceeded"] = True
    return res


# ---------------------------------------------------------------------------
# Per-step audit (merely concave regime)
# ---------------------------------------------------------------------------


def audit_nc_descent(
    trace: IterateTrace,
    problem: MinimaxProblem,
    stride: int = 1,
    moreau_tol: float = 1e-8,
) -> AuditResult:
    """Per-step Moreau-envelope descent:

        E(x_t) <= E(x_{t-1}) + 2 eta_x ell gap_{t-1}
                  - (eta_x / 4) ||grad E(x_{t-1})||^2 + eta_x^2 ell L^2

    where E is the envelope at smoothing 1/(2 ell) and gap_t is the primal
    gap Phi(x_t) - f(x_t, y_t).  Envelope values/gradients are evaluated only
    at every ``stride``-th step (each is an inner solve).
    """
    if problem.constants.mu > 0:
        raise InvalidRegime("envelope descent audit targets the mu = 0 regime")
    if problem.constants.lip_L <= 0:
        raise InvalidRegime("audit needs the value-Lipschitz constant L")
    _require_full_grid(trace)
    gt = problem.ground_truth
    from . import stationarity as st

    def env(x):
        if gt is not None and gt.moreau_env is not None:
            return float(gt.moreau_env(x))
        return st.moreau_env(problem, x, moreau_tol)

    def mg2(x):
        if gt is not None and gt.moreau_grad is not None:
            return float(np.sum(np.asarray(gt.moreau_grad(x)) ** 2))
        return float(np.sum(st.moreau_grad(problem, x, moreau_tol) ** 2))

    def phi(x):
        if gt is not None and gt.phi is not None:
            return float(gt.phi(x))
        return st.eval_phi(problem, x, moreau_tol)[0]

    eta = trace.config.eta_x
    ell = problem.constants.ell
    L = problem.constants.lip_L
    pairs = []
    checked = range(1, len(trace.ts), max(1, stride))
    for t in checked:
        gap_prev = phi(trace.xs[t - 1]) - trace.f_vals[t - 1]
        rhs = (
            env(trace.xs[t - 1])
            + 2.0 * eta * ell * gap_prev
            - (eta / 4.0) * mg2(trace.xs[t - 1])
            + eta * eta * ell * L * L
        )
        pairs.append((env(trace.xs[t]), rhs))
    return _worst(
        "nc_descent", pairs, slack=4.0 * moreau_tol, details={"eta_x": eta}
    )


# ---------------------------------------------------------------------------
# Aggregate rate bounds
# ---------------------------------------------------------------------------


def _as_traces(traces) -> list[IterateTrace]:
    if isinstance(traces, IterateTrace):
        return [traces]
    return list(traces)


def _default_prefixes(trace: IterateTrace, need_next: bool) -> list[int]:
    ts = trace.ts
    top = int(ts[-1]) - (1 if need_next else 0)
    if top < 1:
        raise CannotAudit("trace too short for a rate audit")
    grid = np.unique(
        np.geomspace(1, max(top, 1), num=8).astype(np.int64)
    )
    out = []
    for g in grid:
        # snap to the closest recorded iteration <= g
        k = int(np.searchsorted(ts, g, side="right")) - 1
        t = int(ts[k])
        if t >= 1 and t <= top and (not out or t != out[-1]):
            out.append(t)
    return out


def audit_rate_bound(
    traces,
    problem: MinimaxProblem,
    regime: Optional[Regime] = None,
    prefixes: Optional[Sequence[int]] = None,
    epsilon: Optional[float] = None,
    sigma: float = 0.0,
    slack_abs: float = 1e-8,
) -> AuditResult:
    """Prefix-averaged squared stationarity residual against the rate bound.

    Strongly concave regime (descent-ascent): for every prefix T,

        (1/(T+1)) sum_t ||grad Phi(x_t)||^2
            <= (128 k^2 ell D_T + 5 k ell^2 D^2) / (T+1)   [+ 2*13 sigma^2 k / M]

    where D_T is the realized primal decrease Phi(x_0) - E[Phi(x_{T+1})]
    (or Phi(x_0) - min Phi when a certified minimum is available), which the
    derivation upper-bounds by the initial suboptimality.  Max-oracle runs
    use 32 k ell D_T / (T+1) + 3 ell zeta [+ 2 * sigma^2 / (2M)].  Merely
    concave runs average the squared envelope gradient on the recorded grid
    against 4 Dhat_Phi / (eta_x (T+1)) + 8 ell Dhat_0 / (T+1) + eps^2/2
    (3 eps^2/4 with noise), which requires ``epsilon``.

    Stochastic expectations are estimated by seed-averaging over the given
    traces; the noise-dependent term carries a 2x slack for Monte-Carlo
    error.
    """
    runs = _as_traces(traces)
    if not runs:
        raise CannotAudit("no traces given")
    gt = problem.ground_truth
    cfg = runs[0].config
    if regime is None:
        regime = cfg.regime
    if regime is None:
        regime = (
            Regime.NC_SC_DET if problem.constants.mu > 0 else Regime.NC_C_DET
        )
    strongly = regime in (Regime.NC_SC_DET, Regime.NC_SC_STOCH)
    stochastic = sigma > 0
    maxoracle = cfg.zeta is not None
    ell = problem.constants.ell
    D = problem.constants.diameter_D

    if strongly:
        if gt is None or gt.phi is None or gt.grad_phi is None:
            raise CannotAudit("needs closed-form primal value and gradient")
        kap = problem.constants.kappa
        if prefixes is None:
            prefixes = _default_prefixes(runs[0], need_next=True)
        per_seed_gp2 = []
        per_seed_phi = []
        for tr in runs:
            _require_full_grid(tr)
            per_seed_gp2.append(
                np.array(
                    [
                        float(np.sum(np.asarray(gt.grad_phi(x)) ** 2))
                        for x in tr.xs
                    ]
                )
            )
            per_seed_phi.append(np.array([float(gt.phi(x)) for x in tr.xs]))
        gp2 = np.mean(per_seed_gp2, axis=0)
        phi = np.mean(per_seed_phi, axis=0)
        pairs = []
        per_prefix = []
        for T in prefixes:
            if T + 1 >= len(phi):
                raise CannotAudit(f"prefix {T} needs a record at {T + 1}")
            lhs = float(np.mean(gp2[: T + 1]))
            if gt.phi_min is not None:
                decrease = phi[0] - gt.phi_min
            else:
                decrease = max(0.0, phi[0] - phi[T + 1])
            if maxoracle:
                rhs = 32.0 * kap * ell * decrease / (T + 1) + 3.0 * ell * cfg.zeta
                if stochastic:
                    rhs += 2.0 * sigma**2 / (2.0 * cfg.batch_M)
            else:
                rhs = (
                    128.0 * kap**2 * ell * decrease + 5.0 * kap * ell**2 * D**2
                ) / (T + 1)
                if stochastic:
                    rhs += 2.0 * 13.0 * sigma**2 * kap / cfg.batch_M
            pairs.append((lhs, rhs))
            per_prefix.append({"T": T, "lhs": lhs, "rhs": rhs})
        return _worst(
            "rate_bound_" + regime.value,
            pairs,
            slack=slack_abs,
            details={"prefixes": per_prefix, "n_seeds": len(runs)},
        )

    # merely concave regime: envelope-gradient average on the recorded grid
    if epsilon is None:
        raise CannotAudit("merely-concave rate audit requires epsilon")
    if gt is None or gt.phi is None or gt.phi_min is None:
        raise CannotAudit("needs closed-form primal value with certified min")
    from . import stationarity as st

    def env(x):
        if gt.moreau_env is not None:
            return float(gt.moreau_env(x))
        return st.moreau_env(problem, x, 1e-8)

    def mg2(x):
        if gt.moreau_grad is not None:
            return float(np.sum(np.asarray(gt.moreau_grad(x)) ** 2))
        return float(np.sum(st.moreau_grad(problem, x, 1e-8) ** 2))

    if prefixes is None:
        prefixes = _default_prefixes(runs[0], need_next=False)
    eta = cfg.eta_x
    eps2 = epsilon * epsilon
    resid = 0.75 * eps2 if stochastic else 0.5 * eps2
    per_seed = []
    for tr in runs:
        vals = np.array([mg2(x) for x in tr.xs])
        per_seed.append(vals)
    mg2_mean = np.mean(per_seed, axis=0)
    # the envelope minimum coincides with the primal minimum
    env0 = np.mean([env(tr.xs[0]) for tr in runs])
    dhat_phi = max(0.0, env0 - gt.phi_min)
    dhat_0 = max(
        0.0,
        float(
            np.mean([float(gt.phi(tr.xs[0])) - tr.f_vals[0] for tr in runs])
        ),
    )
    ts = runs[0].ts
    pairs = []
    per_prefix = []
    for T in prefixes:
        mask = ts <= T
        if not np.any(mask):
            raise CannotAudit(f"no records within prefix {T}")
        lhs = float(np.mean(mg2_mean[mask]))
        rhs = 4.0 * dhat_phi / (eta * (T + 1)) + 8.0 * ell * dhat_0 / (T + 1) + resid
        pairs.append((lhs, rhs))
        per_prefix.append({"T": T, "lhs": lhs, "rhs": rhs})
    return _worst(
        "rate_bound_" + regime.value,
        pairs,
        slack=slack_abs,
        details={
            "prefixes": per_prefix,
            "n_seeds": len(runs),
            "estimated_on_grid": True,
        },
    )


# ---------------------------------------------------------------------------
# Named suites (used by the command-line front end)
# ---------------------------------------------------------------------------


def _suite_nsc(fault: Optional[str] = None) -> list[AuditResult]:
    from . import problems as pb
    from . import solvers as sv

    prob = pb.make_quadratic_nsc(np.diag([1.0, -3.0]), np.eye(2), 1.0, 10.0)
    eta_x = _reference_eta_x(prob)
    mult = 10.0 if fault == "stepsize10x" else 1.0
    cfg = sv.SolverConfig(
        eta_x=mult * eta_x,
        eta_y=1.0 / prob.constants.ell,
        horizon_T=400,
        regime=Regime.NC_SC_DET,
    )
    trace = sv.run_gda(prob, cfg, np.array([1.0, 1.0]), np.array([1.0, 1.0]))
    rng = np.random.default_rng(7)
    results = [
        audit_nsc_descent(trace, prob),
        audit_nsc_delta_recursion(trace, prob),
        audit_rate_bound(trace, prob, prefixes=[10, 100, 399]),
        check_ystar_lipschitz(prob, 500, rng),
    ]
    return results


def _suite_nc() -> list[AuditResult]:
    from . import problems as pb
    from . import solvers as sv

    prob = pb.make_bilinear_box(1.0, 1)
    eps = 0.5
    full = sv.theorem_stepsizes(
        Regime.NC_C_DET, prob.constants, eps, delta_phi_estimate=0.75
    )
    cfg = sv.SolverConfig(
        eta_x=full.eta_x,
        eta_y=full.eta_y,
        horizon_T=2000,
        regime=Regime.NC_C_DET,
    )
    trace = sv.run_gda(prob, cfg, np.array([1.0]), np.array([0.0]))
    rng = np.random.default_rng(11)
    return [
        audit_nc_descent(trace, prob, stride=10),
        audit_rate_bound(trace, prob, epsilon=eps),
        check_weak_convexity(prob, 500, rng),
    ]


def _suite_stationarity() -> list[AuditResult]:
    from . import problems as pb
    from . import stationarity as st

    quad = pb.make_quadratic_nsc(np.diag([1.0, -3.0]), np.eye(2), 1.0, 10.0)
    bil = pb.make_bilinear_box(1.0, 1)
    rng = np.random.default_rng(3)
    out = []

    # smooth primal gradient vs finite differences of the primal value
    worst = 0.0
    for _ in range(20):
        x = rng.uniform(-2, 2, size=2)
        worst = max(
            worst,
            finite_diff_check(
                lambda v: st.eval_phi(quad, v, 1e-12)[0],
                lambda v: st.grad_phi(quad, v, 1e-10),
                x,
                1e-5,
            ),
        )
    out.append(
        AuditResult("danskin_finite_diff", worst <= 1e-4, worst, 1e-4)
    )

    # closed-form envelope gradient on a grid
    grid = np.linspace(-3, 3, 121)
    worst = 0.0
    for v in grid:
        num = st.moreau_grad(bil, np.array([v]), 1e-8)[0]
        ref = float(np.clip(2.0 * v, -1.0, 1.0))
        worst = max(worst, abs(num - ref))
    out.append(AuditResult("moreau_closed_form", worst <= 1e-6, worst, 1e-6))

    # envelope minorization and prox descent
    pairs_env = []
    pairs_prox = []
    pairs_surr = []
    pairs_smooth = []
    ell = bil.constants.ell
    gt = bil.ground_truth
    for _ in range(50):
        v = rng.uniform(-3, 3, size=1)
        prox = st.moreau_prox(bil, v, 1e-10)
        pairs_env.append((gt.moreau_env(v), gt.phi(v)))
        pairs_prox.append((gt.phi(prox), gt.phi(v)))
        mg = float(np.linalg.norm(gt.moreau_grad(v)))
        pairs_surr.append((float(np.linalg.norm(v - prox)), mg / (2.0 * ell)))
        w = rng.uniform(-3, 3, size=1)
        lin = gt.moreau_env(v) + float((w - v) @ gt.moreau_grad(v))
        # the envelope at smoothing 1/(2 ell) is 2*ell-smooth (tight for the
        # soft-threshold closed form), giving the ell * ||.||^2 quadratic bound
        pairs_smooth.append(
            (abs(gt.moreau_env(w) - lin), ell * float(np.sum((w - v) ** 2)))
        )
    out.append(_worst("envelope_minorizes_phi", pairs_env, slack=1e-10))
    out.append(_worst("prox_decreases_phi", pairs_prox, slack=1e-10))
    # the bound is tight (equality beyond the threshold), and value-based
    # prox search is only accurate to ~sqrt(machine eps) near the flat minimum
    out.append(_worst("prox_displacement_bound", pairs_surr, slack=1e-6))
    out.append(_worst("envelope_smoothness", pairs_smooth, slack=1e-10))
    return out


SUITES = {
    "nsc": _suite_nsc,
    "nc": _suite_nc,
    "stationarity": _suite_stationarity,
}


def run_suite(name: str, fault: Optional[str] = None) -> list[AuditResult]:
    """Run one named audit suite ('nsc', 'nc', 'stationarity', or 'all')."""
    if name == "all":
        out = []
        for key in ("nsc", "nc", "stationarity"):
            out.extend(run_suite(key, fault=fault))
        return out
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}")
    if name == "nsc":
        return _suite_nsc(fault=fault)
    if fault is not None:
        raise KeyError(f"suite {name!r} has no fault fixture {fault!r}")
    return SUITES[name]()
