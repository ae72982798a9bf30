"""Test-problem suite with closed-form ground truth and a stochastic wrapper.

Three families:

* a quadratic saddle with a strongly concave ascent block (smooth primal
  function, closed-form maximizer and gradient),
* the bilinear toy problem ``scale * x . y`` over a box (merely concave,
  nonsmooth primal function with a closed-form Moreau envelope),
* a desk-scale adversarially-perturbed regression problem (smooth saturating
  model, per-sample perturbation balls, concavity enforced by a quadratic
  penalty).
"""

from __future__ import annotations

import importlib.resources

import numpy as np

from .core import (
    Ball,
    Box,
    ClosedFormOracles,
    ContractViolation,
    KernelSpec,
    MinimaxProblem,
    ProblemConstants,
    ProductBall,
    StochasticOracle,
)

__all__ = [
    "spectral_norm",
    "make_quadratic_nsc",
    "make_bilinear_box",
    "make_robust_regression",
    "add_gaussian_noise",
    "load_default_dataset",
]


def spectral_norm(H: np.ndarray, tol: float = 1e-10, max_iter: int = 20_000) -> float:
    """Largest singular value of a symmetric matrix by power iteration."""
    H = np.asarray(H, dtype=float)
    n = H.shape[0]
    # deterministic start with all modes excited
    v = np.cos(np.arange(1, n + 1, dtype=float))
    v /= np.linalg.norm(v)
    est = 0.0
    for _ in range(max_iter):
        # iterate on H^2 so eigenvalue signs cannot stall convergence
        w = H @ (H @ v)
        nrm = np.linalg.norm(w)
        if nrm == 0.0:
            return 0.0
        new_est = np.sqrt(nrm)
        v = w / nrm
        if abs(new_est - est) <= tol * max(1.0, new_est):
            return float(new_est)
        est = new_est
    return float(est)


# ---------------------------------------------------------------------------
# Quadratic saddle with strongly concave ascent block
# ---------------------------------------------------------------------------


def make_quadratic_nsc(
    A: np.ndarray, B: np.ndarray, mu: float, radius: float
) -> MinimaxProblem:
    """f(x, y) = 0.5 x'Ax + x'By - 0.5 mu ||y||^2 over a centered ball.

    ``A`` must be symmetric with at least one negative eigenvalue so the
    descent block is genuinely nonconvex.  Closed forms (valid wherever the
    unconstrained maximizer ``B'x / mu`` lies inside the ball, and extended
    continuously to the boundary):

    * y*(x) = radial clip of B'x / mu,
    * Phi(x) = f(x, y*(x)); on the interior 0.5 x'Ax + ||B'x||^2 / (2 mu),
    * grad Phi(x) = A x + B y*(x); on the interior (A + BB'/mu) x.

    The smoothness constant is the exact spectral norm of the joint Hessian
    [[A, B], [B', -mu I]].
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    B = np.atleast_2d(np.asarray(B, dtype=float))
    if A.shape[0] != A.shape[1] or not np.allclose(A, A.T, atol=1e-12):
        raise ContractViolation("A must be symmetric")
    if mu <= 0:
        raise ContractViolation("mu must be positive")
    if radius <= 0:
        raise ContractViolation("radius must be positive")
    m, n = B.shape
    if A.shape[0] != m:
        raise ContractViolation("A and B have incompatible shapes")

    H = np.block([[A, B], [B.T, -mu * np.eye(n)]])
    ell = spectral_norm(H)
    constraint = Ball(center=np.zeros(n), radius=float(radius))

    def value(x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        return float(0.5 * x @ A @ x + x @ B @ y - 0.5 * mu * y @ y)

    def grad_x(x, y):
        return A @ np.asarray(x, dtype=float) + B @ np.asarray(y, dtype=float)

    def grad_y(x, y):
        return B.T @ np.asarray(x, dtype=float) - mu * np.asarray(y, dtype=float)

    def y_star(x):
        return constraint.project(B.T @ np.asarray(x, dtype=float) / mu)

    def phi(x):
        return value(x, y_star(x))

    def grad_phi(x):
        return grad_x(x, y_star(x))

    gt = ClosedFormOracles(phi=phi, grad_phi=grad_phi, y_star=y_star, phi_min=None)
    spec = KernelSpec(
        family="quadratic_ball",
        params={"A": A, "B": B, "mu": float(mu), "radius": float(radius)},
    )
    return MinimaxProblem(
        name="quadratic_nsc",
        dim_x=m,
        dim_y=n,
        value=value,
        grad_x=grad_x,
        grad_y=grad_y,
        constants=ProblemConstants(
            ell=ell, lip_L=0.0, mu=float(mu), diameter_D=2.0 * float(radius)
        ),
        constraint=constraint,
        ground_truth=gt,
        kernel=spec,
    )


# ---------------------------------------------------------------------------
# Bilinear objective over a box
# ---------------------------------------------------------------------------


def make_bilinear_box(scale: float = 1.0, dim: int = 1) -> MinimaxProblem:
    """f(x, y) = scale * x . y over y in [-1, 1]^dim.

    The primal function is Phi(x) = scale * sum |x_i|, nonsmooth but weakly
    convex, with closed-form proximal point (coordinatewise soft threshold at
    1/2) and Moreau-envelope gradient clamp(2 * scale * x, -scale, scale).
    """
    if scale <= 0:
        raise ContractViolation("scale must be positive")
    if dim < 1:
        raise ContractViolation("dim must be >= 1")
    s = float(scale)
    d = int(dim)
    constraint = Box(lo=-np.ones(d), hi=np.ones(d))

    def value(x, y):
        return float(s * np.asarray(x, dtype=float) @ np.asarray(y, dtype=float))

    def grad_x(x, y):
        return s * np.asarray(y, dtype=float)

    def grad_y(x, y):
        return s * np.asarray(x, dtype=float)

    def phi(x):
        return float(s * np.sum(np.abs(np.asarray(x, dtype=float))))

    def y_star(x):
        return np.sign(np.asarray(x, dtype=float))

    def moreau_prox_cf(x):
        x = np.asarray(x, dtype=float)
        return np.sign(x) * np.maximum(np.abs(x) - 0.5, 0.0)

    def moreau_grad_cf(x):
        x = np.asarray(x, dtype=float)
        return np.clip(2.0 * s * x, -s, s)

    def moreau_env_cf(x):
        x = np.asarray(x, dtype=float)
        ax = np.abs(x)
        per = np.where(ax <= 0.5, s * ax * ax, s * (ax - 0.25))
        return float(np.sum(per))

    gt = ClosedFormOracles(
        phi=phi,
        y_star=y_star,
        moreau_grad=moreau_grad_cf,
        moreau_env=moreau_env_cf,
        phi_min=0.0,
    )
    spec = KernelSpec(
        family="bilinear_box",
        params={"scale": s, "lo": constraint.lo, "hi": constraint.hi},
    )
    return MinimaxProblem(
        name="bilinear_box",
        dim_x=d,
        dim_y=d,
        value=value,
        grad_x=grad_x,
        grad_y=grad_y,
        constants=ProblemConstants(
            ell=s,
            lip_L=s * float(np.sqrt(d)),
            mu=0.0,
            diameter_D=2.0 * float(np.sqrt(d)),
        ),
        constraint=constraint,
        ground_truth=gt,
        kernel=spec,
    )


# ---------------------------------------------------------------------------
# Adversarially perturbed regression
# ---------------------------------------------------------------------------


def load_default_dataset() -> tuple[np.ndarray, np.ndarray]:
    """Packaged synthetic regression fixture (N=32, d=4, fixed seed)."""
    ref = importlib.resources.files("minimax_lab.data").joinpath("regression_32x4.csv")
    raw = np.loadtxt(str(ref), delimiter=",", skiprows=1)
    return raw[:, :-1].copy(), raw[:, -1].copy()


def make_robust_regression(
    features: np.ndarray,
    targets: np.ndarray,
    gamma: float,
    perturb_radius: float,
    constants_samples: int = 2000,
    constants_seed: int = 0,
) -> MinimaxProblem:
    """Adversarial regression: each sample's input may move in a small ball.

    The model is a single saturating unit m(x; a) = tanh(a . x) with squared
    error loss.  The ascent variable is the concatenation of all perturbed
    inputs y_i, each constrained to a ball around the clean input xi_i, and a
    quadratic penalty gamma * ||y_i - xi_i||^2 keeps the inner problem
    strongly concave.  A finite-difference probe of the per-sample Hessian
    blocks rejects penalties too weak for concavity.

    Smoothness constants are estimated numerically at construction by ratio
    sampling (see :func:`minimax_lab.verify.estimate_constants`), inflated by
    a 25% safety margin since sampled estimates are lower bounds.
    """
    X = np.atleast_2d(np.asarray(features, dtype=float))
    t = np.asarray(targets, dtype=float)
    N, d = X.shape
    if t.shape != (N,):
        raise ContractViolation("targets must have one entry per sample")
    if gamma <= 0:
        raise ContractViolation("gamma must be positive")
    if perturb_radius < 0:
        raise ContractViolation("perturb_radius must be nonnegative")
    gamma = float(gamma)
    r = float(perturb_radius)
    constraint = ProductBall(centers=X, radius=r)

    def value(x, y):
        x = np.asarray(x, dtype=float)
        Y = np.asarray(y, dtype=float).reshape(N, d)
        u = Y @ x
        s = np.tanh(u)
        pen = np.sum((Y - X) ** 2)
        return float(np.mean((s - t) ** 2) - gamma * pen / N)

    def grad_x(x, y):
        x = np.asarray(x, dtype=float)
        Y = np.asarray(y, dtype=float).reshape(N, d)
        u = Y @ x
        s = np.tanh(u)
        w = 2.0 * (s - t) * (1.0 - s * s)  # d loss_i / d u_i
        return (w[:, None] * Y).sum(axis=0) / N

    def grad_y(x, y):
        x = np.asarray(x, dtype=float)
        Y = np.asarray(y, dtype=float).reshape(N, d)
        u = Y @ x
        s = np.tanh(u)
        w = 2.0 * (s - t) * (1.0 - s * s)
        g = w[:, None] * x[None, :] - 2.0 * gamma * (Y - X)
        return (g / N).ravel()

    # construction-time concavity probe: the y_i-block Hessian of the inner
    # objective must be negative definite at sampled points
    rng = np.random.default_rng(12345)
    h = 1e-5
    for probe in range(8):
        # unit-scale weight vectors: the loss curvature in y grows with
        # ||x||^2, so the certificate is for the E||x||^2 = 1 region
        x = rng.normal(size=d) / np.sqrt(d)
        y = constraint.project(X.ravel() + rng.normal(size=N * d) * max(r, 0.1))
        for i in range(N):
            block = np.empty((d, d))
            base = grad_y(x, y).reshape(N, d)[i]
            for j in range(d):
                yp = y.copy()
                yp[i * d + j] += h
                block[:, j] = (grad_y(x, yp).reshape(N, d)[i] - base) / h
            block = N * 0.5 * (block + block.T)  # un-normalize the 1/N factor
            lam_max = float(np.max(np.linalg.eigvalsh(block)))
            if lam_max > -1e-6:
                raise ContractViolation(
                    f"gamma={gamma} too small: inner objective not strongly "
                    f"concave at sample {i} (max Hessian eigenvalue {lam_max:.3g})"
                )

    from .verify import estimate_constants  # local import avoids a cycle

    proto = MinimaxProblem(
        name="robust_regression",
        dim_x=d,
        dim_y=N * d,
        value=value,
        grad_x=grad_x,
        grad_y=grad_y,
        constants=ProblemConstants(ell=1.0, mu=0.0, diameter_D=constraint.diameter()),
        constraint=constraint,
        ground_truth=None,
        kernel=None,
    )
    ell_hat, L_hat, mu_hat = estimate_constants(
        proto, constants_samples, np.random.default_rng(constants_seed)
    )
    constants = ProblemConstants(
        ell=1.25 * ell_hat,
        lip_L=1.25 * L_hat,
        mu=min(0.8 * mu_hat, 1.25 * ell_hat),
        diameter_D=constraint.diameter(),
    )
    return MinimaxProblem(
        name="robust_regression",
        dim_x=d,
        dim_y=N * d,
        value=value,
        grad_x=grad_x,
        grad_y=grad_y,
        constants=constants,
        constraint=constraint,
        ground_truth=None,
        kernel=None,
    )


def add_gaussian_noise(problem: MinimaxProblem, sigma: float) -> StochasticOracle:
    """Wrap a problem's gradients with additive Gaussian noise of per-block
    variance sigma^2."""
    return StochasticOracle(base=problem, noise_sigma=float(sigma))
