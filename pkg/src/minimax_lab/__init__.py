"""minimax-lab: two-time-scale descent-ascent solvers and a bound-audit
harness for nonconvex-(strongly)-concave minimax problems.

Public surface: problem abstractions (:mod:`~minimax_lab.core`), the solver
family (:mod:`~minimax_lab.solvers`), stationarity measures built on Danskin
gradients and Moreau envelopes (:mod:`~minimax_lab.stationarity`), closed-form
test problems (:mod:`~minimax_lab.problems`), exact-constant audits
(:mod:`~minimax_lab.verify`), and a command-line front end
(:mod:`~minimax_lab.cli`).
"""

from .core import (
    Ball,
    Box,
    BudgetExceeded,
    CannotAudit,
    ClosedFormOracles,
    ConstraintSet,
    ContractViolation,
    InvalidRegime,
    KernelSpec,
    MinimaxProblem,
    NondifferentiableRegime,
    ProblemConstants,
    ProductBall,
    Regime,
    Simplex,
    SolverConfig,
    StochasticOracle,
    diameter,
    project,
    sample_batch_gradient,
)
from .problems import (
    add_gaussian_noise,
    load_default_dataset,
    make_bilinear_box,
    make_quadratic_nsc,
    make_robust_regression,
)
from .solvers import (
    IterateTrace,
    extragradient_scc,
    inner_max_ga,
    run_gda,
    run_gdmax,
    run_sgda,
    run_sgdmax,
    select_output,
    theorem_stepsizes,
)
from .stationarity import (
    Notion,
    StationarityReport,
    attach_diagnostics,
    check_converse_translation,
    check_joint_stationarity,
    eval_phi,
    grad_phi,
    moreau_env,
    moreau_grad,
    moreau_prox,
    translate_phi_to_joint,
)
from .verify import (
    AuditResult,
    audit_nc_descent,
    audit_nsc_delta_recursion,
    audit_nsc_descent,
    audit_rate_bound,
    check_weak_convexity,
    check_ystar_lipschitz,
    estimate_constants,
    finite_diff_check,
    run_suite,
)

__version__ = "0.1.0"

__all__ = [
    "Ball",
    "Box",
    "BudgetExceeded",
    "CannotAudit",
    "ClosedFormOracles",
    "ConstraintSet",
    "ContractViolation",
    "InvalidRegime",
    "KernelSpec",
    "MinimaxProblem",
    "NondifferentiableRegime",
    "ProblemConstants",
    "ProductBall",
    "Regime",
    "Simplex",
    "SolverConfig",
    "StochasticOracle",
    "diameter",
    "project",
    "sample_batch_gradient",
    "add_gaussian_noise",
    "load_default_dataset",
    "make_bilinear_box",
    "make_quadratic_nsc",
    "make_robust_regression",
    "IterateTrace",
    "extragradient_scc",
    "inner_max_ga",
    "run_gda",
    "run_gdmax",
    "run_sgda",
    "run_sgdmax",
    "select_output",
    "theorem_stepsizes",
    "Notion",
    "StationarityReport",
    "attach_diagnostics",
    "check_converse_translation",
    "check_joint_stationarity",
    "eval_phi",
    "grad_phi",
    "moreau_env",
    "moreau_grad",
    "moreau_prox",
    "translate_phi_to_joint",
    "AuditResult",
    "audit_nc_descent",
    "audit_nsc_delta_recursion",
    "audit_nsc_descent",
    "audit_rate_bound",
    "check_weak_convexity",
    "check_ystar_lipschitz",
    "estimate_constants",
    "finite_diff_check",
    "run_suite",
    "__version__",
]
