import numpy as np
import pytest

from minimax_lab import SolverConfig, make_bilinear_box, make_quadratic_nsc
from minimax_lab.solvers import run_gda


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Compile both structured-problem kernels before any timed test runs."""
    cfg = SolverConfig(eta_x=1e-4, eta_y=1e-3, horizon_T=8)
    quad = make_quadratic_nsc(np.diag([1.0, -3.0]), np.eye(2), 1.0, 10.0)
    bil = make_bilinear_box(1.0, 1)
    run_gda(quad, cfg, np.array([1.0, 1.0]), np.array([1.0, 1.0]))
    run_gda(bil, cfg, np.array([1.0]), np.array([0.0]))


@pytest.fixture(scope="session")
def quad_canonical():
    return make_quadratic_nsc(np.diag([1.0, -3.0]), np.eye(2), 1.0, 10.0)


@pytest.fixture(scope="session")
def quad_convergent():
    return make_quadratic_nsc(np.diag([1.0, -0.5]), np.eye(2), 1.0, 10.0)


@pytest.fixture(scope="session")
def bilinear1():
    return make_bilinear_box(1.0, 1)
