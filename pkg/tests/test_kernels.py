import numpy as np
import pytest

from minimax_lab import SolverConfig
from minimax_lab.kernels import available_backends, backend, get_kernel
from minimax_lab.solvers import run_gda


def test_backend_selection(monkeypatch):
    monkeypatch.setenv("MINIMAX_LAB_BACKEND", "numpy")
    assert backend() == "numpy"
    monkeypatch.setenv("MINIMAX_LAB_BACKEND", "numba")
    assert backend() == "numba"
    monkeypatch.setenv("MINIMAX_LAB_BACKEND", "weird")
    with pytest.raises(RuntimeError):
        backend()
    monkeypatch.delenv("MINIMAX_LAB_BACKEND")
    assert backend() in ("numba", "numpy")


def test_available_backends_include_fallback():
    assert "numpy" in available_backends()


def test_unknown_kernel_family():
    with pytest.raises(KeyError):
        get_kernel("no_such_family")


@pytest.mark.parametrize("case", ["quadratic", "bilinear"])
def test_numba_and_numpy_paths_bit_identical(case, quad_canonical, bilinear1):
    if "numba" not in available_backends():
        pytest.skip("compiled backend unavailable")
    if case == "quadratic":
        prob, x0, y0 = quad_canonical, np.array([1.0, 1.0]), np.array([1.0, 1.0])
    else:
        prob, x0, y0 = bilinear1, np.array([1.3]), np.array([0.2])
    cfg = SolverConfig(
        eta_x=0.01 / prob.constants.ell, eta_y=0.5 / prob.constants.ell, horizon_T=1000
    )
    a = run_gda(prob, cfg, x0, y0, backend="numba")
    b = run_gda(prob, cfg, x0, y0, backend="numpy")
    np.testing.assert_array_equal(a.xs, b.xs)
    np.testing.assert_array_equal(a.ys, b.ys)
    np.testing.assert_array_equal(a.f_vals, b.f_vals)
    np.testing.assert_array_equal(a.grad_x_norms, b.grad_x_norms)


@pytest.mark.parametrize("case", ["quadratic", "bilinear"])
def test_kernel_agrees_with_generic_loop(case, quad_canonical, bilinear1):
    if case == "quadratic":
        prob, x0, y0 = quad_canonical, np.array([1.0, 1.0]), np.array([1.0, 1.0])
    else:
        prob, x0, y0 = bilinear1, np.array([1.3]), np.array([0.2])
    cfg = SolverConfig(
        eta_x=0.01 / prob.constants.ell, eta_y=0.5 / prob.constants.ell, horizon_T=500
    )
    fast = run_gda(prob, cfg, x0, y0)
    slow = run_gda(prob, cfg, x0, y0, backend="generic")
    np.testing.assert_array_equal(fast.ts, slow.ts)
    np.testing.assert_allclose(fast.xs, slow.xs, rtol=0, atol=1e-12)
    np.testing.assert_allclose(fast.ys, slow.ys, rtol=0, atol=1e-12)
    np.testing.assert_allclose(fast.f_vals, slow.f_vals, rtol=0, atol=1e-12)


def test_kernel_thinned_grid(quad_canonical):
    cfg = SolverConfig(eta_x=1e-4, eta_y=0.1, horizon_T=25_000)
    tr = run_gda(quad_canonical, cfg, np.array([1.0, 1.0]), np.array([1.0, 1.0]))
    stride = cfg.stride()
    assert stride == 3
    assert tr.ts[0] == 0 and tr.ts[-1] == 25_000
    assert np.all(np.diff(tr.ts[:-1]) == stride)


def test_kernel_abort_on_divergence(quad_canonical):
    # absurd stepsizes blow up the iterates; the run must stop with a
    # diagnostic record instead of raising
    cfg = SolverConfig(eta_x=50.0, eta_y=60.0, horizon_T=10_000)
    tr = run_gda(quad_canonical, cfg, np.array([1.0, 1.0]), np.array([1.0, 1.0]))
    assert tr.aborted
    assert tr.abort_index is not None
    assert tr.ts[-1] == tr.abort_index
    # the diagnostic record shows a non-finite iterate or objective value
    assert not (np.all(np.isfinite(tr.xs[-1])) and np.isfinite(tr.f_vals[-1]))
