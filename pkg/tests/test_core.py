import numpy as np
import pytest

from minimax_lab.core import (
    Ball,
    Box,
    ContractViolation,
    InvalidRegime,
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
from minimax_lab.problems import make_bilinear_box, make_quadratic_nsc


def _sets():
    return [
        Box(lo=-np.ones(3), hi=np.ones(3)),
        Ball(center=np.array([0.5, -0.5]), radius=2.0),
        Simplex(4),
        ProductBall(centers=np.arange(6.0).reshape(3, 2), radius=0.7),
    ]


# ---------------------------------------------------------------------------
# Projections
# ---------------------------------------------------------------------------


def test_projection_examples():
    box = Box(lo=np.array([-1.0]), hi=np.array([1.0]))
    assert project(box, np.array([2.0])) == pytest.approx(1.0)
    ball = Ball(center=np.zeros(2), radius=1.0)
    np.testing.assert_allclose(
        project(ball, np.array([3.0, 4.0])), [0.6, 0.8], atol=1e-15
    )
    # frozen reference: projecting (2, 0) onto the probability simplex; grid
    # search over the feasible edge {(a, 1-a)} puts the minimizer at a = 1
    simp = Simplex(2)
    np.testing.assert_allclose(
        project(simp, np.array([2.0, 0.0])), [1.0, 0.0], atol=1e-12
    )


@pytest.mark.parametrize("cset", _sets(), ids=lambda s: type(s).__name__)
def test_projection_idempotent_and_nonexpansive(cset):
    rng = np.random.default_rng(42)
    for _ in range(1000):
        p = rng.normal(size=cset.dim) * 3.0
        q_in = cset.project(rng.normal(size=cset.dim) * 3.0)
        pp = cset.project(p)
        np.testing.assert_allclose(cset.project(pp), pp, atol=1e-12)
        assert cset.contains(pp, tol=1e-9)
        assert np.linalg.norm(q_in - pp) <= np.linalg.norm(q_in - p) + 1e-12


def test_projection_dimension_mismatch():
    with pytest.raises(ContractViolation):
        Box(lo=-np.ones(2), hi=np.ones(2)).project(np.ones(3))


def test_diameters():
    assert diameter(Box(lo=-np.ones(2), hi=np.ones(2))) == pytest.approx(
        2.0 * np.sqrt(2.0)
    )
    assert diameter(Ball(center=np.zeros(3), radius=2.5)) == pytest.approx(5.0)
    # frozen reference: brute force over the vertices of the 2-simplex gives
    # max pairwise distance ||e1 - e2|| = sqrt(2)
    assert diameter(Simplex(2)) == pytest.approx(np.sqrt(2.0))
    assert diameter(Simplex(1)) == 0.0
    assert diameter(
        ProductBall(centers=np.zeros((4, 2)), radius=1.0)
    ) == pytest.approx(2.0 * np.sqrt(4.0))


def test_simplex_projection_sums_to_one():
    simp = Simplex(5)
    rng = np.random.default_rng(0)
    for _ in range(200):
        p = simp.project(rng.normal(size=5) * 4.0)
        assert p.sum() == pytest.approx(1.0, abs=1e-12)
        assert np.all(p >= -1e-15)


# ---------------------------------------------------------------------------
# Constants
# ---------------------------------------------------------------------------


def test_problem_constants_validation():
    with pytest.raises(ContractViolation):
        ProblemConstants(ell=0.0)
    with pytest.raises(ContractViolation):
        ProblemConstants(ell=1.0, mu=2.0)  # kappa < 1
    c = ProblemConstants(ell=2.0, mu=0.5)
    assert c.kappa == pytest.approx(4.0)
    with pytest.raises(InvalidRegime):
        _ = ProblemConstants(ell=1.0, mu=0.0).kappa


# ---------------------------------------------------------------------------
# Stochastic oracle
# ---------------------------------------------------------------------------


def test_batch_gradient_zero_noise_exact(bilinear1):
    oracle = StochasticOracle(base=bilinear1, noise_sigma=0.0)
    rng = np.random.default_rng(1)
    gx, gy, _ = sample_batch_gradient(
        oracle, np.array([2.0]), np.array([0.5]), 1, rng
    )
    assert gx[0] == 0.5 and gy[0] == 2.0
    # zero-noise path must not consume randomness
    assert rng.integers(100) == np.random.default_rng(1).integers(100)


def test_batch_gradient_determinism(bilinear1):
    oracle = StochasticOracle(base=bilinear1, noise_sigma=1.0)
    a = sample_batch_gradient(
        oracle, np.array([1.0]), np.array([0.0]), 3, np.random.default_rng(7)
    )
    b = sample_batch_gradient(
        oracle, np.array([1.0]), np.array([0.0]), 3, np.random.default_rng(7)
    )
    np.testing.assert_array_equal(a[0], b[0])
    np.testing.assert_array_equal(a[1], b[1])


def test_batch_gradient_rejects_zero_batch(bilinear1):
    oracle = StochasticOracle(base=bilinear1, noise_sigma=1.0)
    with pytest.raises(ContractViolation):
        sample_batch_gradient(
            oracle, np.array([1.0]), np.array([0.0]), 0, np.random.default_rng(0)
        )


@pytest.mark.parametrize("M", [1, 10, 100])
def test_batch_variance_scales_inversely(M, bilinear1):
    # scalar blocks: per-coordinate variance equals the per-block bound
    # sigma^2 / M; 200 repetitions keep the chi^2 spread within factor 1.3
    oracle = StochasticOracle(base=bilinear1, noise_sigma=1.0)
    rng = np.random.default_rng(123 + M)
    draws = np.array(
        [
            sample_batch_gradient(oracle, np.array([1.0]), np.array([0.0]), M, rng)[0][0]
            for _ in range(200)
        ]
    )
    var = draws.var(ddof=1)
    assert 1.0 / (1.3 * M) <= var <= 1.3 / M


def test_batch_variance_splits_across_coordinates():
    quad = make_quadratic_nsc(np.diag([1.0, -3.0, 2.0, -1.0]), np.eye(4), 1.0, 10.0)
    oracle = StochasticOracle(base=quad, noise_sigma=1.0)
    rng = np.random.default_rng(5)
    x = np.zeros(4)
    y = np.zeros(4)
    draws = np.array(
        [sample_batch_gradient(oracle, x, y, 1, rng)[0] for _ in range(4000)]
    )
    per_coord = draws.var(axis=0, ddof=1)
    total = per_coord.sum()
    # per-block total variance is sigma^2 = 1, split evenly over 4 coordinates
    assert total == pytest.approx(1.0, rel=0.15)
    np.testing.assert_allclose(per_coord, 0.25, rtol=0.25)


def test_batch_mean_unbiased(bilinear1):
    oracle = StochasticOracle(base=bilinear1, noise_sigma=1.0)
    rng = np.random.default_rng(9)
    draws = np.array(
        [
            sample_batch_gradient(oracle, np.array([2.0]), np.array([0.3]), 1, rng)[0][0]
            for _ in range(100_000)
        ]
    )
    assert draws.mean() == pytest.approx(0.3, abs=3.0 / np.sqrt(100_000) * 1.5)


# ---------------------------------------------------------------------------
# SolverConfig
# ---------------------------------------------------------------------------


def test_solver_config_validation():
    with pytest.raises(ContractViolation):
        SolverConfig(eta_x=0.0, eta_y=1.0, horizon_T=1)
    with pytest.raises(ContractViolation):
        SolverConfig(eta_x=1.0, eta_y=1.0, horizon_T=-1)
    # two-time-scale regimes require the descent stepsize to be the slow one
    with pytest.raises(ContractViolation):
        SolverConfig(eta_x=1.0, eta_y=0.1, horizon_T=1, regime=Regime.NC_SC_DET)
    # untagged configs allow any stepsize pair (divergence studies)
    SolverConfig(eta_x=1.0, eta_y=0.1, horizon_T=1)


def test_solver_config_stride():
    assert SolverConfig(eta_x=0.1, eta_y=0.1, horizon_T=10_000).stride() == 1
    assert SolverConfig(eta_x=0.1, eta_y=0.1, horizon_T=100_000).stride() == 10
    assert (
        SolverConfig(eta_x=0.1, eta_y=0.1, horizon_T=100, record_stride=7).stride()
        == 7
    )
