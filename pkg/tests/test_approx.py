import math

import numpy as np
import pytest

from fejerlab.approx import (
    IrlsConfig,
    PolyCoeffs,
    StageFailure,
    best_poly_l1w,
    density_curve,
    fejer_error_curve,
    gliding_hump_witness,
)
from fejerlab.circle import (
    KernelSpec,
    PiecewiseConstant,
    SampledFunction,
    make_grid,
)
from fejerlab.operators import assemble_operator, grid_for_kernels, operator_norm
from fejerlab.spaces import SpaceTag, make_weight, norm

PI = math.pi


def _inv_quarter(theta):
    return (1.0 - np.exp(1j * theta)) ** -0.25


@pytest.fixture(scope="module")
def fit_grid():
    return grid_for_kernels(4, 8, 64)


@pytest.fixture(scope="module")
def weight4():
    return make_weight(4)


# ------------------------------------------------------------- best_poly_l1w


def test_recovers_exact_polynomial(fit_grid, weight4):
    rng = np.random.default_rng(0)
    target = PolyCoeffs(coeffs=rng.normal(size=4) + 1j * rng.normal(size=4))
    f = SampledFunction(grid=fit_grid, samples=target(fit_grid.nodes))
    res = best_poly_l1w(f, weight4, 5)
    assert res.error <= 1e-8
    assert np.max(np.abs(res.poly.coeffs[:4] - target.coeffs)) <= 1e-6
    assert np.max(np.abs(res.poly.coeffs[4:])) <= 1e-6


def test_error_bounded_by_fejer_candidate(fit_grid, weight4):
    f = SampledFunction(grid=fit_grid, samples=_inv_quarter(fit_grid.nodes))
    for degree in (4, 16):
        res = best_poly_l1w(f, weight4, degree)
        assert res.fejer_error is not None
        assert res.error <= res.fejer_error * (1 + 1e-12)


def test_irls_smoothed_objective_monotone(fit_grid, weight4):
    f = SampledFunction(grid=fit_grid, samples=_inv_quarter(fit_grid.nodes))
    res = best_poly_l1w(f, weight4, 8)
    trace = np.array(res.objective_trace)
    assert np.all(np.diff(trace) <= 1e-12 * (1 + trace[:-1]))


def test_inv_quarter_is_integrable_against_weight(weight4):
    # |f| ~ |theta|^{-1/4} against w ~ |theta|^{-1/2}: the weighted mass is
    # finite, so refining the mesh barely moves it
    vals = []
    for cap in (2e-3, 1e-3):
        grid = make_grid(4, 16, max_cell=cap)
        f = SampledFunction(grid=grid, samples=_inv_quarter(grid.nodes))
        vals.append(norm(f, weight4, SpaceTag.WEIGHTED_L1))
    assert abs(vals[1] - vals[0]) <= 2e-3 * vals[0]


def test_nonconvergence_flag_with_tiny_budget(fit_grid, weight4):
    f = SampledFunction(grid=fit_grid, samples=_inv_quarter(fit_grid.nodes))
    res = best_poly_l1w(f, weight4, 8, IrlsConfig(max_iters=2, tol=1e-15))
    assert res.iterations <= 2
    assert not res.converged


# ------------------------------------------------------------- density_curve


def test_density_curve_hits_zero_for_low_degree_polynomial(fit_grid, weight4):
    f = SampledFunction(grid=fit_grid, samples=np.exp(3j * fit_grid.nodes))
    results = density_curve(f, weight4, range(5))
    errors = [r.error for r in results]
    assert all(b <= a + 1e-12 for a, b in zip(errors, errors[1:]))
    assert errors[3] <= 1e-8 and errors[4] <= 1e-8
    assert errors[0] > 1e-3


def test_density_curve_inv_quarter(fit_grid, weight4):
    f = SampledFunction(grid=fit_grid, samples=_inv_quarter(fit_grid.nodes))
    results = density_curve(f, weight4, (4, 8, 16, 32, 64))
    errors = [r.error for r in results]
    assert all(b <= a + 1e-12 for a, b in zip(errors, errors[1:]))
    assert errors[-1] < errors[0]
    for r in results:
        assert r.error <= r.fejer_error * (1 + 1e-12)


# --------------------------------------------------------- fejer_error_curve


def test_error_curve_of_constant_is_zero():
    grid = make_grid(1, 8)
    const = PiecewiseConstant.constant(3.0)
    errors = fejer_error_curve(const, None, (1, 4, 16), grid=grid)
    assert np.max(errors) <= 1e-14  # exact mean preservation, synthesis ulps


def test_error_curve_arc_indicator_unweighted_decreases():
    arc = PiecewiseConstant.indicator(0.0, PI / 2)
    orders = (16, 64, 256, 1024)
    grid = make_grid(1, 8, max_cell=2 * PI / (8 * 1025))
    errors = fejer_error_curve(arc, None, orders, grid=grid)
    assert all(b <= a + 1e-12 for a, b in zip(errors, errors[1:]))
    assert errors[-1] < 1e-2


def test_error_curve_sampled_path_matches_spectral_for_bandlimited():
    grid = grid_for_kernels(1, 8, 8, oversample=64)
    f_pc = PiecewiseConstant.indicator(0.0, PI / 2)
    sampled = SampledFunction(grid=grid, samples=f_pc(grid.nodes).astype(float))
    direct = fejer_error_curve(sampled, None, (2, 8), grid=grid)
    spectral = fejer_error_curve(f_pc, None, (2, 8), grid=grid)
    assert np.max(np.abs(direct - spectral)) <= 1e-3


# ------------------------------------------------------ gliding hump witness


@pytest.fixture(scope="module")
def witness_small():
    return gliding_hump_witness(make_weight(25), 2, growth_target=1.0)


def test_witness_two_stages_meet_target(witness_small):
    report = witness_small
    assert len(report.orders) == 2
    assert report.orders[0] < report.orders[1]
    assert all(e >= 1.0 for e in report.stage_errors)


def test_witness_single_stage_triangle_inequality():
    w = make_weight(25)
    report = gliding_hump_witness(w, 1, growth_target=1.0)
    n1 = report.orders[0]
    A = assemble_operator(KernelSpec.fejer(n1), report.grid)
    res = operator_norm(A, w, SpaceTag.WEIGHTED_L1)
    c1 = report.coefficients[0]
    # the triangle inequality guarantees error >= c1 (L - 1); the recomputed
    # error beats that bound, and a fortiori meets the target whenever the
    # operator norm exceeds 1/c1 + 1
    assert report.stage_errors[0] >= c1 * (res.value - 1.0) - 1e-9
    assert report.stage_errors[0] >= report.growth_target


def test_witness_errors_match_error_curve_recomputation(witness_small):
    report = witness_small
    w = make_weight(25)
    recomputed = fejer_error_curve(report.combined, w, report.orders)
    assert np.max(np.abs(recomputed - np.array(report.stage_errors))) <= 1e-10


def test_witness_bumps_have_unit_weighted_l1_norm(witness_small):
    report = witness_small
    w = make_weight(25)
    total = norm(report.combined, w, SpaceTag.WEIGHTED_L1)
    assert abs(total - sum(report.coefficients)) <= 1e-12


def test_witness_stage_failure_for_absurd_target():
    with pytest.raises(StageFailure):
        gliding_hump_witness(make_weight(4), 1, growth_target=1e6, max_order=64)
