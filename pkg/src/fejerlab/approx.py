"""Weighted-L1 best polynomial approximation, Fejér-mean error curves, and a
gliding-hump witness for non-uniformly-bounded Fejér means.

The minimization of sum_i |f_i - q(theta_i)| w_i q_i over analytic
polynomials q of fixed degree is solved by iteratively reweighted least
squares with residual smoothing: each sweep solves a weighted least squares
problem with weights c_i / max(|r_i|, eps), which never increases the
eps-smoothed objective (majorize-minimize).  Correctness is certified
externally: for Hardy-class data the Fejér mean of matching order is a
feasible polynomial, so the achieved objective must not exceed the Fejér
mean's objective.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .circle import (
    CircleGrid,
    KernelSpec,
    PiecewiseConstant,
    SampledFunction,
    convolve_direct,
    fejer_mean,
    fourier_window,
    synthesize,
)
from .operators import (
    assemble_operator,
    grid_for_kernels,
    localization_params,
    operator_norm,
)
from .spaces import SpaceTag, Weight, norm

__all__ = [
    "PolyCoeffs",
    "IrlsConfig",
    "FitResult",
    "StageFailure",
    "WitnessReport",
    "best_poly_l1w",
    "density_curve",
    "fejer_error_curve",
    "gliding_hump_witness",
]


@dataclass(frozen=True)
class PolyCoeffs:
    """Analytic polynomial q(t) = sum_k alpha_k t^k on the circle."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.ascontiguousarray(np.asarray(self.coeffs, dtype=complex))
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    def __call__(self, theta):
        t = np.atleast_1d(np.asarray(theta, dtype=float))
        out = np.exp(1j * np.outer(t, np.arange(self.coeffs.size))) @ self.coeffs
        return out if np.ndim(theta) else complex(out[0])

    def padded(self, degree: int) -> "PolyCoeffs":
        if degree < self.degree:
            raise ValueError("cannot pad to a lower degree")
        out = np.zeros(degree + 1, dtype=complex)
        out[: self.coeffs.size] = self.coeffs
        return PolyCoeffs(coeffs=out)


@dataclass(frozen=True)
class IrlsConfig:
    max_iters: int = 200
    smoothing: float = 1e-8
    tol: float = 1e-10

    def __post_init__(self):
        if self.max_iters <= 0 or self.smoothing <= 0 or self.tol <= 0:
            raise ValueError("all IRLS parameters must be positive")


@dataclass(frozen=True)
class FitResult:
    poly: PolyCoeffs
    error: float
    converged: bool
    iterations: int
    fejer_error: float | None = None
    objective_trace: tuple[float, ...] = field(default=(), repr=False)


def _raw_objective(residual, c):
    return float(np.sum(np.abs(residual) * c))


def _smoothed_objective(residual, c, eps):
    r = np.abs(residual)
    huber = np.where(r <= eps, r * r / (2.0 * eps) + 0.5 * eps, r)
    return float(np.sum(huber * c))


def _irls(A, y, c, start, cfg: IrlsConfig):
    """Minimize sum c_i |y_i - (A alpha)_i| from a given coefficient start."""
    alpha = start
    r = y - A @ alpha
    trace = [_smoothed_objective(r, c, cfg.smoothing)]
    converged = False
    for _ in range(cfg.max_iters):
        u = c / np.maximum(np.abs(r), cfg.smoothing)
        su = np.sqrt(u)
        alpha_new, *_ = np.linalg.lstsq(A * su[:, None], y * su, rcond=None)
        r_new = y - A @ alpha_new
        obj_new = _smoothed_objective(r_new, c, cfg.smoothing)
        if obj_new > trace[-1] * (1.0 + 1e-12) + 1e-300:
            break  # MM guarantees nonincrease; stop if rounding says otherwise
        alpha, r = alpha_new, r_new
        decrease = trace[-1] - obj_new
        trace.append(obj_new)
        if decrease <= cfg.tol * max(obj_new, 1.0):
            converged = True
            break
    return alpha, r, converged, len(trace) - 1, trace


def _fejer_candidate(f: SampledFunction, degree: int):
    """Fejér mean of matching order as a feasible polynomial, when available."""
    if degree > f.grid.node_count // 4:
        return None
    window = fourier_window(f, degree)
    damped = fejer_mean(window, degree)
    return PolyCoeffs(coeffs=damped.coeffs[degree:])


def best_poly_l1w(
    f: SampledFunction,
    w: Weight | None,
    degree: int,
    cfg: IrlsConfig = IrlsConfig(),
    *,
    warm_starts=(),
) -> FitResult:
    """Approximately minimize ||f - q||_{L1(w)} over polynomials of `degree`.

    Runs IRLS from a weighted least squares start, from the Fejér-mean
    candidate (when the coefficient window allows it), and from any supplied
    warm starts, keeping the best raw objective.  The reported error is the
    plain discrete weighted-L1 objective of the returned polynomial.
    """
    if degree < 0:
        raise ValueError("degree must be >= 0")
    nodes = f.grid.nodes
    c = (np.ones(nodes.size) if w is None else w(nodes)) * f.grid.quad_weights
    A = np.exp(1j * np.outer(nodes, np.arange(degree + 1)))
    y = f.samples.astype(complex)

    starts = []
    sc = np.sqrt(c)
    l2_start, *_ = np.linalg.lstsq(A * sc[:, None], y * sc, rcond=None)
    starts.append(l2_start)
    fejer_poly = _fejer_candidate(f, degree)
    fejer_error = None
    if fejer_poly is not None:
        starts.append(fejer_poly.coeffs)
        fejer_error = _raw_objective(y - A @ fejer_poly.coeffs, c)
    for ws in warm_starts:
        coeffs = ws.coeffs if isinstance(ws, PolyCoeffs) else np.asarray(ws, complex)
        if coeffs.size <= degree + 1:
            padded = np.zeros(degree + 1, dtype=complex)
            padded[: coeffs.size] = coeffs
            starts.append(padded)

    best = None
    for start in starts:
        raw_start = _raw_objective(y - A @ start, c)
        alpha, r, conv, iters, trace = _irls(A, y, c, start, cfg)
        raw = _raw_objective(r, c)
        if raw_start < raw:  # the start itself is a valid feasible point
            alpha, raw, conv = start, raw_start, True
        if best is None or raw < best[1]:
            best = (alpha, raw, conv, iters, trace)

    alpha, raw, conv, iters, trace = best
    return FitResult(
        poly=PolyCoeffs(coeffs=alpha),
        error=raw,
        converged=conv,
        iterations=iters,
        fejer_error=fejer_error,
        objective_trace=tuple(trace),
    )


def density_curve(
    f: SampledFunction,
    w: Weight | None,
    degrees,
    cfg: IrlsConfig = IrlsConfig(),
) -> list[FitResult]:
    """Best-approximation errors along increasing degrees.

    Each fit is warm-started with the previous polynomial, so the reported
    errors are nonincreasing by construction (feasible sets are nested).
    """
    degrees = sorted(int(d) for d in degrees)
    results = []
    prev = None
    for d in degrees:
        warm = (prev,) if prev is not None else ()
        res = best_poly_l1w(f, w, d, cfg, warm_starts=warm)
        results.append(res)
        prev = res.poly
    return results


def fejer_error_curve(f, w: Weight | None, n_list, grid: CircleGrid | None = None):
    """Errors ||f * F_n - f|| in the (possibly weighted) L1 norm, per order.

    Sampled input goes through the quadrature convolution, which is exactly
    the discrete operator model.  Step input uses its closed-form Fourier
    coefficients, evaluated on the supplied grid, so the Fejér mean itself
    carries no quadrature error.
    """
    n_list = [int(n) for n in n_list]
    errors = []
    if isinstance(f, SampledFunction):
        for n in n_list:
            conv = convolve_direct(f, KernelSpec.fejer(n))
            diff = SampledFunction(grid=f.grid, samples=conv.samples - f.samples)
            errors.append(norm(diff, w, SpaceTag.WEIGHTED_L1))
    elif isinstance(f, PiecewiseConstant):
        if grid is None:
            raise ValueError("step-function input needs an evaluation grid")
        window = fourier_window(f, max(n_list))
        f_vals = f(grid.nodes)
        wv = np.ones(grid.node_count) if w is None else w(grid.nodes)
        for n in n_list:
            mean_vals = synthesize(fejer_mean(window, n), grid.nodes)
            err = np.sum(np.abs(mean_vals - f_vals) * wv * grid.quad_weights)
            errors.append(float(err))
    else:
        raise TypeError(f"unsupported representation {type(f).__name__}")
    return np.array(errors)


class StageFailure(RuntimeError):
    def __init__(self, stage: int, message: str):
        super().__init__(f"stage {stage}: {message}")
        self.stage = stage


@dataclass(frozen=True)
class WitnessReport:
    """A single function whose Fejér-mean errors stay large along a chosen
    subsequence of orders.

    The function is a weighted sum of unit-norm extremal inputs of the
    convolution operators: sum_k c_k g_k with c_k = 2^{-k} by default.  The
    reported stage errors are recomputed from scratch on the assembled
    function, not accumulated from intermediate estimates.
    """

    grid: CircleGrid
    orders: tuple[int, ...]
    coefficients: tuple[float, ...]
    bump_locations: tuple[float, ...]
    stage_errors: tuple[float, ...]
    growth_target: float
    combined: SampledFunction

    def summary(self) -> str:
        lines = [
            f"gliding-hump witness: {len(self.orders)} stages, "
            f"target {self.growth_target}",
        ]
        for k, (n, ck, loc, err) in enumerate(
            zip(self.orders, self.coefficients, self.bump_locations, self.stage_errors),
            start=1,
        ):
            lines.append(
                f"  stage {k}: n={n} c={ck:g} bump at theta={loc:.6f} "
                f"error={err:.6f}"
            )
        return "\n".join(lines)


def _default_order_ladder(M: int, max_order: int):
    """Candidate Fejér orders: certified localization orders of square spike
    indices and their doublings."""
    ladder = set()
    m = 2
    while m * m <= M:
        n = localization_params(m * m, 4 * (2 * m * m) ** 2 + 64).n_of_m
        for mult in (1, 2):
            if mult * n <= max_order:
                ladder.add(mult * n)
        m += 1
    ladder.update(
        n for n in (64, 96, 128, 192, 256, 384, 512) if n <= max_order
    )
    return sorted(ladder)


def _stage_errors(grid, w, parts, orders):
    """Errors ||f * F_n - f||_{L1(w)} of the sparse bump sum, recomputed
    exactly as the full quadrature convolution would produce them."""
    idx = np.array([p[0] for p in parts])
    amp = np.array([p[1] for p in parts])  # f value at the node
    fq = amp * grid.quad_weights[idx]
    f_full = np.zeros(grid.node_count)
    np.add.at(f_full, idx, amp)
    wv = w(grid.nodes)
    errors = []
    for n in orders:
        conv = np.zeros(grid.node_count)
        for j, m in zip(idx, fq):
            conv += np.asarray(
                KernelSpec.fejer(n)(grid.nodes - grid.nodes[j])
            ) * m
        errors.append(float(np.sum(np.abs(conv - f_full) * wv * grid.quad_weights)))
    return errors


def gliding_hump_witness(
    w: Weight,
    stages: int,
    growth_target: float = 1.0,
    *,
    grid: CircleGrid | None = None,
    coefficients=None,
    candidate_orders=None,
    points_per_interval: int = 8,
    max_order: int = 600,
) -> WitnessReport:
    """Assemble f = sum_k c_k g_k whose Fejér-mean errors meet the target.

    g_k is the exact unit-norm extremal input of the convolution operator
    with kernel order n_k on the weighted-L1 space (a scaled single-node
    indicator at the maximizing column).  Orders are chosen greedily from a
    candidate ladder, strictly increasing; a candidate is accepted only if
    every stage chosen so far still meets the target on the partially
    assembled function, so the final report is certified by construction.
    """
    if stages < 1:
        raise ValueError("need at least one stage")
    coeffs = (
        tuple(float(c) for c in coefficients)
        if coefficients is not None
        else tuple(2.0 ** -(k + 1) for k in range(stages))
    )
    if len(coeffs) != stages:
        raise ValueError("one coefficient per stage required")
    ladder = (
        sorted(int(n) for n in candidate_orders)
        if candidate_orders is not None
        else _default_order_ladder(w.M, max_order)
    )
    if grid is None:
        grid = grid_for_kernels(w.M, points_per_interval, max(ladder))

    wv = w(grid.nodes)
    orders: list[int] = []
    parts: list[tuple[int, float]] = []  # (node index, sample value)
    norm_cache: dict[int, object] = {}

    for k in range(stages):
        accepted = False
        for n in ladder:
            if orders and n <= orders[-1]:
                continue
            if n not in norm_cache:
                A = assemble_operator(KernelSpec.fejer(n), grid)
                norm_cache[n] = operator_norm(A, w, SpaceTag.WEIGHTED_L1)
            res = norm_cache[n]
            j = res.arg_index
            amp = coeffs[k] / (wv[j] * grid.quad_weights[j])
            trial_parts = parts + [(j, amp)]
            errs = _stage_errors(grid, w, trial_parts, orders + [n])
            if all(e >= growth_target for e in errs):
                orders.append(n)
                parts = trial_parts
                accepted = True
                break
        if not accepted:
            raise StageFailure(
                k + 1,
                f"no candidate order <= {ladder[-1]} reaches error "
                f">= {growth_target} given earlier stages",
            )

    samples = np.zeros(grid.node_count)
    for j, amp in parts:
        samples[j] += amp
    combined = SampledFunction(grid=grid, samples=samples)
    final_errors = _stage_errors(grid, w, parts, orders)
    return WitnessReport(
        grid=grid,
        orders=tuple(orders),
        coefficients=coeffs,
        bump_locations=tuple(float(grid.nodes[j]) for j, _ in parts),
        stage_errors=tuple(final_errors),
        growth_target=growth_target,
        combined=combined,
    )
