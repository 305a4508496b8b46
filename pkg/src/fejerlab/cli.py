"""Experiment driver: each verification is a subcommand with CSV output.

Exit codes: 0 when every in-run contract holds, 2 when a contract is
violated (the violated invariant is named on stderr), 1 on configuration
errors.  A fixed --seed makes the CSV output byte-identical across re-runs.

Options may also come from a config file of `key = value` lines via
--config; explicit flags win on conflict.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import csvio
from .approx import StageFailure, density_curve, fejer_error_curve, gliding_hump_witness
from .circle import (
    FourierCoefficients,
    KernelSpec,
    PiecewiseConstant,
    SampledFunction,
    make_grid,
)
from .hardy import taylor_fourier_check
from .maximal import weight_maximal_ratio
from .operators import (
    GridTooCoarse,
    NoQualifyingN,
    assemble_operator,
    fejer_blowup,
    grid_for_kernels,
    operator_norm,
)
from .spaces import SpaceTag, make_weight

PASS, FAIL = "PASS", "FAIL"


class ConfigError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # configuration problems exit 1, not 2
        self.print_usage(sys.stderr)
        raise ConfigError(message)


class ContractViolation(Exception):
    def __init__(self, name: str, detail: str):
        super().__init__(f"{name}: {detail}")
        self.name = name


def _int_list(text: str):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a comma-separated int list: {text!r}") from exc


def _check(ok: bool, name: str, detail: str):
    print(f"[{PASS if ok else FAIL}] {name}: {detail}")
    if not ok:
        raise ContractViolation(name, detail)


# ---------------------------------------------------------------------------
# subcommands


def _random_even_nonneg_step_kernel(rng, grid_M: int) -> KernelSpec:
    """Random symmetric nonnegative step kernel on mirrored breakpoints."""
    npos = int(rng.integers(2, 6))
    pos = np.sort(rng.uniform(0.05, math.pi - 0.05, size=npos))
    edges = np.concatenate([[-math.pi], -pos[::-1], pos, [math.pi]])
    half = rng.uniform(0.0, 4.0, size=npos + 1)
    values = np.concatenate([half[::-1], half[1:]])
    return KernelSpec.custom(PiecewiseConstant(edges=edges, values=values))


def cmd_duality(args) -> list:
    rng = np.random.default_rng(args.seed)
    fejer_orders = list(range(0, args.max_order + 1, max(1, args.max_order // 32)))
    poisson_radii = [round(0.05 + 0.02 * i, 2) for i in range(30)]

    grids, weights = {}, {}

    def setup(M):
        if M not in grids:
            grids[M] = grid_for_kernels(M, args.ppi, args.max_order)
            weights[M] = make_weight(M)
        return grids[M], weights[M]

    rows = []
    worst = 0.0

    def run(kernel, label, M, report_norms):
        nonlocal worst
        grid, w = setup(M)
        A = assemble_operator(kernel, grid)
        n1 = operator_norm(A, w, SpaceTag.WEIGHTED_L1).value
        ninf = operator_norm(A, w, SpaceTag.WEIGHTED_LINF).value
        gap = abs(n1 - ninf)
        rel = gap / max(n1, ninf)
        worst = max(worst, rel)
        rows.append(
            (label, M, n1 if report_norms else "", ninf if report_norms else "", gap, rel)
        )

    for n in fejer_orders:
        run(KernelSpec.fejer(n), f"fejer:{n}", 1 + n % args.grid_M, True)
    for r in poisson_radii:
        run(KernelSpec.poisson(r), f"poisson:{r}", 1 + int(100 * r) % args.grid_M, True)
    for t in range(args.trials):
        M = int(rng.integers(1, args.grid_M + 1))
        kernel = _random_even_nonneg_step_kernel(rng, M)
        # step kernels are reported gap-only: pointwise sampling of their jumps
        # is first-order in the mesh, so their norms are not refinement-stable
        run(kernel, f"step:{t}", M, False)

    if args.out:
        csvio.write_rows(
            args.out,
            ["kernel", "weight_M", "norm_l1w", "norm_linfw", "gap", "rel_gap"],
            rows,
        )
    print(f"max relative duality gap over {len(rows)} kernels: {worst:.3e}")
    _check(worst <= 1e-10, "duality-equality", f"max relative gap {worst:.3e} <= 1e-10")
    return rows


def cmd_blowup(args) -> list:
    w = make_weight(max(args.grid_M, max(args.m)))
    rows = fejer_blowup(
        args.m, w, points_per_interval=args.ppi, oversample=args.oversample
    )
    if args.out:
        csvio.write_rows(
            args.out,
            ["m", "n_m", "delta_n", "bound", "pointwise_min", "norm_linfw", "norm_l1w"],
            [
                (r.m, r.n_of_m, r.delta_n, r.bound, r.pointwise_min, r.norm_linfw, r.norm_l1w)
                for r in rows
            ],
        )
    for r in rows:
        print(
            f"m={r.m} n={r.n_of_m} bound={r.bound:.5f} "
            f"pointwise_min={r.pointwise_min:.5f} norm_linfw={r.norm_linfw:.6f}"
        )
    _check(
        all(r.pointwise_min >= r.bound for r in rows),
        "blowup-pointwise",
        "min of smoothed bump on certified window >= sqrt(m)/(8 pi) for all m",
    )
    _check(
        all(r.norm_linfw >= r.bound for r in rows),
        "blowup-norm-bound",
        "weighted-Linf operator norm >= sqrt(m)/(8 pi) for all m",
    )
    norms = [r.norm_linfw for r in rows]
    _check(
        all(a < b for a, b in zip(norms, norms[1:])),
        "blowup-growth",
        "operator norms strictly increase along the spike list",
    )
    return rows


def cmd_fejer_converge(args) -> list:
    arc = PiecewiseConstant.indicator(0.0, args.arc_length)
    grid = make_grid(
        1,
        args.ppi,
        max_cell=2.0 * math.pi / (8 * (max(args.orders) + 1)),
        extra_breakpoints=[args.arc_length],
    )
    errors = fejer_error_curve(arc, None, args.orders, grid=grid)
    rows = list(zip(args.orders, errors))
    if args.out:
        csvio.curve_to_csv(args.orders, errors, args.out)
    for n, e in rows:
        print(f"n={n} unweighted L1 error={e:.6f}")
    _check(
        all(b <= a + 1e-12 for a, b in zip(errors, errors[1:])),
        "fejer-converge-monotone",
        "unweighted errors decrease along the order list",
    )
    _check(
        errors[-1] < 1e-2,
        "fejer-converge-small",
        f"final error {errors[-1]:.2e} < 1e-2",
    )
    return rows


def cmd_witness(args) -> list:
    w = make_weight(args.grid_M)
    report = gliding_hump_witness(
        w,
        args.stages,
        growth_target=args.target,
        points_per_interval=args.ppi,
    )
    print(report.summary())
    rows = [
        (k + 1, n, c, loc, err)
        for k, (n, c, loc, err) in enumerate(
            zip(report.orders, report.coefficients, report.bump_locations, report.stage_errors)
        )
    ]
    if args.out:
        csvio.write_rows(
            args.out, ["stage", "n", "coefficient", "bump_theta", "error"], rows
        )
        with open(str(args.out) + ".txt", "w", encoding="utf-8") as fh:
            fh.write(report.summary() + "\n")
    _check(
        all(e >= args.target for e in report.stage_errors),
        "witness-stages",
        f"all {args.stages} recomputed stage errors >= {args.target}",
    )
    return rows


_DENSITY_FUNCTIONS = {
    "t3": lambda theta: np.exp(3j * theta),
    "invquarter": lambda theta: (1.0 - np.exp(1j * theta)) ** -0.25,
}


def cmd_density(args) -> list:
    fn = _DENSITY_FUNCTIONS[args.function]
    grid = grid_for_kernels(args.grid_M, args.ppi, max(args.degrees))
    w = make_weight(args.grid_M)
    f = SampledFunction.from_callable(fn, grid)
    results = density_curve(f, w, args.degrees)
    errors = [r.error for r in results]
    rows = [
        (d, r.error, r.fejer_error if r.fejer_error is not None else "")
        for d, r in zip(args.degrees, results)
    ]
    if args.out:
        csvio.write_rows(args.out, ["degree", "error", "fejer_error"], rows)
    for d, r in zip(args.degrees, results):
        print(f"degree={d} error={r.error:.3e} fejer_error={r.fejer_error:.3e}")
    _check(
        all(b <= a + 1e-12 for a, b in zip(errors, errors[1:])),
        "density-monotone",
        "errors nonincreasing in degree",
    )
    _check(
        errors[-1] < 0.2 * errors[0] or errors[-1] <= 1e-8,
        "density-decay",
        f"final {errors[-1]:.3e} < 0.2 * initial {errors[0]:.3e} (or below 1e-8 floor)",
    )
    _check(
        all(
            r.fejer_error is None or r.error <= r.fejer_error * (1 + 1e-12) + 1e-12
            for r in results
        ),
        "density-fejer-bound",
        "best-approximation error never exceeds the Fejér mean's error",
    )
    return rows


def cmd_maximal(args) -> list:
    rows = weight_maximal_ratio(args.orders, points_per_interval=args.ppi)
    if args.out:
        csvio.write_rows(args.out, ["M", "ratio"], rows)
    for M, ratio in rows:
        print(f"M={M} sup (Mw)/w = {ratio:.6f}")
    ratios = [r for _, r in rows]
    _check(
        all(a < b for a, b in zip(ratios, ratios[1:])),
        "maximal-growth",
        "sup (Mw)/w strictly increases with the truncation order",
    )
    if rows[-1][0] >= 4 * rows[0][0]:  # sqrt(M) scaling can double only then
        _check(
            ratios[-1] >= 2.0 * ratios[0],
            "maximal-doubling",
            f"ratio({rows[-1][0]}) = {ratios[-1]:.3f} >= "
            f"2 * ratio({rows[0][0]}) = {2*ratios[0]:.3f}",
        )
    return rows


def _taylor_fourier_inputs(seed):
    rng = np.random.default_rng(seed)
    poly = FourierCoefficients.from_dict(8, {k: 1.0 for k in range(9)})
    geo = FourierCoefficients.from_dict(32, {k: 2.0**-k for k in range(33)})
    rand_coeffs = rng.normal(size=17) + 1j * rng.normal(size=17)
    rand = FourierCoefficients.from_dict(
        16, {k: rand_coeffs[k] for k in range(17)}
    )
    return [("unit-poly-8", poly), ("geometric-32", geo), ("random-16", rand)]


def cmd_taylor_fourier(args) -> list:
    rows = []
    worst = 0.0
    for name, f in _taylor_fourier_inputs(args.seed):
        for r in args.radii:
            mismatch = taylor_fourier_check(f, r)
            worst = max(worst, mismatch)
            rows.append((name, r, mismatch))
            print(f"{name} r={r} mismatch={mismatch:.3e}")
    if args.out:
        csvio.write_rows(args.out, ["input", "radius", "mismatch"], rows)
    _check(
        worst <= 1e-8,
        "taylor-fourier",
        f"max mismatch {worst:.3e} <= 1e-8 between extension and boundary coefficients",
    )
    return rows


# ---------------------------------------------------------------------------
# option plumbing


def _float_list(text: str):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a comma-separated float list: {text!r}") from exc


def build_parser() -> _Parser:
    parser = _Parser(prog="fejerlab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--grid-M", type=int, default=8, help="weight truncation order")
        p.add_argument("--ppi", type=int, default=8, help="points per weight interval")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", type=str, default=None, help="CSV output path")
        p.add_argument("--config", type=str, default=None, help="key=value option file")

    p = sub.add_parser("duality", help="norm equality on the associate pair")
    common(p)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--max-order", type=int, default=64)
    p.set_defaults(func=cmd_duality)

    p = sub.add_parser("blowup", help="unbounded operator norms along the spikes")
    common(p)
    p.add_argument("--m", type=_int_list, default=[1, 4, 9, 16, 25])
    p.add_argument("--oversample", type=int, default=8)
    p.set_defaults(func=cmd_blowup)

    p = sub.add_parser("fejer-converge", help="unweighted L1 convergence of Fejér means")
    common(p)
    p.add_argument("--orders", type=_int_list, default=[16, 64, 256, 1024])
    p.add_argument("--arc-length", type=float, default=math.pi / 2)
    p.set_defaults(func=cmd_fejer_converge)

    p = sub.add_parser("witness", help="gliding-hump divergence witness")
    common(p)
    p.add_argument("--stages", type=int, default=3)
    p.add_argument("--target", type=float, default=1.0)
    p.set_defaults(func=cmd_witness, grid_M=64)

    p = sub.add_parser("density", help="weighted-L1 polynomial approximation curve")
    common(p)
    p.add_argument("--function", choices=sorted(_DENSITY_FUNCTIONS), default="invquarter")
    p.add_argument("--degrees", type=_int_list, default=[4, 8, 16, 32, 64])
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("maximal", help="maximal operator ratio on the weights")
    common(p)
    p.add_argument("--orders", type=_int_list, default=[4, 16, 64])
    p.set_defaults(func=cmd_maximal)

    p = sub.add_parser("taylor-fourier", help="extension coefficients match boundary ones")
    common(p)
    p.add_argument("--radii", type=_float_list, default=[0.5, 0.9])
    p.set_defaults(func=cmd_taylor_fourier)

    return parser


def _apply_config(argv):
    """Inject config-file entries before explicit flags (flags win)."""
    if "--config" not in argv:
        return argv
    idx = argv.index("--config")
    if idx + 1 >= len(argv):
        raise ConfigError("--config requires a path")
    path = argv[idx + 1]
    injected = []
    try:
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ConfigError(f"bad config line: {line!r}")
                key, value = (s.strip() for s in line.split("=", 1))
                injected += [f"--{key.replace('_', '-')}", value]
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
    return argv[:1] + injected + argv[1:]


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        if argv:
            argv = _apply_config(argv)
        args = parser.parse_args(argv)
        args.func(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 1
    except (NoQualifyingN, GridTooCoarse, StageFailure, ValueError) as exc:
        print(f"contract violation: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except ContractViolation as exc:
        print(f"contract violation: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
