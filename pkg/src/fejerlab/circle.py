"""Grids, function representations, quadrature, Fourier coefficients,
kernels and convolution on the unit circle.

The circle is parameterized by the angle theta in (-pi, pi] and carries the
normalized measure dm = |d theta| / (2 pi), so the full circle has measure 1.

Grids are composite: the cell edges always contain the points +-pi/k for
k = 1..2M+1 (plus 0 and +-pi), so that the spiked step weights used elsewhere
in this package are represented exactly, with no sampling error.  Within each
base cell the mesh is uniform except for a short geometric (dyadic) cascade
toward both ends; clustering nodes at the weight's jump points is what makes
node-sampled suprema stable under mesh refinement.  Quadrature is the
composite midpoint rule: nodes are cell midpoints, weights are cell lengths
divided by 2 pi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

TWO_PI = 2.0 * math.pi

__all__ = [
    "CircleGrid",
    "PiecewiseConstant",
    "SampledFunction",
    "FourierCoefficients",
    "KernelSpec",
    "AliasingError",
    "wrap_angle",
    "make_grid",
    "fourier_coeff",
    "fourier_window",
    "fejer_kernel_eval",
    "poisson_kernel_eval",
    "fejer_mean",
    "synthesize",
    "convolve_direct",
    "poisson_extend",
]


class AliasingError(ValueError):
    """Requested Fourier index lies beyond the safe window of a sampled function."""


def wrap_angle(theta):
    """Reduce angles to the fundamental interval (-pi, pi]."""
    t = np.remainder(np.asarray(theta, dtype=float), TWO_PI)
    return np.where(t > math.pi, t - TWO_PI, t)


def _frozen(a, dtype=float):
    out = np.ascontiguousarray(np.asarray(a, dtype=dtype))
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class CircleGrid:
    """Composite partition of [-pi, pi] with midpoint quadrature.

    edges        cell boundaries, increasing, edges[0] = -pi, edges[-1] = pi
    nodes        cell midpoints
    quad_weights cell lengths / 2 pi; strictly positive, summing to 1
    """

    edges: np.ndarray
    nodes: np.ndarray
    quad_weights: np.ndarray
    M: int
    points_per_interval: int

    @property
    def breakpoints(self):
        return self.edges

    @property
    def node_count(self) -> int:
        return self.nodes.size

    def is_symmetric(self, tol: float = 1e-15) -> bool:
        """True if the node set and weights are invariant under theta -> -theta."""
        return (
            np.max(np.abs(self.nodes + self.nodes[::-1])) <= tol
            and np.max(np.abs(self.quad_weights - self.quad_weights[::-1])) <= tol
        )

    def cell_index(self, theta):
        """Index of the cell containing each angle (left-closed cells)."""
        t = wrap_angle(theta)
        idx = np.searchsorted(self.edges, t, side="right") - 1
        return np.clip(idx, 0, self.node_count - 1)


def _subdivide(a: float, b: float, pieces: int, edge_levels: int) -> np.ndarray:
    """Interior edges of a base cell [a, b]: `pieces` uniform cells with a
    dyadic cascade of `edge_levels` extra cells toward each endpoint."""
    u = (b - a) / pieces
    inner = [a + u * j for j in range(1, pieces)]
    left = [a + u * 0.5**lev for lev in range(1, edge_levels + 1)]
    right = [b - u * 0.5**lev for lev in range(1, edge_levels + 1)]
    return np.array(sorted(set(inner + left + right)))


def make_grid(
    M: int,
    points_per_interval: int,
    *,
    extra_breakpoints=(),
    max_cell: float | None = None,
    edge_levels: int = 12,
) -> CircleGrid:
    """Build a composite circle grid aligned with the breakpoints +-pi/k.

    Base cell edges are 0, +-pi/k for k = 1..2M+1, and +-pi.  Every base cell
    is divided into at least `points_per_interval` uniform cells (more when
    `max_cell` demands a finer global resolution), and each base cell gets a
    geometric cascade of `edge_levels` shrinking cells at both of its ends.
    The resulting mesh is exactly symmetric under theta -> -theta as long as
    `extra_breakpoints` is empty or itself symmetric.

    max_cell caps the width of every cell; pass roughly 2*pi/(8*(n+1)) when
    the grid has to resolve kernels of trigonometric degree n.
    """
    if M < 1:
        raise ValueError(f"M must be >= 1, got {M}")
    if points_per_interval < 2:
        raise ValueError(
            f"points_per_interval must be >= 2, got {points_per_interval}"
        )
    if max_cell is not None and max_cell <= 0:
        raise ValueError("max_cell must be positive")

    base = [0.0] + [math.pi / k for k in range(1, 2 * M + 2)]
    base = np.array(sorted(base))

    pos_edges = [base]
    for a, b in zip(base[:-1], base[1:]):
        pieces = points_per_interval
        if max_cell is not None:
            pieces = max(pieces, math.ceil((b - a) / max_cell))
        pos_edges.append(_subdivide(a, b, pieces, edge_levels))
    pos = np.unique(np.concatenate(pos_edges))

    edges = np.concatenate([-pos[::-1], pos[1:]])
    if extra_breakpoints:
        extras = wrap_angle(np.asarray(extra_breakpoints, dtype=float))
        edges = np.unique(np.concatenate([edges, extras]))

    widths = np.diff(edges)
    if np.any(widths <= 0):
        raise ValueError("degenerate cells in grid construction")
    nodes = 0.5 * (edges[:-1] + edges[1:])
    return CircleGrid(
        edges=_frozen(edges),
        nodes=_frozen(nodes),
        quad_weights=_frozen(widths / TWO_PI),
        M=M,
        points_per_interval=points_per_interval,
    )


@dataclass(frozen=True)
class PiecewiseConstant:
    """Step function on the circle, exact on its own partition.

    Cells are left-closed: the value on [edges[j], edges[j+1]) is values[j],
    and the last cell is closed at pi.  Angles are wrapped to (-pi, pi]
    before lookup.
    """

    edges: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        edges = _frozen(self.edges)
        values = np.asarray(self.values)
        values = _frozen(values, dtype=complex if np.iscomplexobj(values) else float)
        if edges.ndim != 1 or edges.size < 2:
            raise ValueError("need at least two edges")
        if values.size != edges.size - 1:
            raise ValueError("values must have one entry per cell")
        if not (
            abs(edges[0] + math.pi) <= 1e-12 and abs(edges[-1] - math.pi) <= 1e-12
        ):
            raise ValueError("edges must span [-pi, pi]")
        if np.any(np.diff(edges) <= 0):
            raise ValueError("edges must be strictly increasing")
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "values", values)

    def __call__(self, theta):
        t = wrap_angle(theta)
        idx = np.clip(
            np.searchsorted(self.edges, t, side="right") - 1, 0, self.values.size - 1
        )
        return self.values[idx]

    def refine(self, new_edges) -> "PiecewiseConstant":
        """Same function on a finer partition containing `new_edges`."""
        edges = np.unique(np.concatenate([self.edges, np.asarray(new_edges, float)]))
        mids = 0.5 * (edges[:-1] + edges[1:])
        return PiecewiseConstant(edges=edges, values=self(mids))

    def integral(self) -> complex | float:
        """Exact integral with respect to dm."""
        return np.sum(self.values * np.diff(self.edges)) / TWO_PI

    def abs(self) -> "PiecewiseConstant":
        return PiecewiseConstant(edges=self.edges, values=np.abs(self.values))

    @staticmethod
    def constant(value) -> "PiecewiseConstant":
        return PiecewiseConstant(
            edges=np.array([-math.pi, math.pi]), values=np.array([value])
        )

    @staticmethod
    def indicator(a: float, b: float, value=1.0) -> "PiecewiseConstant":
        """Indicator of the arc [a, b] scaled by `value`, -pi <= a < b <= pi."""
        if not (-math.pi <= a < b <= math.pi):
            raise ValueError("need -pi <= a < b <= pi")
        edges = [-math.pi, a, b, math.pi]
        vals = [0.0, value, 0.0]
        if a == -math.pi:
            edges, vals = edges[1:], vals[1:]
        if b == math.pi:
            edges, vals = edges[:-1], vals[:-1]
        return PiecewiseConstant(edges=np.array(edges), values=np.array(vals))


def merge_partitions(f: PiecewiseConstant, g: PiecewiseConstant):
    """Common refinement of two step functions: (edges, f values, g values)."""
    edges = np.unique(np.concatenate([f.edges, g.edges]))
    mids = 0.5 * (edges[:-1] + edges[1:])
    return edges, f(mids), g(mids)


@dataclass(frozen=True)
class SampledFunction:
    """Node samples of a function on a circle grid.

    Quadrature treats the function as constant on each cell, which is exact
    whenever the underlying function is a step function whose jumps lie on
    the grid edges.
    """

    grid: CircleGrid
    samples: np.ndarray

    def __post_init__(self):
        samples = np.asarray(self.samples)
        samples = _frozen(
            samples, dtype=complex if np.iscomplexobj(samples) else float
        )
        if samples.size != self.grid.node_count:
            raise ValueError("one sample per grid node required")
        object.__setattr__(self, "samples", samples)

    def integral(self):
        return np.sum(self.samples * self.grid.quad_weights)

    @staticmethod
    def from_callable(fn, grid: CircleGrid) -> "SampledFunction":
        return SampledFunction(grid=grid, samples=np.asarray(fn(grid.nodes)))


@dataclass(frozen=True)
class FourierCoefficients:
    """Finite window of coefficients c(k) for |k| <= window."""

    window: int
    coeffs: np.ndarray

    def __post_init__(self):
        coeffs = _frozen(np.asarray(self.coeffs), dtype=complex)
        if self.window < 0:
            raise ValueError("window must be >= 0")
        if coeffs.size != 2 * self.window + 1:
            raise ValueError("need 2*window + 1 coefficients")
        object.__setattr__(self, "coeffs", coeffs)

    def __getitem__(self, k: int) -> complex:
        if abs(k) > self.window:
            return 0.0 + 0.0j
        return complex(self.coeffs[k + self.window])

    @property
    def ks(self):
        return np.arange(-self.window, self.window + 1)

    def is_conjugate_symmetric(self, tol: float = 1e-12) -> bool:
        """Whether c(-k) = conj(c(k)), i.e. the represented function is real."""
        return bool(
            np.max(np.abs(self.coeffs - np.conj(self.coeffs[::-1]))) <= tol
        )

    @staticmethod
    def from_dict(window: int, entries: dict) -> "FourierCoefficients":
        coeffs = np.zeros(2 * window + 1, dtype=complex)
        for k, v in entries.items():
            if abs(k) > window:
                raise ValueError(f"index {k} outside window {window}")
            coeffs[k + window] = v
        return FourierCoefficients(window=window, coeffs=coeffs)


def _pc_fourier_coeff(f: PiecewiseConstant, k):
    k = np.asarray(k)
    a, b = f.edges[:-1], f.edges[1:]
    out = np.empty(k.shape, dtype=complex)
    nz = k != 0
    if np.any(~nz):
        out[~nz] = np.sum(f.values * (b - a)) / TWO_PI
    if np.any(nz):
        kk = k[nz].reshape(-1, 1)
        phase = np.exp(-1j * kk * b) - np.exp(-1j * kk * a)
        out[nz] = np.sum(f.values * phase, axis=1) / (-TWO_PI * 1j * kk[:, 0])
    return out


def fourier_coeff(f, k: int) -> complex:
    """k-th Fourier coefficient c(k) = integral of f(theta) e^{-ik theta} dm.

    Step functions use the exact closed form; sampled functions use midpoint
    quadrature and refuse indices beyond node_count/4, where the midpoint
    sums are no longer trustworthy (aliasing).
    """
    if isinstance(f, PiecewiseConstant):
        return complex(_pc_fourier_coeff(f, np.array([k]))[0])
    if isinstance(f, SampledFunction):
        limit = f.grid.node_count // 4
        if abs(k) > limit:
            raise AliasingError(
                f"|k|={abs(k)} beyond safe window {limit} for {f.grid.node_count} nodes"
            )
        phases = np.exp(-1j * k * f.grid.nodes)
        return complex(np.sum(f.samples * phases * f.grid.quad_weights))
    raise TypeError(f"unsupported representation {type(f).__name__}")


def fourier_window(f, window: int) -> FourierCoefficients:
    """All coefficients with |k| <= window, as one vectorized pass."""
    ks = np.arange(-window, window + 1)
    if isinstance(f, PiecewiseConstant):
        coeffs = _pc_fourier_coeff(f, ks)
    elif isinstance(f, SampledFunction):
        limit = f.grid.node_count // 4
        if window > limit:
            raise AliasingError(
                f"window {window} beyond safe window {limit} "
                f"for {f.grid.node_count} nodes"
            )
        phases = np.exp(-1j * np.outer(ks, f.grid.nodes))
        coeffs = phases @ (f.samples * f.grid.quad_weights)
    else:
        raise TypeError(f"unsupported representation {type(f).__name__}")
    return FourierCoefficients(window=window, coeffs=coeffs)


def fejer_kernel_eval(n: int, theta):
    """Fejér kernel of order n >= 0.

    Closed form (1/(n+1)) (sin((n+1)theta/2) / sin(theta/2))^2; the removable
    singularity at theta = 0 (mod 2 pi) is filled with the coefficient-sum
    value n + 1.
    """
    if n < 0:
        raise ValueError("kernel order must be >= 0")
    t = np.asarray(theta, dtype=float)
    s = np.sin(0.5 * t)
    tiny = np.abs(s) < 1e-9
    s_safe = np.where(tiny, 1.0, s)
    num = np.sin(0.5 * (n + 1) * t)
    val = (num / s_safe) ** 2 / (n + 1)
    out = np.where(tiny, float(n + 1), val)
    return out if out.ndim else float(out)


def poisson_kernel_eval(r: float, theta):
    """Poisson kernel (1 - r^2) / (1 - 2 r cos theta + r^2) for 0 <= r < 1."""
    if not 0.0 <= r < 1.0:
        raise ValueError(f"need 0 <= r < 1, got {r}")
    t = np.asarray(theta, dtype=float)
    out = (1.0 - r * r) / (1.0 - 2.0 * r * np.cos(t) + r * r)
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class KernelSpec:
    """Convolution kernel: Fejér of order n, Poisson at radius r, or a custom
    step/sampled profile evaluated with wrap-around."""

    kind: str
    n: int | None = None
    r: float | None = None
    profile: object | None = field(default=None, repr=False)

    @staticmethod
    def fejer(n: int) -> "KernelSpec":
        if n < 0:
            raise ValueError("Fejér order must be >= 0")
        return KernelSpec(kind="fejer", n=int(n))

    @staticmethod
    def poisson(r: float) -> "KernelSpec":
        if not 0.0 <= r < 1.0:
            raise ValueError(f"Poisson radius must be in [0, 1), got {r}")
        return KernelSpec(kind="poisson", r=float(r))

    @staticmethod
    def custom(profile) -> "KernelSpec":
        if not isinstance(profile, (PiecewiseConstant, SampledFunction)):
            raise TypeError("custom kernels take a PiecewiseConstant or SampledFunction")
        return KernelSpec(kind="custom", profile=profile)

    def __call__(self, theta):
        if self.kind == "fejer":
            return fejer_kernel_eval(self.n, theta)
        if self.kind == "poisson":
            return poisson_kernel_eval(self.r, theta)
        if isinstance(self.profile, PiecewiseConstant):
            return self.profile(theta)
        # sampled profile: nearest-cell lookup on its own grid
        grid = self.profile.grid
        return self.profile.samples[grid.cell_index(theta)]


def fejer_mean(f: FourierCoefficients, n: int) -> FourierCoefficients:
    """Coefficients of the n-th Fejér mean: c(k) -> c(k) (1 - |k|/(n+1)).

    The input window must be at least n, otherwise the mean is not
    determined by the available coefficients.
    """
    if n < 0:
        raise ValueError("order must be >= 0")
    if f.window < n:
        raise ValueError(f"window {f.window} too small for Fejér order {n}")
    ks = f.ks
    damp = np.where(np.abs(ks) <= n, 1.0 - np.abs(ks) / (n + 1.0), 0.0)
    return FourierCoefficients(window=f.window, coeffs=f.coeffs * damp)


def synthesize(f: FourierCoefficients, theta):
    """Evaluate sum_k c(k) e^{ik theta} at the given angles."""
    t = np.atleast_1d(np.asarray(theta, dtype=float))
    out = np.zeros(t.shape, dtype=complex)
    block = max(1, 2_000_000 // max(1, 2 * f.window + 1))
    ks = f.ks
    for start in range(0, t.size, block):
        sl = slice(start, start + block)
        out[sl] = np.exp(1j * np.outer(t[sl], ks)) @ f.coeffs
    return out if np.ndim(theta) else complex(out[0])


def convolve_direct(f: SampledFunction, kernel: KernelSpec) -> SampledFunction:
    """Quadrature convolution (f * K)(theta_i) = sum_j K(theta_i - theta_j) f_j q_j.

    This is the discrete model of the convolution operator: applying the
    assembled operator matrix to the samples gives exactly these numbers.
    """
    nodes = f.grid.nodes
    fq = f.samples * f.grid.quad_weights
    out = np.empty(nodes.size, dtype=fq.dtype)
    block = max(1, 8_000_000 // max(1, nodes.size))
    for start in range(0, nodes.size, block):
        sl = slice(start, start + block)
        diff = nodes[sl, None] - nodes[None, :]
        vals = kernel(diff)
        if not np.all(np.isfinite(vals)):
            raise ValueError("kernel produced non-finite samples")
        out[sl] = vals @ fq
    return SampledFunction(grid=f.grid, samples=out)


def poisson_extend(f: FourierCoefficients, r: float, theta):
    """Harmonic extension at radius r: sum_k c(k) r^{|k|} e^{ik theta}.

    For band-limited data this coincides with the Poisson integral of the
    boundary function; the series form is exact and needs no quadrature.
    """
    if not 0.0 <= r < 1.0:
        raise ValueError(f"need 0 <= r < 1, got {r}")
    damped = FourierCoefficients(
        window=f.window, coeffs=f.coeffs * r ** np.abs(f.ks)
    )
    return synthesize(damped, theta)
