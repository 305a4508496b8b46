"""Numerical laboratory for Fejér summability on the circle: weighted L1
norms with a spiked weight, exact discrete convolution-operator norms and
their duality, a brute-force maximal function, Hardy-space coefficient
checks, and weighted-L1 polynomial approximation."""

from .circle import (
    AliasingError,
    CircleGrid,
    FourierCoefficients,
    KernelSpec,
    PiecewiseConstant,
    SampledFunction,
    convolve_direct,
    fejer_kernel_eval,
    fejer_mean,
    fourier_coeff,
    fourier_window,
    make_grid,
    poisson_extend,
    synthesize,
)
from .spaces import SpaceTag, Weight, holder_pairing, make_weight, norm, weight_l1_norm_series
from .operators import (
    Bump,
    GridTooCoarse,
    LocalizationParams,
    NoQualifyingN,
    OperatorMatrix,
    assemble_operator,
    duality_gap,
    fejer_blowup,
    localization_params,
    make_bump,
    operator_norm,
)
from .maximal import MaximalProfile, maximal_function, weight_maximal_ratio
from .hardy import is_hardy, product_hardy_check, taylor_fourier_check
from .approx import (
    IrlsConfig,
    PolyCoeffs,
    WitnessReport,
    best_poly_l1w,
    density_curve,
    fejer_error_curve,
    gliding_hump_witness,
)

__version__ = "0.1.0"
