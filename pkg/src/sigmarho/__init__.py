"""Capacity bounds for battery-constrained additive-noise channels.

The channel input is energy-limited by a battery of capacity sigma that
recharges by rho per symbol.  The package computes the exponential volume
growth rate of the admissible codeword set (spectrally, with a Monte Carlo
oracle), the noise-fattened volume functional ell(nu) (exactly for the
zero-battery cube, and through sub-convolutive sequence machinery in
general), and assembles them into capacity lower and upper bounds with a
CSV/figure-emitting CLI.
"""

from .bounds import (
    BoundsRow,
    awgn_upper_bound,
    bounds_sweep,
    cube_capacity_bounds,
    epi_lower_bound,
    minkowski_upper_bound,
    row_in_units,
    rows_to_csv,
)
from .cube import (
    CubeEllResult,
    DensitySpec,
    EntropyOfSum,
    binary_entropy,
    bpsk_high_noise_capacity,
    ell_cube,
    entropy_of_sum,
    f_nu,
    f_nu_n,
    high_noise_series,
    log_parallel_volume_cube,
    low_noise_expansion,
    theta_star,
)
from .geometry import (
    SigmaRhoParams,
    burstiness,
    burstiness_walk_probability,
    feasible_rows,
    is_feasible,
    pad_and_concat,
    state_trace,
    window_check,
)
from .growth import (
    DiscretizedOperator,
    GridLadderError,
    GrowthRateResult,
    KernelSpec,
    ZeroHitsError,
    discretize_operator,
    gamma_sandwich,
    kernel_eval,
    mc_log_volume,
    spectral_growth_rate,
    v,
    v1,
)
from .numerics import (
    BracketError,
    ConvergenceError,
    ToleranceConfig,
    adaptive_quadrature,
    bisection_root,
    golden_section_max,
    log_gamma,
    log_sum_exp,
    log_unit_ball_volume,
    power_iteration,
)
from .subconv import (
    ConjugateFunction,
    IntrinsicVolumeSequence,
    check_alexandrov_fenchel,
    check_subconvolutive,
    conjugate_on_interval,
    cube_intrinsic_sequence,
    cube_lambda_star,
    degenerate_sequence,
    ell_general,
    g_n_eval,
    lambda_star_estimate,
    lambda_sandwich_check,
    ldp_upper_check,
    load_sequence,
    save_sequence,
)

__version__ = "0.1.0"

__all__ = [
    "BoundsRow",
    "BracketError",
    "ConjugateFunction",
    "ConvergenceError",
    "CubeEllResult",
    "DensitySpec",
    "DiscretizedOperator",
    "EntropyOfSum",
    "GridLadderError",
    "GrowthRateResult",
    "IntrinsicVolumeSequence",
    "KernelSpec",
    "SigmaRhoParams",
    "ToleranceConfig",
    "ZeroHitsError",
    "adaptive_quadrature",
    "awgn_upper_bound",
    "binary_entropy",
    "bisection_root",
    "bounds_sweep",
    "bpsk_high_noise_capacity",
    "burstiness",
    "burstiness_walk_probability",
    "check_alexandrov_fenchel",
    "check_subconvolutive",
    "conjugate_on_interval",
    "cube_capacity_bounds",
    "cube_intrinsic_sequence",
    "cube_lambda_star",
    "degenerate_sequence",
    "discretize_operator",
    "ell_cube",
    "ell_general",
    "entropy_of_sum",
    "epi_lower_bound",
    "f_nu",
    "f_nu_n",
    "g_n_eval",
    "feasible_rows",
    "gamma_sandwich",
    "golden_section_max",
    "high_noise_series",
    "is_feasible",
    "kernel_eval",
    "lambda_sandwich_check",
    "lambda_star_estimate",
    "ldp_upper_check",
    "load_sequence",
    "log_gamma",
    "log_parallel_volume_cube",
    "log_sum_exp",
    "log_unit_ball_volume",
    "low_noise_expansion",
    "mc_log_volume",
    "minkowski_upper_bound",
    "pad_and_concat",
    "power_iteration",
    "row_in_units",
    "rows_to_csv",
    "save_sequence",
    "spectral_growth_rate",
    "state_trace",
    "theta_star",
    "v",
    "v1",
    "window_check",
]
