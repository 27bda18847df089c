"""Zero-battery (pure amplitude constraint) analysis.

With no battery the admissible set is the cube [-A, A]^n, and everything
becomes explicit: the noise-blown-up volume is an exact binomial-type sum
over face dimensions, its normalized log converges to a concave limit
function of the face fraction theta, the maximizer solves a cubic, and the
resulting ell(nu) powers the volume-based capacity upper bound.  The module
also carries the two capacity asymptotes for this case (low-noise cube-root
expansion, high-noise two-point-input series) and a numeric entropy of X+Z
for checking h(X+Z) <= ell(nu).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# numpy 2 renamed trapz; support both without warnings
_trapezoid = getattr(np, "trapezoid", None) or np.trapz

from .numerics import (
    ConvergenceError,
    ToleranceConfig,
    adaptive_quadrature,
    bisection_root,
    log_gamma,
    log_sum_exp,
    log_unit_ball_volume,
)

__all__ = [
    "CubeEllResult",
    "DensitySpec",
    "EntropyOfSum",
    "binary_entropy",
    "log_parallel_volume_cube",
    "f_nu_n",
    "f_nu",
    "theta_star",
    "ell_cube",
    "low_noise_expansion",
    "bpsk_high_noise_capacity",
    "high_noise_series",
    "entropy_of_sum",
]

LN_2PIE = math.log(2.0 * math.pi * math.e)


def binary_entropy(theta):
    """H(theta) in nats, with the 0 ln 0 = 0 convention at the endpoints."""
    if not 0.0 <= theta <= 1.0:
        raise ValueError("theta must lie in [0, 1]")
    h = 0.0
    if theta > 0.0:
        h -= theta * math.log(theta)
    if theta < 1.0:
        h -= (1.0 - theta) * math.log(1.0 - theta)
    return h


def _log_binomial(n, j):
    return log_gamma(n + 1.0) - log_gamma(j + 1.0) - log_gamma(n - j + 1.0)


def log_parallel_volume_cube(amplitude, nu, n):
    """(1/n) ln Vol([-A, A]^n fattened by a ball of radius sqrt(n*nu)).

    The volume is the exact face-decomposition sum over j (dimension of the
    ball part): C(n,j) * (2A)^(n-j) * unit_ball_vol(j) * sqrt(n*nu)^j,
    evaluated wholly in the log domain.
    """
    if amplitude <= 0:
        raise ValueError("amplitude must be positive")
    if nu < 0:
        raise ValueError("nu must be nonnegative")
    if n < 1:
        raise ValueError("n must be a positive integer")
    if nu == 0:
        return math.log(2.0 * amplitude)
    j = np.arange(n + 1, dtype=float)
    terms = (
        _log_binomial(float(n), j)
        + (n - j) * math.log(2.0 * amplitude)
        + log_unit_ball_volume(np.arange(n + 1))
        + (j / 2.0) * math.log(n * nu)
    )
    return log_sum_exp(terms) / n


def f_nu_n(amplitude, nu, n, j):
    """Per-term exponent of the fattened-cube sum at face fraction j/n."""
    if not 0 <= j <= n:
        raise ValueError("need 0 <= j <= n")
    if nu <= 0:
        raise ValueError("nu must be positive")
    return (
        _log_binomial(float(n), float(j))
        + (n - j) * math.log(2.0 * amplitude)
        + log_unit_ball_volume(j)
        + (j / 2.0) * math.log(n * nu)
    ) / n


def f_nu(amplitude, nu, theta):
    """Limit of f_nu_n at face fraction theta; endpoints by continuity."""
    if nu <= 0:
        raise ValueError("nu must be positive")
    value = binary_entropy(theta) + (1.0 - theta) * math.log(2.0 * amplitude)
    if theta > 0.0:
        value += (theta / 2.0) * math.log(2.0 * math.pi * math.e * nu / theta)
    return value


_THETA_TOL = ToleranceConfig(abs_tol=1e-15, rel_tol=0.0, max_iterations=200)


def theta_star(amplitude, nu, tol=None):
    """Maximizing face fraction: the unique root in (0,1) of the cubic
    (1-theta)^2 = (2A^2/(pi nu)) * theta^3.

    The root is found by bisection on the polynomial form above (strictly
    decreasing in theta), which keeps the residual near machine scale even
    when 2A^2/(pi nu) is huge; the ratio form (1-theta)^2/theta^3 would lose
    all residual accuracy at small nu.
    """
    if amplitude <= 0 or nu <= 0:
        raise ValueError("amplitude and nu must be positive")
    if tol is None:
        tol = _THETA_TOL
    ratio = 2.0 * amplitude * amplitude / (math.pi * nu)

    def cubic(theta):
        return (1.0 - theta) ** 2 - ratio * theta ** 3

    return bisection_root(cubic, 1e-15, 1.0 - 1e-15, tol)


@dataclass(frozen=True)
class CubeEllResult:
    """ell(nu) for the cube together with the maximizer that produced it.

    theta_star lies in (0,1) for nu > 0; the degenerate nu = 0 case reports
    theta_star = 0 and ell = ln 2A.
    """

    amplitude: float
    noise_power: float
    theta_star: float
    ell: float


def ell_cube(amplitude, nu, tol=None):
    """Limiting normalized log-volume of the noise-fattened cube."""
    if amplitude <= 0:
        raise ValueError("amplitude must be positive")
    if nu < 0:
        raise ValueError("nu must be nonnegative")
    if nu == 0:
        return CubeEllResult(amplitude, 0.0, 0.0, math.log(2.0 * amplitude))
    ts = theta_star(amplitude, nu, tol)
    return CubeEllResult(amplitude, nu, ts, f_nu(amplitude, nu, ts))


def low_noise_expansion(amplitude, nu):
    """Three-term small-nu capacity upper bound:
    ln 2A - 0.5 ln(2 pi e nu) + (3c/2) nu^(1/3), c = (pi / (2A^2))^(1/3).
    """
    if amplitude <= 0 or nu <= 0:
        raise ValueError("amplitude and nu must be positive")
    c = (math.pi / (2.0 * amplitude * amplitude)) ** (1.0 / 3.0)
    return (
        math.log(2.0 * amplitude)
        - 0.5 * math.log(2.0 * math.pi * math.e * nu)
        + 1.5 * c * nu ** (1.0 / 3.0)
    )


def _log_cosh(y):
    # ln cosh without overflow: |y| + ln(1 + e^(-2|y|)) - ln 2
    ay = abs(y)
    return ay + math.log1p(math.exp(-2.0 * ay)) - math.log(2.0)


_BPSK_TOL = ToleranceConfig(abs_tol=1e-13, rel_tol=1e-11, max_iterations=400_000)


def bpsk_high_noise_capacity(amplitude, nu, tol=None):
    """Capacity of the two-point input +-A over Gaussian noise of power nu.

    C = alpha^2 - (2 / (sqrt(2 pi) alpha)) e^(-alpha^2/2) *
        integral_0^inf e^(-y^2/(2 alpha^2)) cosh(y) ln cosh(y) dy,
    with alpha = A/sqrt(nu).  The integrand is evaluated in overflow-safe
    exponential form and truncated at y_max = max(40, 12 alpha^2 + 40); the
    range is integrated in blocks scaled to the Gaussian support so the
    adaptive rule cannot mistake the far plateau of zeros for the whole
    integral.
    """
    if amplitude <= 0 or nu <= 0:
        raise ValueError("amplitude and nu must be positive")
    if tol is None:
        tol = _BPSK_TOL
    alpha = amplitude / math.sqrt(nu)
    y_max = max(40.0, 12.0 * alpha * alpha + 40.0)

    inv2a2 = 1.0 / (2.0 * alpha * alpha)

    def integrand(y):
        # e^(-y^2/2a^2) cosh(y) = (e^(y - y^2/2a^2) + e^(-y - y^2/2a^2)) / 2
        e1 = y - y * y * inv2a2
        e2 = -y - y * y * inv2a2
        return 0.5 * (math.exp(e1) + math.exp(e2)) * _log_cosh(y)

    knots = {0.0, y_max}
    scale = max(alpha, 1e-6)
    for k in range(-2, 14):
        knots.add(scale * 2.0 ** k)
    peak = alpha * alpha  # maximizer of y - y^2/(2 alpha^2)
    for step in (-6.0, -3.0, 0.0, 3.0, 6.0, 12.0):
        knots.add(peak + step * alpha)
    pts = sorted(k for k in knots if 0.0 <= k <= y_max)
    panel_tol = ToleranceConfig(
        abs_tol=tol.abs_tol / max(len(pts) - 1, 1),
        rel_tol=tol.rel_tol,
        max_iterations=tol.max_iterations,
    )
    integral = 0.0
    for lo, hi in zip(pts[:-1], pts[1:]):
        if hi > lo:
            integral += adaptive_quadrature(integrand, lo, hi, panel_tol)

    prefactor = 2.0 / (math.sqrt(2.0 * math.pi) * alpha) * math.exp(-0.5 * alpha * alpha)
    return alpha * alpha - prefactor * integral


def high_noise_series(alpha):
    """Weak-signal capacity series alpha^2/2 - alpha^4/4 + alpha^6/6 - 5 alpha^8/24."""
    a2 = alpha * alpha
    return a2 / 2.0 - a2 ** 2 / 4.0 + a2 ** 3 / 6.0 - 5.0 * a2 ** 4 / 24.0


@dataclass(frozen=True)
class DensitySpec:
    """Input/noise density description for the entropy-of-sum check.

    kind is one of 'uniform-on-interval' (uniform on [-amplitude, amplitude]),
    'two-point-symmetric' (equal mass at +-amplitude), or 'gaussian'
    (mean 0, given variance).
    """

    kind: str
    amplitude: float = 0.0
    variance: float = 0.0

    def __post_init__(self):
        if self.kind == "uniform-on-interval":
            if self.amplitude < 0:
                raise ValueError("amplitude must be nonnegative")
            object.__setattr__(self, "variance", self.amplitude ** 2 / 3.0)
        elif self.kind == "two-point-symmetric":
            if self.amplitude < 0:
                raise ValueError("amplitude must be nonnegative")
            object.__setattr__(self, "variance", self.amplitude ** 2)
        elif self.kind == "gaussian":
            if self.variance < 0:
                raise ValueError("variance must be nonnegative")
            object.__setattr__(self, "amplitude", math.inf)
        else:
            raise ValueError(f"unsupported density kind: {self.kind!r}")

    @staticmethod
    def uniform(half_width):
        return DensitySpec("uniform-on-interval", amplitude=half_width)

    @staticmethod
    def two_point(level):
        return DensitySpec("two-point-symmetric", amplitude=level)

    @staticmethod
    def gaussian(variance):
        return DensitySpec("gaussian", variance=variance)


class EntropyOfSum(float):
    """Differential entropy value that also carries the (A, nu) it was
    computed for, so bound comparisons need no side channel."""

    def __new__(cls, value, amplitude, noise_power):
        obj = super().__new__(cls, value)
        obj.amplitude = amplitude
        obj.noise_power = noise_power
        return obj


_ENTROPY_TOL = ToleranceConfig(abs_tol=1e-6, rel_tol=0.0, max_iterations=400_000)
_GRID_LEVELS = (4097, 8193, 16385, 32769, 65537, 131073)


def _neg_p_log_p(p):
    return -p * math.log(p) if p > 0.0 else 0.0


def _convolve_linear(a, b):
    n = a.size + b.size - 1
    nfft = 1 << (n - 1).bit_length()
    out = np.fft.irfft(np.fft.rfft(a, nfft) * np.fft.rfft(b, nfft), nfft)[:n]
    return np.maximum(out, 0.0)


def entropy_of_sum(x_spec, z_spec, tol=None):
    """Differential entropy h(X + Z) for bounded X and Gaussian Z.

    Uniform X: the density of the sum is formed by trapezoid-grid
    convolution on [-A - 8 sqrt(nu), A + 8 sqrt(nu)], refined (grid doubling
    from 4096 cells) until the entropy moves by less than abs_tol, with the
    entropy integral itself done by adaptive_quadrature on the interpolated
    density.  Two-point X: the sum density is an explicit mixture of two
    shifted Gaussians and is integrated directly.  Returns a float that also
    carries .amplitude and .noise_power for the downstream bound comparison.
    """
    if tol is None:
        tol = _ENTROPY_TOL
    if z_spec.kind != "gaussian":
        raise ValueError("noise spec must be gaussian")
    if x_spec.kind == "gaussian":
        raise ValueError("input spec must be amplitude-bounded")
    amp = x_spec.amplitude
    nu = z_spec.variance

    if amp == 0.0:  # X identically zero: entropy of the noise alone
        if nu == 0.0:
            return EntropyOfSum(-math.inf, 0.0, 0.0)
        return EntropyOfSum(0.5 * math.log(2.0 * math.pi * math.e * nu), 0.0, nu)

    if nu == 0.0:
        if x_spec.kind == "uniform-on-interval":
            return EntropyOfSum(math.log(2.0 * amp), amp, 0.0)
        return EntropyOfSum(-math.inf, amp, 0.0)  # discrete X, no density

    half = amp + 8.0 * math.sqrt(nu)
    quad_tol = ToleranceConfig(
        abs_tol=max(0.05 * tol.abs_tol, 1e-9),
        rel_tol=0.0,
        max_iterations=tol.max_iterations,
    )

    if x_spec.kind == "two-point-symmetric":
        norm = 1.0 / math.sqrt(2.0 * math.pi * nu)

        def density(y):
            return 0.5 * norm * (
                math.exp(-0.5 * (y - amp) ** 2 / nu)
                + math.exp(-0.5 * (y + amp) ** 2 / nu)
            )

        value = adaptive_quadrature(lambda y: _neg_p_log_p(density(y)), -half, half, quad_tol)
        return EntropyOfSum(value, amp, nu)

    # uniform input: grid convolution, refined until the entropy stabilizes
    previous = None
    for points in _GRID_LEVELS:
        grid = np.linspace(-half, half, points)
        step = grid[1] - grid[0]
        # cell-averaged uniform density: fractional coverage at the +-A edges
        cover_lo = np.maximum(grid - step / 2.0, -amp)
        cover_hi = np.minimum(grid + step / 2.0, amp)
        px = np.maximum(cover_hi - cover_lo, 0.0) / (step * 2.0 * amp)
        pz = np.exp(-0.5 * grid * grid / nu) / math.sqrt(2.0 * math.pi * nu)
        py = _convolve_linear(px, pz)[(points - 1) // 2: (points - 1) // 2 + points] * step
        py /= _trapezoid(py, grid)

        def density(y, grid=grid, py=py):
            return float(np.interp(y, grid, py, left=0.0, right=0.0))

        value = adaptive_quadrature(lambda y: _neg_p_log_p(density(y)), -half, half, quad_tol)
        if previous is not None and abs(value - previous) < tol.abs_tol:
            return EntropyOfSum(value, amp, nu)
        previous = value
    raise ConvergenceError("entropy grid refinement did not stabilize")
