"""Sub-convolutive sequence machinery for positive battery caps.

For sigma > 0 the admissible-set intrinsic volumes are out of computational
reach, but their limit theory only needs a sequence mu_n(j) that is
sub-convolutive (mu_m conv mu_n >= mu_{m+n}) with positive endpoint masses.
This module works over any such sequence in log domain: structural checks,
the normalized log generating function g_n, convex conjugation on provably
sufficient search intervals, a grid estimate of the rate function Lambda*,
a large-deviation upper-bound check, and the noise functional
ell(nu) = sup_theta [-Lambda*(1-theta) + (theta/2) ln(2 pi e nu / theta)].

Instances with known closed forms (the cube and the degenerate two-mass
sequence) double as oracles for everything else.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .numerics import ToleranceConfig, golden_section_max, log_gamma, log_sum_exp

__all__ = [
    "IntrinsicVolumeSequence",
    "ConjugateFunction",
    "cube_intrinsic_sequence",
    "degenerate_sequence",
    "cube_lambda_star",
    "check_subconvolutive",
    "check_alexandrov_fenchel",
    "g_n_eval",
    "conjugate_on_interval",
    "lambda_star_estimate",
    "lambda_sandwich_check",
    "ldp_upper_check",
    "ell_general",
    "load_sequence",
    "save_sequence",
]

_REL_SLACK = math.log1p(-1e-10)  # multiplicative 1e-10 tolerance, log domain


@dataclass(frozen=True)
class IntrinsicVolumeSequence:
    """log mu_n(j) for n = 1..n_max; row n has entries j = 0..n.

    -inf entries (zero mass) are allowed except at j = 0 and j = n, whose
    masses must stay positive for the endpoint rate estimates to exist.
    """

    n_max: int
    log_mu: tuple

    def __post_init__(self):
        if self.n_max < 1 or len(self.log_mu) != self.n_max:
            raise ValueError("need one row per n = 1..n_max")
        rows = []
        for n, row in enumerate(self.log_mu, start=1):
            arr = np.asarray(row, dtype=float)
            if arr.shape != (n + 1,):
                raise ValueError(f"row for n={n} must have {n + 1} entries")
            if np.any(np.isnan(arr)) or np.any(arr == math.inf):
                raise ValueError("entries must be finite or -inf")
            if not (np.isfinite(arr[0]) and np.isfinite(arr[-1])):
                raise ValueError(f"row for n={n} needs finite endpoint masses")
            rows.append(arr)
        object.__setattr__(self, "log_mu", tuple(rows))

    def row(self, n):
        if not 1 <= n <= self.n_max:
            raise ValueError(f"n must lie in [1, {self.n_max}]")
        return self.log_mu[n - 1]


@dataclass(frozen=True)
class ConjugateFunction:
    """Convex conjugate sampled on an increasing grid in [0, 1]."""

    grid: np.ndarray
    values: np.ndarray
    provenance: str
    alpha_hat: float | None = None
    beta_hat: float | None = None
    n_used: int | None = None
    search_intervals: tuple | None = field(default=None, repr=False)

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if grid.ndim != 1 or grid.size < 2 or grid.shape != values.shape:
            raise ValueError("grid and values must be matching 1-D arrays")
        if grid[0] < 0 or grid[-1] > 1 or np.any(np.diff(grid) <= 0):
            raise ValueError("grid must increase within [0, 1]")
        second = np.diff(values, 2)
        if second.size and np.min(second) < -1e-9:
            raise ValueError("values are not convex along the grid")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)

    def __call__(self, x):
        return float(np.interp(x, self.grid, self.values))


def cube_intrinsic_sequence(amplitude, n_max):
    """Cube instance: log mu_n(j) = ln C(n,j) + j ln 2A (exact identities)."""
    if amplitude <= 0:
        raise ValueError("amplitude must be positive")
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    log2a = math.log(2.0 * amplitude)
    rows = []
    for n in range(1, n_max + 1):
        j = np.arange(n + 1, dtype=float)
        binom = log_gamma(n + 1.0) - log_gamma(j + 1.0) - log_gamma(n - j + 1.0)
        rows.append(binom + j * log2a)
    return IntrinsicVolumeSequence(n_max, tuple(rows))


def degenerate_sequence(n_max):
    """Two-mass instance: unit mass at j = 0 and j = n, zero in between."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    rows = []
    for n in range(1, n_max + 1):
        row = np.full(n + 1, -math.inf)
        row[0] = 0.0
        row[-1] = 0.0
        rows.append(row)
    return IntrinsicVolumeSequence(n_max, tuple(rows))


def cube_lambda_star(amplitude, grid_points=2049):
    """Closed-form rate function of the cube on a uniform grid:
    Lambda*(x) = x ln x + (1-x) ln(1-x) - x ln 2A (endpoints by continuity).
    """
    if amplitude <= 0:
        raise ValueError("amplitude must be positive")
    if grid_points < 2:
        raise ValueError("grid_points must be >= 2")
    x = np.linspace(0.0, 1.0, grid_points)
    inner = x[1:-1]
    vals = np.empty_like(x)
    vals[0] = 0.0
    vals[-1] = -math.log(2.0 * amplitude)
    vals[1:-1] = (
        inner * np.log(inner)
        + (1.0 - inner) * np.log(1.0 - inner)
        - inner * math.log(2.0 * amplitude)
    )
    return ConjugateFunction(
        grid=x, values=vals, provenance="closed-form",
        alpha_hat=math.log(2.0 * amplitude), beta_hat=0.0,
    )


def _log_convolve(a, b):
    """Log-domain convolution: out[i] = lse over j of a[j] + b[i-j]."""
    la, lb = a.size, b.size
    stack = np.full((la, la + lb - 1), -math.inf)
    for j in range(la):
        if a[j] > -math.inf:
            stack[j, j:j + lb] = a[j] + b
    top = stack.max(axis=0)
    out = np.full(la + lb - 1, -math.inf)
    ok = top > -math.inf
    if np.any(ok):
        shifted = np.exp(stack[:, ok] - top[ok])
        out[ok] = top[ok] + np.log(shifted.sum(axis=0))
    return out


def check_subconvolutive(seq, m, n):
    """True when mu_m conv mu_n covers mu_{m+n} within 1e-10 relative slack."""
    if m < 1 or n < 1 or m + n > seq.n_max:
        raise ValueError("need m, n >= 1 with m + n <= n_max")
    conv = _log_convolve(seq.row(m), seq.row(n))
    target = seq.row(m + n)
    with np.errstate(invalid="ignore"):
        ok = conv >= target + _REL_SLACK
    # -inf target is covered by anything, including a -inf convolution
    return bool(np.all(ok | (target == -math.inf)))


def check_alexandrov_fenchel(seq, n):
    """Strengthened log-concavity along row n:
    2 log mu_n(j) >= log((j+1)/j) + log mu_n(j-1) + log mu_n(j+1),
    within 1e-10 relative slack; -inf right sides pass vacuously.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    row = seq.row(n)
    for j in range(1, n):
        rhs = math.log((j + 1.0) / j) + row[j - 1] + row[j + 1]
        if rhs == -math.inf:
            continue
        if 2.0 * row[j] < rhs + _REL_SLACK:
            return False
    return True


def g_n_eval(seq, n, t):
    """Normalized log generating function (1/n) ln sum_j mu_n(j) e^(jt)."""
    row = seq.row(n)
    return log_sum_exp(row + np.arange(n + 1) * float(t)) / n


_CONJ_TOL = ToleranceConfig(abs_tol=1e-9, rel_tol=0.0, max_iterations=100_000)


def conjugate_on_interval(g, x, alpha, beta, g1_at_0, tol=None):
    """g*(x) = sup_t [x t - g(t)] for a normalized log generating function.

    For 0 < x < 1 the maximizer provably lies in
    [(beta - g1(0)) / x, (g1(0) - alpha) / (1 - x)], so the sup reduces to a
    golden-section search there; x = 0 and x = 1 are the analytic endpoint
    limits -beta and -alpha.  alpha and beta are the (possibly estimated)
    endpoint rates of the sequence behind g.
    """
    if not 0.0 <= x <= 1.0:
        raise ValueError("x must lie in [0, 1]")
    if tol is None:
        tol = _CONJ_TOL
    if x == 0.0:
        return -beta
    if x == 1.0:
        return -alpha
    lo = (beta - g1_at_0) / x
    hi = (g1_at_0 - alpha) / (1.0 - x)
    if lo > hi:
        raise ValueError("degenerate search interval; alpha/beta/g1(0) inconsistent")
    if lo == hi:
        return x * lo - g(lo)
    _, value = golden_section_max(lambda t: x * t - g(t), lo, hi, tol)
    return value


def lambda_star_estimate(seq, grid_points=65, tol=None):
    """Rate-function estimate: the conjugate of g at the largest available n.

    Endpoint rates are taken from the largest row
    (alpha_hat = log mu_N(N) / N, beta_hat = log mu_N(0) / N); the per-x
    search intervals are recorded on the result.
    """
    if grid_points < 16:
        raise ValueError("grid_points must be >= 16")
    if tol is None:
        tol = _CONJ_TOL
    n = seq.n_max
    row = seq.row(n)
    alpha_hat = float(row[-1]) / n
    beta_hat = float(row[0]) / n
    g1_at_0 = g_n_eval(seq, 1, 0.0)
    grid = np.linspace(0.0, 1.0, grid_points)

    def g(t):
        return g_n_eval(seq, n, t)

    values = np.empty(grid_points)
    intervals = []
    for i, x in enumerate(grid):
        if x == 0.0:
            values[i] = -beta_hat
            intervals.append((0.0, 0.0))
        elif x == 1.0:
            values[i] = -alpha_hat
            intervals.append((0.0, 0.0))
        else:
            lo = (beta_hat - g1_at_0) / x
            hi = (g1_at_0 - alpha_hat) / (1.0 - x)
            intervals.append((lo, hi))
            values[i] = conjugate_on_interval(g, x, alpha_hat, beta_hat, g1_at_0, tol)
    return ConjugateFunction(
        grid=grid, values=values, provenance="lambda-star-estimate",
        alpha_hat=alpha_hat, beta_hat=beta_hat, n_used=n,
        search_intervals=tuple(intervals),
    )


def lambda_sandwich_check(seq, t_grid):
    """Verify max(beta_hat, t + alpha_hat) <= g_N(t) <= g_1(t) on a t grid.

    The lower envelope uses the endpoint rates of the largest row; the upper
    side is the n = 1 generating function, which dominates every g_n for
    sub-convolutive sequences.  Tolerance 1e-9 on both sides.
    """
    n = seq.n_max
    row = seq.row(n)
    alpha_hat = float(row[-1]) / n
    beta_hat = float(row[0]) / n
    for t in t_grid:
        g_big = g_n_eval(seq, n, t)
        g_one = g_n_eval(seq, 1, t)
        if max(beta_hat, t + alpha_hat) - 1e-9 > g_big:
            return False
        if g_big > g_one + 1e-9:
            return False
    return True


def _interp_error_bound(lambda_star, a, b):
    """Second-difference bound on how far the true convex function can sit
    below its piecewise-linear samples over [a, b]."""
    grid = lambda_star.grid
    vals = lambda_star.values
    if grid.size < 3:
        return 0.0
    inside = (grid[2:] >= a) & (grid[:-2] <= b)
    second = np.diff(vals, 2)[inside]
    if second.size == 0:
        return 0.0
    return float(max(0.0, np.max(second))) / 2.0


def ldp_upper_check(seq, interval, n, lambda_star):
    """Large-deviation upper bound at scale n over a fraction interval.

    lhs = (1/n) ln of the total mass of row n on {j : j/n in interval};
    rhs = - min of the rate-function estimate over the interval.  ok when
    lhs <= rhs + slack with slack = ln(n+1)/n plus an interpolation
    allowance from the grid's second differences.
    """
    a, b = float(interval[0]), float(interval[1])
    if not (0.0 <= a <= b <= 1.0):
        raise ValueError("interval must be a closed subinterval of [0, 1]")
    if not 1 <= n <= seq.n_max:
        raise ValueError("n must lie in [1, n_max]")
    row = seq.row(n)
    j = np.arange(n + 1)
    picked = row[(j >= a * n) & (j <= b * n)]
    if picked.size == 0:
        raise ValueError("interval contains no lattice points j/n")
    lhs = log_sum_exp(picked) / n

    candidates = [a, b] + [float(x) for x in lambda_star.grid if a < x < b]
    rate_min = min(lambda_star(c) for c in candidates)
    rhs = -rate_min
    slack = math.log(n + 1.0) / n + _interp_error_bound(lambda_star, a, b) + 1e-9
    return lhs, rhs, bool(lhs <= rhs + slack)


def ell_general(lambda_star, nu, tol=None):
    """Noise functional sup over theta in [0,1] of
    -Lambda*(1-theta) + (theta/2) ln(2 pi e nu / theta),
    with the rate function linearly interpolated between grid samples.
    The objective is concave, so a golden-section search suffices.
    """
    if nu <= 0:
        raise ValueError("nu must be positive")
    if tol is None:
        tol = _CONJ_TOL
    log_2pie_nu = math.log(2.0 * math.pi * math.e * nu)

    def objective(theta):
        value = -lambda_star(1.0 - theta)
        if theta > 0.0:
            value += (theta / 2.0) * (log_2pie_nu - math.log(theta))
        return value

    _, value = golden_section_max(objective, 0.0, 1.0, tol)
    return max(value, objective(0.0), objective(1.0))


def save_sequence(seq, path):
    """Write the JSON interchange form; -inf is encoded as the string "-inf".

    Finite entries serialize via repr, so load_sequence(save_sequence(s))
    reproduces every float bit-exactly.
    """
    rows = []
    for row in seq.log_mu:
        rows.append(["-inf" if v == -math.inf else float(v) for v in row])
    with open(path, "w", encoding="utf-8") as fh:
        json.dump({"n_max": seq.n_max, "log_mu": rows}, fh, allow_nan=False)


def _decode_entry(v):
    if isinstance(v, str):
        if v == "-inf":
            return -math.inf
        raise ValueError(f"unrecognized entry {v!r}; only '-inf' strings allowed")
    value = float(v)
    if math.isnan(value) or value == math.inf:
        raise ValueError("entries must be finite or '-inf'")
    return value


def load_sequence(path):
    """Read and validate the JSON interchange form (see save_sequence)."""
    with open(path, "r", encoding="utf-8") as fh:
        payload = json.load(fh)
    try:
        n_max = int(payload["n_max"])
        raw_rows = payload["log_mu"]
    except (KeyError, TypeError) as exc:
        raise ValueError("expected keys 'n_max' and 'log_mu'") from exc
    if not isinstance(raw_rows, list) or len(raw_rows) != n_max:
        raise ValueError("log_mu must list one row per n = 1..n_max")
    rows = []
    for row in raw_rows:
        rows.append(np.array([_decode_entry(v) for v in row]))
    return IntrinsicVolumeSequence(n_max, tuple(rows))
