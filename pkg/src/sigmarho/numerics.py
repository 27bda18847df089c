"""Shared numerical kernels: special functions, root finding, maximization,
adaptive quadrature, and dominant-eigenpair power iteration.

Everything here is a pure function; all tolerances are passed explicitly
through ToleranceConfig so callers control accuracy/cost trade-offs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class ConvergenceError(RuntimeError):
    """An iterative routine exhausted its iteration budget."""


class BracketError(ValueError):
    """A root/search bracket does not actually contain the target."""


@dataclass(frozen=True)
class ToleranceConfig:
    abs_tol: float = 1e-10
    rel_tol: float = 1e-12
    max_iterations: int = 100_000

    def __post_init__(self):
        if not (self.abs_tol > 0):
            raise ValueError("abs_tol must be positive")
        if self.rel_tol < 0:
            raise ValueError("rel_tol must be nonnegative")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")


DEFAULT_TOL = ToleranceConfig()

# Lanczos coefficients (g = 607/128, 15 terms); relative accuracy ~1e-14
# over the positive real axis.
_LANCZOS_G = 607.0 / 128.0
_LANCZOS_COEFFS = (
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
)
_SQRT_2PI = 2.5066282746310005024


def log_gamma(x):
    """ln Gamma(x) for x > 0 (scalar or array)."""
    arr = np.asarray(x, dtype=float)
    if np.any(arr <= 0):
        raise ValueError("log_gamma requires x > 0")
    ser = np.full_like(arr, _LANCZOS_COEFFS[0])
    for k in range(1, 15):
        ser = ser + _LANCZOS_COEFFS[k] / (arr + k)
    tmp = arr + _LANCZOS_G + 0.5
    out = (arr + 0.5) * np.log(tmp) - tmp + np.log(_SQRT_2PI * ser / arr)
    if np.isscalar(x) or arr.ndim == 0:
        return float(out)
    return out


def log_unit_ball_volume(j):
    """ln of the volume of the j-dimensional Euclidean unit ball."""
    arr = np.asarray(j)
    integral = np.issubdtype(arr.dtype, np.integer) or np.all(arr == np.floor(arr))
    if np.any(arr < 0) or not integral:
        raise ValueError("dimension must be a nonnegative integer")
    jf = np.asarray(arr, dtype=float)
    out = (jf / 2.0) * math.log(math.pi) - log_gamma(jf / 2.0 + 1.0)
    if np.isscalar(j) or arr.ndim == 0:
        return float(out)
    return out


def log_sum_exp(values):
    """ln(sum of exp(v)) with -inf entries treated as log(0)."""
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        raise ValueError("log_sum_exp of an empty collection")
    m = np.max(arr)
    if not np.isfinite(m):
        # all -inf (sum is 0), or a +inf/nan dominates; either way m is the answer
        return float(m)
    return float(m + np.log(np.sum(np.exp(arr - m))))


def bisection_root(f, lo, hi, tol=DEFAULT_TOL):
    """Root of a continuous monotone f on [lo, hi] by bisection.

    Stops when |f(mid)| <= abs_tol or the bracket width falls below abs_tol.
    Raises BracketError if f(lo) and f(hi) do not straddle zero.
    """
    if not lo < hi:
        raise ValueError("need lo < hi")
    flo = f(lo)
    fhi = f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if math.copysign(1.0, flo) == math.copysign(1.0, fhi):
        raise BracketError("f(lo) and f(hi) have the same sign")
    for _ in range(tol.max_iterations):
        mid = 0.5 * (lo + hi)
        fmid = f(mid)
        if abs(fmid) <= tol.abs_tol or (hi - lo) <= tol.abs_tol:
            return mid
        if math.copysign(1.0, fmid) == math.copysign(1.0, flo):
            lo, flo = mid, fmid
        else:
            hi = mid
    raise ConvergenceError("bisection did not converge within max_iterations")


_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0  # 1/phi
_INV_PHI2 = (3.0 - math.sqrt(5.0)) / 2.0  # 1/phi^2


def golden_section_max(f, lo, hi, tol=DEFAULT_TOL):
    """(argmax, max) of a unimodal f on [lo, hi] by golden-section search."""
    if not lo < hi:
        raise ValueError("need lo < hi")
    a, b = lo, hi
    h = b - a
    if h <= tol.abs_tol:
        mid = 0.5 * (a + b)
        return mid, f(mid)
    n_steps = int(math.ceil(math.log(tol.abs_tol / h) / math.log(_INV_PHI)))
    if n_steps > tol.max_iterations:
        raise ConvergenceError("golden-section budget too small for requested tolerance")
    c = a + _INV_PHI2 * h
    d = a + _INV_PHI * h
    fc = f(c)
    fd = f(d)
    for _ in range(n_steps):
        if fc >= fd:
            b, d, fd = d, c, fc
            h *= _INV_PHI
            c = a + _INV_PHI2 * h
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            h *= _INV_PHI
            d = a + _INV_PHI * h
            fd = f(d)
    if fc >= fd:
        return c, fc
    return d, fd


def _simpson(f, a, fa, b, fb):
    m = 0.5 * (a + b)
    fm = f(m)
    return m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb)


def adaptive_quadrature(f, a, b, tol=DEFAULT_TOL):
    """Integral of f over [a, b] by adaptive Simpson subdivision.

    Accuracy target is max(abs_tol, rel_tol * |integral|).  An infinite upper
    limit is handled by extending the interval in doubling blocks until the
    integrand drops below abs_tol/1000 of its running maximum, then doubling
    the endpoint once more as a safety check.
    """
    if math.isinf(b):
        b = _truncation_point(f, a, tol)
    if not a < b:
        raise ValueError("need a < b")
    fa, fb = f(a), f(b)
    m, fm, whole = _simpson(f, a, fa, b, fb)
    # one coarse pass to give the relative tolerance something to scale off
    eps = max(tol.abs_tol, tol.rel_tol * abs(whole))
    budget = [tol.max_iterations]

    def recurse(a, fa, m, fm, b, fb, whole, eps, depth):
        if budget[0] <= 0:
            raise ConvergenceError("adaptive quadrature subdivision budget exhausted")
        budget[0] -= 1
        lm, flm, left = _simpson(f, a, fa, m, fm)
        rm, frm, right = _simpson(f, m, fm, b, fb)
        delta = left + right - whole
        if abs(delta) <= 15.0 * eps or depth >= 60:
            return left + right + delta / 15.0
        return (recurse(a, fa, lm, flm, m, fm, left, eps / 2.0, depth + 1)
                + recurse(m, fm, rm, frm, b, fb, right, eps / 2.0, depth + 1))

    return recurse(a, fa, m, fm, b, fb, whole, eps, 0)


def _truncation_point(f, a, tol):
    """Endpoint beyond which f is negligible, for improper upper limits."""
    floor_frac = tol.abs_tol * 1e-3
    t = max(abs(a), 1.0)
    running_max = max(abs(f(a)), 1e-300)
    for _ in range(200):
        probes = np.linspace(t, 2.0 * t, 9)
        vals = np.abs([f(p) for p in probes])
        running_max = max(running_max, float(np.max(vals)))
        if float(np.max(vals)) < floor_frac * running_max:
            return 4.0 * t  # doubled once past the quiet block
        t *= 2.0
    raise ConvergenceError("integrand does not decay on the extension search")


def power_iteration(matrix, tol=DEFAULT_TOL, seed=0):
    """Dominant eigenpair of an entrywise-nonnegative square matrix.

    Starts from the all-ones vector (any positive dominant eigenvector has
    nonzero overlap with it) and stops when successive Rayleigh quotients
    differ by at most abs_tol.  Returns (eigenvalue, unit eigenvector).
    The seed is accepted for interface stability; the start is deterministic.
    """
    m = np.asarray(matrix, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("matrix must be square")
    if np.any(m < 0):
        raise ValueError("matrix must be entrywise nonnegative")
    v = np.ones(m.shape[0])
    v /= np.linalg.norm(v)
    lam_prev = math.inf
    for _ in range(tol.max_iterations):
        w = m @ v
        norm = np.linalg.norm(w)
        if norm == 0.0:
            raise ValueError("matrix annihilated the iterate; spectral radius is 0")
        v = w / norm
        lam = float(v @ (m @ v))
        if abs(lam - lam_prev) <= tol.abs_tol:
            return lam, np.maximum(v, 0.0)
        lam_prev = lam
    raise ConvergenceError("power iteration did not converge within max_iterations")
