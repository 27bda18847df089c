"""Feasibility geometry of energy-budgeted codewords.

A codeword x = (x_1, ..., x_n) is admissible for a budget (sigma, rho) when
every contiguous stretch spends at most sigma + (length * rho) energy.  The
equivalent online view is a battery of capacity sigma that recharges by rho
per symbol and pays x_i^2 to emit symbol i; admissibility means the battery
never goes negative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class SigmaRhoParams:
    """Battery capacity sigma >= 0 and per-symbol recharge rho > 0."""

    sigma: float
    rho: float

    def __post_init__(self):
        if not (math.isfinite(self.sigma) and self.sigma >= 0):
            raise ValueError("sigma must be finite and >= 0")
        if not (math.isfinite(self.rho) and self.rho > 0):
            raise ValueError("rho must be finite and > 0")


def _as_codeword(x):
    arr = np.asarray(x, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("codeword must be a nonempty 1-D sequence")
    if not np.all(np.isfinite(arr)):
        raise ValueError("codeword entries must be finite")
    return arr


def _prefix_energy(x):
    """Prefix sums of squared entries; compensated summation for long blocks."""
    e = x * x
    n = e.size
    if n <= 1000:
        out = np.empty(n + 1)
        out[0] = 0.0
        np.cumsum(e, out=out[1:])
        return out
    out = np.empty(n + 1)
    out[0] = 0.0
    total = 0.0
    comp = 0.0
    for i in range(n):  # Kahan: keeps O(1) rounding error on long sums
        y = e[i] - comp
        t = total + y
        comp = (t - total) - y
        total = t
        out[i + 1] = total
    return out


def state_trace(params, x):
    """Battery levels (length n+1) along the codeword, starting full.

    Level update: s <- min(sigma, s + rho - x_i^2).  A negative level means
    the prefix up to that point is inadmissible.
    """
    x = _as_codeword(x)
    states = np.empty(x.size + 1)
    s = params.sigma
    states[0] = s
    for i, xi in enumerate(x * x):
        s = min(params.sigma, s + params.rho - xi)
        states[i + 1] = s
    return states


def is_feasible(params, x):
    """True when the battery never dips below zero (exact comparison)."""
    return bool(np.all(state_trace(params, x) >= 0.0))


def window_check(params, x):
    """Admissibility by direct inspection of every contiguous window.

    Checks sum(x_k^2, k in (a, b]) <= sigma + (b - a) * rho for all pairs
    0 <= a < b <= n, using prefix sums.  Agrees with is_feasible; kept as an
    independent O(n^2) route.
    """
    x = _as_codeword(x)
    p = _prefix_energy(x)
    idx = np.arange(p.size, dtype=float)
    spent = p[None, :] - p[:, None]           # window (a, b] energy at [a, b]
    allowed = params.sigma + (idx[None, :] - idx[:, None]) * params.rho
    a, b = np.triu_indices(p.size, k=1)
    return bool(np.all(spent[a, b] <= allowed[a, b]))


def burstiness(x):
    """Smallest sigma making the codeword admissible at rho = 1.

    Equals the largest window excess max over windows of
    (energy - length); single zero symbols give -1, and a codeword of
    k-spaced unit-energy spikes approaches k - 1.
    """
    x = _as_codeword(x)
    p = _prefix_energy(x)
    drift = p - np.arange(p.size)             # energy minus allowance, rho = 1
    floor = np.minimum.accumulate(drift)[:-1]  # best start for each window end
    return float(np.max(drift[1:] - floor))


def pad_and_concat(params, blocks):
    """Join admissible blocks with ceil(sigma / rho) zero symbols after each.

    The zeros let the battery refill completely, so the join point cannot
    create a new violation and the result is admissible.
    """
    if not blocks:
        raise ValueError("need at least one block")
    k = int(math.ceil(params.sigma / params.rho))
    pad = np.zeros(k)
    parts = []
    for block in blocks:
        block = _as_codeword(block)
        if not is_feasible(params, block):
            raise ValueError("inadmissible block passed to pad_and_concat")
        parts.append(block)
        parts.append(pad)
    return np.concatenate(parts)


def feasible_rows(params, rows):
    """Row-wise admissibility for a (m, n) batch; vectorized battery recursion."""
    e = np.asarray(rows, dtype=float)
    if e.ndim != 2:
        raise ValueError("rows must be 2-D")
    e = e * e
    m = e.shape[0]
    s = np.full(m, params.sigma)
    ok = np.ones(m, dtype=bool)
    for i in range(e.shape[1]):
        s = np.minimum(params.sigma, s + params.rho - e[:, i])
        ok &= s >= 0.0
    return ok


_WALK_BYTES_TARGET = 1 << 22  # ~4M floats per shard keeps memory bounded


def _shard_sizes(samples, n):
    size = min(65536, max(1, _WALK_BYTES_TARGET // max(n, 1)))
    sizes = []
    left = samples
    while left > 0:
        take = min(size, left)
        sizes.append(take)
        left -= take
    return sizes


def burstiness_walk_probability(n, alpha, samples, seed=0):
    """Monte Carlo estimate of P(burstiness <= alpha * sqrt(n), sum x_i^2 <= n)
    for x of n i.i.d. standard normal entries.

    Sampling is sharded: shard s uses its own Philox stream keyed by
    (seed, s), so results are reproducible for a given seed and can be
    distributed across workers without changing the estimate.
    """
    if n < 1 or samples < 1:
        raise ValueError("n and samples must be >= 1")
    if seed < 0:
        raise ValueError("seed must be nonnegative")
    if alpha < -1.0:
        # burstiness is always >= -1, and alpha*sqrt(n) <= alpha < -1
        return 0.0
    threshold = alpha * math.sqrt(n)
    hits = 0
    for shard, m in enumerate(_shard_sizes(samples, n)):
        rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, shard])))
        x = rng.standard_normal((m, n))
        drift = np.cumsum(x * x, axis=1) - np.arange(1, n + 1)
        zero = np.zeros((m, 1))
        full = np.hstack([zero, drift])
        floor = np.minimum.accumulate(full, axis=1)
        burst = np.max(full[:, 1:] - floor[:, :-1], axis=1)
        hits += int(np.count_nonzero((burst <= threshold) & (drift[:, -1] <= 0.0)))
    return hits / samples
