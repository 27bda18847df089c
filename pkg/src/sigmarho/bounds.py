"""Capacity bounds assembled from the volume machinery.

Three channel-capacity bounds for the battery-constrained additive-noise
channel: an entropy-power lower bound driven by the volume growth rate v,
the classical average-power upper bound, and a volume (packing) upper bound
driven by ell(nu).  The sweep produces rows ready for CSV emission; values
are computed in nats and converted to bits only at the output boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .cube import ell_cube
from .growth import v as growth_v
from .geometry import SigmaRhoParams
from .subconv import ell_general

__all__ = [
    "BoundsRow",
    "epi_lower_bound",
    "awgn_upper_bound",
    "minkowski_upper_bound",
    "cube_capacity_bounds",
    "bounds_sweep",
    "rows_to_csv",
    "row_in_units",
    "CSV_HEADER",
]

LN2 = math.log(2.0)
_ORDERING_SLACK = 1e-9


@dataclass(frozen=True)
class BoundsRow:
    """One (sigma, rho, nu) point of the capacity-bound sweep.

    minkowski_upper is None when no volume functional is available for the
    parameters; active_upper names the smaller of the available uppers.
    """

    sigma: float
    rho: float
    nu: float
    epi_lower: float
    awgn_upper: float
    minkowski_upper: float | None
    active_upper: str
    units: str = "nats"

    def __post_init__(self):
        if self.units not in ("nats", "bits"):
            raise ValueError("units must be 'nats' or 'bits'")
        if self.epi_lower > self.awgn_upper + _ORDERING_SLACK:
            raise ValueError("lower bound exceeds the average-power upper bound")
        if (self.minkowski_upper is not None
                and self.epi_lower > self.minkowski_upper + _ORDERING_SLACK):
            raise ValueError("lower bound exceeds the volume upper bound")


def epi_lower_bound(v, nu):
    """Entropy-power lower bound 0.5 ln(1 + e^(2v) / (2 pi e nu))."""
    if nu <= 0:
        raise ValueError("nu must be positive")
    return 0.5 * math.log1p(math.exp(2.0 * v) / (2.0 * math.pi * math.e * nu))


def awgn_upper_bound(rho, nu):
    """Average-power upper bound 0.5 ln(1 + rho / nu)."""
    if rho <= 0 or nu <= 0:
        raise ValueError("rho and nu must be positive")
    return 0.5 * math.log1p(rho / nu)


def minkowski_upper_bound(ell, nu):
    """Volume upper bound ell - 0.5 ln(2 pi e nu)."""
    if nu <= 0:
        raise ValueError("nu must be positive")
    return ell - 0.5 * math.log(2.0 * math.pi * math.e * nu)


def _assemble_row(sigma, rho, nu, v_value, ell):
    lower = epi_lower_bound(v_value, nu)
    awgn = awgn_upper_bound(rho, nu)
    mink = None if ell is None else minkowski_upper_bound(ell, nu)
    if mink is not None and mink <= awgn:
        active = "minkowski"
    else:
        active = "awgn"
    return BoundsRow(
        sigma=sigma, rho=rho, nu=nu, epi_lower=lower,
        awgn_upper=awgn, minkowski_upper=mink, active_upper=active,
    )


def cube_capacity_bounds(amplitude, nu):
    """Bounds row for the zero-battery cube channel with amplitude A.

    The power budget is rho = A^2, the growth rate is ln 2A, and both upper
    bounds are available: the volume bound from ell_cube and the
    average-power bound 0.5 ln(1 + A^2/nu).
    """
    if amplitude <= 0 or nu <= 0:
        raise ValueError("amplitude and nu must be positive")
    return _assemble_row(
        sigma=0.0,
        rho=amplitude * amplitude,
        nu=nu,
        v_value=math.log(2.0 * amplitude),
        ell=ell_cube(amplitude, nu).ell,
    )


def bounds_sweep(params, nu_grid, gamma=1e-6, tol=None, lambda_star=None):
    """Bounds rows over a noise grid at fixed channel parameters.

    The growth rate v(sigma, rho) is computed once for the whole sweep.  The
    volume upper bound needs a noise functional: the cube closed form covers
    sigma = 0, and a caller-supplied rate-function estimate covers anything
    else; without one, the column is absent.
    """
    if not isinstance(params, SigmaRhoParams):
        params = SigmaRhoParams(*params)
    nu_grid = list(nu_grid)
    if not nu_grid:
        return []
    if any(nu <= 0 for nu in nu_grid):
        raise ValueError("nu grid entries must be positive")
    v_value = growth_v(params, gamma, tol).value
    amplitude = math.sqrt(params.rho)
    rows = []
    for nu in nu_grid:
        if params.sigma == 0.0:
            ell = ell_cube(amplitude, nu).ell
        elif lambda_star is not None:
            ell = ell_general(lambda_star, nu)
        else:
            ell = None
        rows.append(_assemble_row(params.sigma, params.rho, nu, v_value, ell))
    return rows


def row_in_units(row, units):
    """Convert a row's bound columns between nats and bits."""
    if units == row.units:
        return row
    if units == "bits" and row.units == "nats":
        factor = 1.0 / LN2
    elif units == "nats" and row.units == "bits":
        factor = LN2
    else:
        raise ValueError("units must be 'nats' or 'bits'")
    mink = None if row.minkowski_upper is None else row.minkowski_upper * factor
    return replace(
        row,
        epi_lower=row.epi_lower * factor,
        awgn_upper=row.awgn_upper * factor,
        minkowski_upper=mink,
        units=units,
    )


CSV_HEADER = "sigma,rho,nu,epi_lower,awgn_upper,minkowski_upper,active_upper,units"


def _fmt(value):
    return "" if value is None else format(value, ".12g")


def rows_to_csv(rows):
    """Render rows in the fixed CSV schema (header included)."""
    lines = [CSV_HEADER]
    for r in rows:
        lines.append(",".join([
            _fmt(r.sigma), _fmt(r.rho), _fmt(r.nu), _fmt(r.epi_lower),
            _fmt(r.awgn_upper), _fmt(r.minkowski_upper), r.active_upper, r.units,
        ]))
    return "\n".join(lines) + "\n"
