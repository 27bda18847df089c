"""Command-line interface.

Subcommands mirror the library surface: growth rates (v1, growth), the
bounds sweep as CSV (bounds), the cube analysis (cube-ell, bpsk), the Monte
Carlo volume oracle (mc-volume), sequence checks (subconv), and a report
path that writes CSV plus rendered figures (report).

Exit codes: 0 on success, 2 on validation errors (bad flags, bad domains,
malformed input files), 3 on numerical non-convergence.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from .bounds import (
    awgn_upper_bound,
    bounds_sweep,
    cube_capacity_bounds,
    row_in_units,
    rows_to_csv,
)
from .cube import bpsk_high_noise_capacity, ell_cube, high_noise_series
from .geometry import SigmaRhoParams
from .growth import DEFAULT_GAMMA, mc_log_volume, v, v1
from .numerics import ConvergenceError, ToleranceConfig
from .subconv import (
    check_alexandrov_fenchel,
    check_subconvolutive,
    ell_general,
    lambda_star_estimate,
    load_sequence,
)

LN2 = math.log(2.0)
_CHECK_CAP = 64  # structural checks beyond this n are O(n^2)-expensive


def _tol_from(value):
    if value is None:
        return None
    return ToleranceConfig(abs_tol=value, rel_tol=0.0, max_iterations=100_000)


def _fmt_result(result, label):
    grids = ",".join(str(g) for g in result.grid_sizes_used) or "analytic"
    line = (f"{label}={result.value:.7f} nats gamma={result.gamma:g} "
            f"grids={grids}")
    if result.sandwich is not None:
        line += f" sandwich=[{result.sandwich[0]:.7f},{result.sandwich[1]:.7f}]"
    return line


def _cmd_v1(args):
    result = v1(args.sigma, args.gamma, _tol_from(args.tol))
    print(f"sigma={args.sigma:g} " + _fmt_result(result, "v1"))
    return 0


def _cmd_growth(args):
    result = v(SigmaRhoParams(args.sigma, args.rho), args.gamma)
    print(f"sigma={args.sigma:g} rho={args.rho:g} " + _fmt_result(result, "v"))
    return 0


def _nu_grid(args):
    if args.nu_steps < 1:
        raise ValueError("--nu-steps must be >= 1")
    if args.nu_min <= 0 or args.nu_max < args.nu_min:
        raise ValueError("need 0 < --nu-min <= --nu-max")
    if args.nu_steps == 1:
        return [args.nu_min]
    if args.log_grid:
        return list(np.geomspace(args.nu_min, args.nu_max, args.nu_steps))
    return list(np.linspace(args.nu_min, args.nu_max, args.nu_steps))


def _cmd_bounds(args):
    rows = bounds_sweep(SigmaRhoParams(args.sigma, args.rho), _nu_grid(args),
                        args.gamma)
    sys.stdout.write(rows_to_csv([row_in_units(r, args.units) for r in rows]))
    return 0


def _cmd_cube_ell(args):
    result = ell_cube(args.amplitude, args.nu)
    row = cube_capacity_bounds(args.amplitude, args.nu)
    print(f"theta_star={result.theta_star:.12g}")
    print(f"ell_nats={result.ell:.12g}")
    print(f"minkowski_upper_nats={row.minkowski_upper:.12g}")
    print(f"awgn_upper_nats={row.awgn_upper:.12g}")
    print(f"epi_lower_nats={row.epi_lower:.12g}")
    print(f"active_upper={row.active_upper}")
    return 0


def _cmd_mc_volume(args):
    estimate, std_error = mc_log_volume(
        SigmaRhoParams(args.sigma, args.rho), args.n, args.samples, args.seed)
    print(f"estimate={estimate:.6f} nats std_error={std_error:.6f}")
    return 0


def _cmd_subconv(args):
    seq = load_sequence(args.input)
    n_cap = min(seq.n_max, _CHECK_CAP)
    failures = 0
    if args.check in ("all", "subc"):
        bad = sum(
            not check_subconvolutive(seq, m, n)
            for m in range(1, n_cap)
            for n in range(1, n_cap - m + 1)
        )
        failures += bad
        print(f"subconvolutive(m+n<={n_cap}): {'PASS' if bad == 0 else f'FAIL ({bad} pairs)'}")
    if args.check in ("all", "af"):
        bad = sum(not check_alexandrov_fenchel(seq, n) for n in range(2, n_cap + 1))
        failures += bad
        print(f"alexandrov_fenchel(n<={n_cap}): {'PASS' if bad == 0 else f'FAIL ({bad} rows)'}")
    if args.ell_nu is not None:
        estimate = lambda_star_estimate(seq, grid_points=65)
        value = ell_general(estimate, args.ell_nu)
        print(f"ell({args.ell_nu:g})={value:.6f} nats (rate function from n={estimate.n_used})")
    return 0


def _cmd_bpsk(args):
    capacity = bpsk_high_noise_capacity(args.amplitude, args.nu)
    alpha = args.amplitude / math.sqrt(args.nu)
    print(f"alpha={alpha:.6g}")
    print(f"capacity_quadrature_nats={capacity:.10g}")
    print(f"capacity_series_nats={high_noise_series(alpha):.10g}")
    return 0


def _cmd_report(args):
    from .report import write_report  # deferred: pulls in matplotlib

    sigmas = [float(s) for s in args.sigma_list.split(",") if s != ""]
    v1_sigmas = [float(s) for s in args.v1_sigmas.split(",") if s != ""]
    paths = write_report(
        args.out_dir, sigmas, args.rho, _nu_grid(args), args.gamma,
        args.units, v1_sigmas,
    )
    for name in ("bounds_csv", "bounds_figure", "growth_csv", "growth_figure"):
        print(f"{name}={paths[name]}")
    return 0


def _add_nu_grid_flags(p):
    p.add_argument("--nu-min", type=float, required=True)
    p.add_argument("--nu-max", type=float, required=True)
    p.add_argument("--nu-steps", type=int, required=True)
    p.add_argument("--log-grid", action="store_true",
                   help="log-spaced noise grid instead of linear")
    p.add_argument("--units", choices=("bits", "nats"), default="bits")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="sigmarho",
        description="Capacity bounds for battery-constrained additive-noise channels.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("v1", help="growth rate at unit recharge")
    p.add_argument("--sigma", type=float, required=True)
    p.add_argument("--gamma", type=float, default=DEFAULT_GAMMA)
    p.add_argument("--tol", type=float, default=None,
                   help="grid-ladder stopping tolerance (nats)")
    p.set_defaults(func=_cmd_v1)

    p = sub.add_parser("growth", help="growth rate v(sigma, rho)")
    p.add_argument("--sigma", type=float, required=True)
    p.add_argument("--rho", type=float, required=True)
    p.add_argument("--gamma", type=float, default=DEFAULT_GAMMA)
    p.set_defaults(func=_cmd_growth)

    p = sub.add_parser("bounds", help="capacity-bound sweep as CSV")
    p.add_argument("--sigma", type=float, required=True)
    p.add_argument("--rho", type=float, required=True)
    _add_nu_grid_flags(p)
    p.add_argument("--gamma", type=float, default=DEFAULT_GAMMA)
    p.set_defaults(func=_cmd_bounds)

    p = sub.add_parser("cube-ell", help="zero-battery noise functional and bounds")
    p.add_argument("--amplitude", type=float, required=True)
    p.add_argument("--nu", type=float, required=True)
    p.set_defaults(func=_cmd_cube_ell)

    p = sub.add_parser("mc-volume", help="Monte Carlo volume oracle")
    p.add_argument("--sigma", type=float, required=True)
    p.add_argument("--rho", type=float, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_mc_volume)

    p = sub.add_parser("subconv", help="sequence checks and ell from a JSON file")
    p.add_argument("--input", required=True, metavar="FILE.json")
    p.add_argument("--check", choices=("all", "af", "subc"), default="all")
    p.add_argument("--ell-nu", type=float, default=None)
    p.set_defaults(func=_cmd_subconv)

    p = sub.add_parser("bpsk", help="two-point-input capacity: quadrature vs series")
    p.add_argument("--amplitude", type=float, required=True)
    p.add_argument("--nu", type=float, required=True)
    p.set_defaults(func=_cmd_bpsk)

    p = sub.add_parser("report", help="write bound CSVs and figures to a directory")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--sigma-list", default="0,1,5,10")
    p.add_argument("--rho", type=float, default=1.0)
    _add_nu_grid_flags(p)
    p.add_argument("--gamma", type=float, default=DEFAULT_GAMMA)
    p.add_argument("--v1-sigmas", default="0,0.25,0.5,1,2,4,8")
    p.set_defaults(func=_cmd_report)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
