"""Command-line front end.

Subcommands mirror the pipeline stages so intermediate artifacts can be
produced and inspected standalone: sample, lift, solve, malliavin, density,
check, run.  Exit codes: 0 success, 2 configuration or condition-check
failure, 3 runtime failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys

import numpy as np

from .experiments import (ConfigError, RunError, build_fields, build_model,
                          check_conditions, load_config, run_experiment,
                          variation_index)
from .gaussian import cameron_martin_basis, sample_paths
from .lift import lift_piecewise_linear, rough_path_to_csv
from .malliavin import malliavin_matrix_2d, malliavin_matrix_parseval, spectrum
from .rde import ExplosionError, solve_flow_jacobian
from .young import uniform_grid


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gaussrde",
        description="Gaussian rough-path experiments: sampling, lifting, "
                    "solving, covariance diagnostics, densities.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text, needs_out=False, indexed=False):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="experiment config file")
        if needs_out:
            p.add_argument("--out", required=True, help="output file")
        if indexed:
            p.add_argument("--index", type=int, default=0,
                           help="sample index (default 0)")
        return p

    run_p = sub.add_parser("run", help="full Monte Carlo pipeline with artifacts")
    run_p.add_argument("--config", required=True)
    run_p.add_argument("--out", help="directory for output artifacts")
    run_p.add_argument("--threads", type=int, help="worker threads override")

    add("check", "verify ellipticity / Gaussian non-degeneracy / roughness index")
    add("sample", "write one sampled driver path as CSV", needs_out=True,
        indexed=True)
    add("lift", "write the step-2 lift of one sampled path as CSV",
        needs_out=True, indexed=True)
    add("solve", "write the solution path for one sample as CSV",
        needs_out=True, indexed=True)
    mal_p = add("malliavin", "print covariance spectrum for one sample",
                indexed=True)
    mal_p.add_argument("--time", type=float, help="evaluation time "
                       "(default: last configured time)")
    mal_p.add_argument("--out", help="optional JSON output file")
    den_p = add("density", "run the pipeline and export the density estimate")
    den_p.add_argument("--out", help="CSV file for the density table")
    return parser


def _prepare(args):
    config = load_config(args.config)
    model = build_model(config)
    vf = build_fields(config)
    grid = uniform_grid(config.horizon, config.n)
    return config, model, vf, grid


def _single_path(config, model, grid, index):
    if index < 0:
        raise ConfigError("--index must be >= 0")
    batch = sample_paths([model] * config.d, grid, index + 1, config.seed)
    return batch.path(index)


def _cmd_run(args) -> int:
    config = load_config(args.config)
    if args.threads is not None:
        if args.threads < 1:
            raise ConfigError("--threads must be >= 1")
        config = dataclasses.replace(config, threads=args.threads)
    report = run_experiment(config, out_dir=args.out)
    print(f"samples: {report.count}  aborted: {report.aborted}")
    print(f"fraction degenerate: {report.fraction_degenerate:.4f}")
    if report.oracle_checked:
        print(f"route cross-check on {report.oracle_checked} samples: "
              f"max relative residual {report.oracle_max_residual:.3e}")
    if report.kde_mass is not None:
        print(f"kde mass: {report.kde_mass:.6f}")
    if report.ks_distance is not None:
        print(f"KS distance to {report.reference_name} reference: "
              f"{report.ks_distance:.4f}")
    return 0


def _cmd_check(args) -> int:
    config = load_config(args.config)
    result = check_conditions(config)
    print(f"ellipticity: {result['ellipticity']} "
          f"(rank {result['spanning_rank']} of {config.e})")
    print(f"gaussian non-degeneracy: {result['gaussian_nondeg']}")
    rho = result["rho_report"]
    bound = " (lower bound)" if rho["is_lower_bound"] else ""
    print(f"rho: analytic {rho['analytic_rho']:.4g}, grid estimate "
          f"{rho['grid_estimate']:.4g}{bound}")
    if rho["warning"]:
        print(f"warning: {rho['warning']}")
    ok = result["ellipticity"] and result["gaussian_nondeg"]
    if ok or config.allow_degenerate:
        return 0
    print("condition check failed", file=sys.stderr)
    return 2


def _cmd_sample(args) -> int:
    config, model, _, grid = _prepare(args)
    path = _single_path(config, model, grid, args.index)
    cols = ["t"] + [f"x_{i + 1}" for i in range(config.d)]
    table = np.column_stack([grid.points, path.values])
    np.savetxt(args.out, table, delimiter=",", header=",".join(cols),
               comments="", fmt="%.17g")
    print(f"wrote driver sample {args.index} to {args.out}")
    return 0


def _cmd_lift(args) -> int:
    config, model, _, grid = _prepare(args)
    path = _single_path(config, model, grid, args.index)
    rough_path_to_csv(lift_piecewise_linear(path), args.out)
    print(f"wrote lift of sample {args.index} to {args.out}")
    return 0


def _cmd_solve(args) -> int:
    config, model, vf, grid = _prepare(args)
    path = _single_path(config, model, grid, args.index)
    flow = solve_flow_jacobian(lift_piecewise_linear(path), vf, config.y0,
                               pvar_index=variation_index(model))
    cols = ["t"] + [f"y_{i + 1}" for i in range(config.e)]
    table = np.column_stack([grid.points, flow.Y])
    np.savetxt(args.out, table, delimiter=",", header=",".join(cols),
               comments="", fmt="%.17g")
    print(f"wrote solution of sample {args.index} to {args.out} "
          f"(driver p-variation {flow.pvar:.4f})")
    return 0


def _cmd_malliavin(args) -> int:
    config, model, vf, grid = _prepare(args)
    t = args.time if args.time is not None else config.times[-1]
    path = _single_path(config, model, grid, args.index)
    flow = solve_flow_jacobian(lift_piecewise_linear(path), vf, config.y0)
    mat = malliavin_matrix_2d(flow, vf, model, t)
    basis = cameron_martin_basis(model, grid)
    other = malliavin_matrix_parseval(flow, vf, basis, t)
    denom = max(np.linalg.norm(mat.sigma), np.linalg.norm(other.sigma), 1e-300)
    residual = float(np.linalg.norm(mat.sigma - other.sigma) / denom)
    spec = spectrum(mat, tau=config.tau)
    print(f"sigma at t = {t} (2d-young route):")
    for row in mat.sigma:
        print("  " + "  ".join(f"{v: .6e}" for v in row))
    print(f"eigenvalues: {np.array2string(spec.eigenvalues, precision=6)}")
    print(f"lambda_min: {spec.lambda_min:.6e}  det: {spec.det:.6e}")
    print(f"verdict: {spec.verdict} (tau = {spec.tau:g})")
    print(f"route cross-check residual: {residual:.3e}")
    if args.out:
        payload = {
            "t": float(t),
            "sigma": mat.sigma.tolist(),
            "eigenvalues": spec.eigenvalues.tolist(),
            "lambda_min": spec.lambda_min,
            "det": spec.det,
            "verdict": spec.verdict,
            "tau": spec.tau,
            "route_residual": residual,
        }
        with open(args.out, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
        print(f"wrote spectrum report to {args.out}")
    return 0


def _cmd_density(args) -> int:
    config = load_config(args.config)
    report = run_experiment(config)
    if report.kde_values is None:
        print("no density estimate available (state dimension > 2 or too few "
              "samples); reporting raw samples")
        if args.out:
            np.savetxt(args.out, report.samples, delimiter=",",
                       header=",".join(f"y_{i + 1}" for i in range(
                           report.samples.shape[1])),
                       comments="", fmt="%.17g")
            print(f"wrote raw samples to {args.out}")
        return 0
    print(f"density at t = {report.time}: bandwidth "
          f"{np.array2string(report.bandwidth, precision=4)}, "
          f"mass {report.kde_mass:.6f}")
    if report.ks_distance is not None:
        print(f"KS distance to {report.reference_name} reference: "
              f"{report.ks_distance:.4f}")
    if args.out:
        if isinstance(report.query_grid, tuple):
            qx, qy = report.query_grid
            rows = [(x, y, report.kde_values[i, j])
                    for i, x in enumerate(qx) for j, y in enumerate(qy)]
            np.savetxt(args.out, rows, delimiter=",",
                       header="y_1,y_2,density", comments="", fmt="%.17g")
        else:
            np.savetxt(args.out,
                       np.column_stack([report.query_grid, report.kde_values]),
                       delimiter=",", header="y_1,density", comments="",
                       fmt="%.17g")
        print(f"wrote density table to {args.out}")
    return 0


_HANDLERS = {
    "run": _cmd_run,
    "check": _cmd_check,
    "sample": _cmd_sample,
    "lift": _cmd_lift,
    "solve": _cmd_solve,
    "malliavin": _cmd_malliavin,
    "density": _cmd_density,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (RunError, ExplosionError) as exc:
        print(f"run failed: {exc}", file=sys.stderr)
        return 3
    except Exception as exc:  # pragma: no cover - last-resort mapping
        print(f"unexpected failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
