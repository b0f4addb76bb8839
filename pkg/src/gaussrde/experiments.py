"""Config-driven Monte Carlo experiments: sample, lift, solve, covariance,
verdicts, density estimation, and artifact emission.

A single INI-style config file describes the driver model, the vector
fields, the evaluation protocol and the output paths; `run_experiment`
executes the full pipeline deterministically (per-sample RNG streams are
keyed by (seed, sample_index), so results do not depend on scheduling) and
emits one CSV row per (sample, evaluation time) plus a JSON summary.  The
KDE and Kolmogorov-Smirnov helpers quantify how the empirical law of Y_t
compares with a known reference when one exists.
"""

from __future__ import annotations

import configparser
import hashlib
import json
import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from . import __version__
from .fields import (VectorFieldSystem, constant_fields, ellipticity_rank,
                     linear_fields, polynomial_fields, rotation_fields)
from .gaussian import (CovarianceModel, brownian_model, bridge_model,
                       cameron_martin_basis, fbm_model, kernel_eval,
                       nondegeneracy_check, sample_paths, zero_model)
from .lift import lift_piecewise_linear
from .malliavin import (DEGENERACY_TAU, malliavin_matrix_2d,
                        malliavin_matrix_parseval, spectrum)
from .rde import solve_flow_jacobian
from .young import GridFunction1D, TimeGrid, rho_variation_2d, uniform_grid

log = logging.getLogger("gaussrde")

MIN_HURST = 1.0 / 3.0


class ConfigError(ValueError):
    """Invalid or inconsistent experiment configuration."""


class RunError(RuntimeError):
    """The Monte Carlo run itself failed (too many aborted samples)."""


@dataclass(frozen=True)
class ExperimentConfig:
    kernel: str
    kernel_params: dict
    horizon: float
    n: int
    d: int
    family: str
    field_params: dict
    e: int
    y0: np.ndarray
    times: tuple
    count: int
    seed: int
    allow_degenerate: bool
    threads: int
    reference: tuple | None
    csv_path: str | None
    json_path: str | None
    tau: float
    raw: dict = field(repr=False, default_factory=dict)


def _floats(text: str) -> np.ndarray:
    return np.array([float(tok) for tok in text.replace(",", " ").split()])


def _rows(text: str) -> np.ndarray:
    return np.array([_floats(part) for part in text.split(";") if part.strip()])


def load_config(path: str) -> ExperimentConfig:
    """Parse and validate an experiment config file.

    The format is INI: flat key = value entries grouped under one level of
    [section] headers.  See the repository README for the full grammar.
    """
    parser = configparser.ConfigParser(inline_comment_prefixes=("#",))
    read = parser.read(path)
    if not read:
        raise ConfigError(f"cannot read config file {path!r}")
    try:
        return _config_from_parser(parser)
    except (configparser.Error, KeyError, ValueError, IndexError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"invalid config {path!r}: {exc}") from exc


def _config_from_parser(parser: configparser.ConfigParser) -> ExperimentConfig:
    if not parser.has_section("model"):
        raise ConfigError("config needs a [model] section")
    if not parser.has_section("fields"):
        raise ConfigError("config needs a [fields] section")
    model_sec = parser["model"]
    fields_sec = parser["fields"]
    exp_sec = parser["experiment"] if parser.has_section("experiment") else {}
    out_sec = parser["output"] if parser.has_section("output") else {}
    thr_sec = parser["thresholds"] if parser.has_section("thresholds") else {}

    kernel = model_sec.get("kernel", "").strip().lower()
    if kernel not in ("brownian", "fbm", "bridge", "zero"):
        raise ConfigError(f"unknown kernel {kernel!r}")
    horizon = float(model_sec.get("horizon", "1.0"))
    if horizon <= 0:
        raise ConfigError("horizon must be positive")
    kernel_params = {}
    if kernel == "fbm":
        if "hurst" not in model_sec:
            raise ConfigError("fbm kernel needs a hurst key")
        kernel_params["hurst"] = float(model_sec["hurst"])
    if kernel == "bridge":
        kernel_params["pin"] = float(model_sec.get("pin", str(horizon)))
    n = int(model_sec.get("n", "64"))
    if n < 8:
        raise ConfigError(f"grid size n must be >= 8, got {n}")
    d = int(model_sec.get("d", "1"))
    if d < 1:
        raise ConfigError("driver dimension d must be >= 1")

    family = fields_sec.get("family", "").strip().lower()
    if family not in ("linear", "rotation", "polynomial", "constant"):
        raise ConfigError(f"unknown vector-field family {family!r}")
    e = int(fields_sec.get("e", "1"))
    if e < 1:
        raise ConfigError("state dimension e must be >= 1")
    y0 = _floats(fields_sec.get("y0", " ".join(["0"] * e)))
    if y0.size != e:
        raise ConfigError(f"y0 needs {e} components, got {y0.size}")
    field_params = {k: v for k, v in fields_sec.items()
                    if k not in ("family", "e", "y0")}

    times_text = exp_sec.get("times", str(horizon))
    times = tuple(float(t) for t in times_text.replace(",", " ").split())
    if not times or any(t <= 0 or t > horizon + 1e-12 for t in times):
        raise ConfigError("evaluation times must lie in (0, horizon]")
    count = int(exp_sec.get("count", "1"))
    if count < 1:
        raise ConfigError("count must be >= 1")
    seed = int(exp_sec.get("seed", "0"))
    allow_degenerate = str(exp_sec.get("allow_degenerate", "false")).strip().lower() in (
        "1", "true", "yes", "on")
    threads = int(exp_sec.get("threads", "1"))
    if threads < 1:
        raise ConfigError("threads must be >= 1")
    reference = _parse_reference(exp_sec.get("reference", "none"))

    csv_path = out_sec.get("csv") if out_sec else None
    json_path = out_sec.get("json") if out_sec else None
    tau = float(thr_sec.get("tau", str(DEGENERACY_TAU))) if thr_sec else DEGENERACY_TAU
    if tau <= 0:
        raise ConfigError("tau must be positive")

    raw = {sec: dict(parser[sec]) for sec in parser.sections()}
    cfg = ExperimentConfig(
        kernel=kernel, kernel_params=kernel_params, horizon=horizon, n=n, d=d,
        family=family, field_params=field_params, e=e, y0=y0, times=times,
        count=count, seed=seed, allow_degenerate=allow_degenerate,
        threads=threads, reference=reference, csv_path=csv_path,
        json_path=json_path, tau=tau, raw=raw,
    )
    # Fail fast on unresolvable names/parameters.
    build_model(cfg)
    build_fields(cfg)
    return cfg


def _parse_reference(text: str) -> tuple | None:
    toks = text.replace(",", " ").split()
    if not toks or toks[0].lower() == "none":
        return None
    name = toks[0].lower()
    if name not in ("normal", "lognormal"):
        raise ConfigError(f"unknown reference distribution {name!r}")
    if len(toks) != 3:
        raise ConfigError(f"reference {name} needs two parameters (mu sigma)")
    mu, sigma = float(toks[1]), float(toks[2])
    if sigma <= 0:
        raise ConfigError("reference sigma must be positive")
    return (name, mu, sigma)


def build_model(config: ExperimentConfig) -> CovarianceModel:
    """Covariance model shared by all driver components."""
    if config.kernel == "brownian":
        return brownian_model()
    if config.kernel == "fbm":
        hurst = config.kernel_params["hurst"]
        if not 0 < hurst < 1:
            raise ConfigError(f"hurst must lie in (0, 1), got {hurst}")
        if hurst <= MIN_HURST:
            raise ConfigError(
                f"fbm with hurst = {hurst} is outside the supported regime: "
                f"the covariance has rho-variation index {1 / (2 * hurst):.3g} "
                f">= 3/2, which breaks the Cameron-Martin translation theory; "
                f"hurst must exceed 1/3"
            )
        return fbm_model(hurst)
    if config.kernel == "bridge":
        return bridge_model(config.kernel_params["pin"])
    return zero_model()


def build_fields(config: ExperimentConfig) -> VectorFieldSystem:
    """Vector-field system named by the config's [fields] section."""
    p = config.field_params
    d, e = config.d, config.e
    if config.family == "rotation":
        if e != 2:
            raise ConfigError("rotation family is planar; set e = 2")
        omegas = _floats(p.get("omegas", " ".join(["1"] * d)))
        if omegas.size != d:
            raise ConfigError(f"omegas needs {d} entries, got {omegas.size}")
        shifts = _rows(p["shifts"]) if "shifts" in p else None
        return rotation_fields(omegas, shifts)
    if config.family == "constant":
        if "vectors" not in p:
            raise ConfigError("constant family needs a vectors key")
        c = _rows(p["vectors"])
        if c.shape != (d, e):
            raise ConfigError(f"vectors must give {d} rows of {e} entries")
        return constant_fields(c)
    if config.family == "linear":
        if "matrices" not in p:
            raise ConfigError("linear family needs a matrices key")
        rows = _rows(p["matrices"])
        if rows.shape != (d, e * e):
            raise ConfigError(
                f"matrices must give {d} rows of {e * e} entries (row-major)")
        A = rows.reshape(d, e, e)
        b = None
        if "offsets" in p:
            b = _rows(p["offsets"])
            if b.shape != (d, e):
                raise ConfigError(f"offsets must give {d} rows of {e} entries")
        drift = None
        if "drift_matrix" in p or "drift_offset" in p:
            A0 = (_floats(p["drift_matrix"]).reshape(e, e)
                  if "drift_matrix" in p else np.zeros((e, e)))
            b0 = _floats(p["drift_offset"]) if "drift_offset" in p else np.zeros(e)
            if b0.size != e:
                raise ConfigError(f"drift_offset needs {e} entries")
            drift = (A0, b0)
        return linear_fields(A, b, drift)
    # polynomial
    c0 = np.zeros((d, e))
    c1 = np.zeros((d, e, e))
    c2 = np.zeros((d, e, e, e))
    c3 = np.zeros((d, e, e, e, e))
    if "coeffs" not in p:
        raise ConfigError("polynomial family needs a coeffs key")
    for term in p["coeffs"].replace("\n", ";").split(";"):
        term = term.strip()
        if not term:
            continue
        if "=" not in term:
            raise ConfigError(f"bad polynomial term {term!r} (need indices = value)")
        left, _, right = term.partition("=")
        idx = [int(tok) for tok in left.split()]
        value = float(right)
        if not 2 <= len(idx) <= 5:
            raise ConfigError(
                f"polynomial term {term!r}: need field, output and 0-3 state "
                f"indices")
        fi, a = idx[0] - 1, idx[1] - 1
        states = [s - 1 for s in idx[2:]]
        if not (0 <= fi < d and 0 <= a < e and all(0 <= s < e for s in states)):
            raise ConfigError(f"polynomial term {term!r}: index out of range "
                              f"(indices are 1-based)")
        target = (c0, c1, c2, c3)[len(states)]
        target[(fi, a, *states)] += value
    radius = float(p.get("radius", "5.0"))
    return polynomial_fields(c0, c1, c2, c3, radius=radius)


def variation_index(model: CovarianceModel) -> float:
    """Roughness scale p in (2 rho, 3) used for driver p-variation records."""
    rho = model.rho
    return 2.0 * rho + min(0.5, 0.5 * (3.0 - 2.0 * rho))


# ---------------------------------------------------------------------------
# Condition checks
# ---------------------------------------------------------------------------


def check_conditions(config: ExperimentConfig) -> dict:
    """Verify the standing hypotheses on a config before running it.

    Ellipticity: the driving fields span the state space at y0 (rank of
    [V_1(y0) ... V_d(y0)] equals e).  Gaussian non-degeneracy: at every
    evaluation time, no nonzero weighting of grid increments has zero
    variance.  The rho report compares the analytic variation index of the
    kernel with a grid estimate and warns when the index leaves the regime
    the translation theory needs (rho < 3/2).
    """
    model = build_model(config)
    vf = build_fields(config)
    grid = uniform_grid(config.horizon, config.n)
    rank = ellipticity_rank(vf, config.y0)
    per_time = {}
    for t in config.times:
        it = grid.index_of(t)
        sub = TimeGrid(grid.points[:it + 1])
        per_time[t] = nondegeneracy_check(model, sub)
    gaussian_nondeg = not any(rep["degenerate"] for rep in per_time.values())
    estimate = rho_variation_2d(kernel_eval(model, grid), model.rho,
                                mode="diagonal-refinement")
    warning = None
    if model.rho >= 1.5:
        warning = (f"analytic rho = {model.rho:.3g} >= 3/2: outside the "
                   f"Cameron-Martin translation regime")
    return {
        "ellipticity": bool(rank == config.e),
        "spanning_rank": int(rank),
        "gaussian_nondeg": bool(gaussian_nondeg),
        "per_time": per_time,
        "rho_report": {
            "analytic_rho": float(model.rho),
            "grid_estimate": float(estimate.value),
            "is_lower_bound": bool(estimate.is_lower_bound),
            "warning": warning,
        },
    }


# ---------------------------------------------------------------------------
# Density estimation
# ---------------------------------------------------------------------------


def silverman_bandwidth(samples: np.ndarray) -> np.ndarray:
    """Per-coordinate Silverman rule h_j = sigma_j (4 / ((e+2) n))^(1/(e+4))."""
    samples = np.atleast_2d(np.asarray(samples, dtype=float))
    if samples.shape[0] == 1:
        samples = samples.T
    n, e = samples.shape
    sig = np.std(samples, axis=0, ddof=1)
    h = sig * (4.0 / ((e + 2) * n)) ** (1.0 / (e + 4))
    floor = 1e-9 * np.maximum(1.0, np.abs(np.mean(samples, axis=0)))
    return np.maximum(h, floor)


def kde_density(samples: np.ndarray, query_grid) -> np.ndarray:
    """Gaussian-kernel density estimate on a query grid.

    State dimension 1: `query_grid` is an array of points, the result has
    the same shape.  Dimension 2: `query_grid` is a pair of axis arrays and
    the result is the density on their product grid.  Higher dimensions are
    rejected; report raw samples instead.
    """
    samples = np.atleast_2d(np.asarray(samples, dtype=float))
    if samples.shape[0] == 1:
        samples = samples.T
    n, e = samples.shape
    if e > 2:
        raise ValueError(f"density estimation supports e <= 2, got e = {e}")
    if n < 100:
        raise ValueError(f"need at least 100 samples for a density, got {n}")
    h = silverman_bandwidth(samples)
    if e == 1:
        q = np.asarray(query_grid, dtype=float)
        z = (q[:, None] - samples[None, :, 0]) / h[0]
        return np.exp(-0.5 * z ** 2).sum(axis=1) / (n * h[0] * math.sqrt(2 * math.pi))
    qx = np.asarray(query_grid[0], dtype=float)
    qy = np.asarray(query_grid[1], dtype=float)
    out = np.zeros((qx.size, qy.size))
    norm = n * h[0] * h[1] * 2 * math.pi
    for i, x in enumerate(qx):
        zx = (x - samples[:, 0]) / h[0]
        zy = (qy[:, None] - samples[None, :, 1]) / h[1]
        out[i] = (np.exp(-0.5 * zx ** 2)[None, :] * np.exp(-0.5 * zy ** 2)).sum(axis=1) / norm
    return out


def _default_query_grid(samples: np.ndarray, h: np.ndarray, points: int = 512):
    lo = samples.min(axis=0) - 5.0 * h
    hi = samples.max(axis=0) + 5.0 * h
    if samples.shape[1] == 1:
        return np.linspace(lo[0], hi[0], points)
    side = max(64, int(math.sqrt(points)) * 4)
    return (np.linspace(lo[0], hi[0], side), np.linspace(lo[1], hi[1], side))


def _kde_mass(query_grid, values: np.ndarray) -> float:
    if isinstance(query_grid, tuple):
        inner = np.trapezoid(values, query_grid[1], axis=1)
        return float(np.trapezoid(inner, query_grid[0]))
    return float(np.trapezoid(values, query_grid))


def _reference_comparison(reference, samples1d, query_grid, kde_values):
    name, mu, sigma = reference
    if name == "lognormal":
        if np.any(samples1d <= 0):
            raise RunError("lognormal reference requires positive samples")
        transformed = np.log(samples1d)
        pdf = stats.lognorm.pdf(query_grid, s=sigma, scale=math.exp(mu))
    else:
        transformed = samples1d
        pdf = stats.norm.pdf(query_grid, loc=mu, scale=sigma)
    ks = stats.kstest(transformed, "norm", args=(mu, sigma)).statistic
    sup = float(np.max(np.abs(kde_values - pdf)))
    return float(ks), sup


@dataclass
class DensityReport:
    """Aggregated outcome of one Monte Carlo run, built at the last
    evaluation time."""

    time: float
    samples: np.ndarray
    fraction_degenerate: float
    lambda_min_quantiles: dict
    aborted: int
    count: int
    query_grid: object = None
    kde_values: np.ndarray | None = None
    bandwidth: np.ndarray | None = None
    kde_mass: float | None = None
    reference_name: str | None = None
    ks_distance: float | None = None
    sup_distance: float | None = None
    oracle_max_residual: float | None = None
    oracle_checked: int = 0


# ---------------------------------------------------------------------------
# The run itself
# ---------------------------------------------------------------------------


def _evaluate_sample(k, values, grid, model, vf, y0, time_indices, pvar_p, tau):
    """Full pipeline for one sample; returns per-time records."""
    X = lift_piecewise_linear(GridFunction1D(grid, values))
    flow = solve_flow_jacobian(X, vf, y0, pvar_index=pvar_p)
    mats = [malliavin_matrix_2d(flow, vf, model, grid.points[it])
            for it in time_indices]
    scale = max(m.trace / vf.e for m in mats)
    records = []
    for it, mat in zip(time_indices, mats):
        spec = spectrum(mat, tau=tau, scale=scale)
        records.append({
            "t": float(grid.points[it]),
            "Y": flow.Y[it].copy(),
            "lambda_min": spec.lambda_min,
            "det": spec.det,
            "verdict": spec.verdict,
            "pvar_driver": flow.pvar,
            "log_norm_J": float(np.log(np.linalg.norm(flow.J[it], ord=2))),
        })
    return flow, mats, records


def run_experiment(config: ExperimentConfig, out_dir: str | None = None) -> DensityReport:
    """Run the sampled-path pipeline described by the config.

    Unless the config allows a degenerate scenario, the driver model must
    pass the Gaussian non-degeneracy probe at every evaluation time before
    any sampling happens.  Individual sample failures are logged and
    skipped; more than 1% of them fails the whole run.  Artifacts are
    written when the config names them (rebased into `out_dir` if given).
    """
    model = build_model(config)
    vf = build_fields(config)
    grid = uniform_grid(config.horizon, config.n)
    try:
        time_indices = [grid.index_of(t) for t in config.times]
    except ValueError as exc:
        raise ConfigError(f"evaluation times must be grid points: {exc}") from exc

    if not config.allow_degenerate:
        for t, it in zip(config.times, time_indices):
            sub = TimeGrid(grid.points[:it + 1])
            rep = nondegeneracy_check(model, sub)
            if rep["degenerate"]:
                raise ConfigError(
                    f"driver model {model.name!r} is degenerate on [0, {t}]; "
                    f"set allow_degenerate = true to study this on purpose"
                )

    pvar_p = variation_index(model)
    models = [model] * config.d
    batch = sample_paths(models, grid, config.count, config.seed)

    n_check = min(10, config.count)
    basis = cameron_martin_basis(model, grid) if n_check else None

    def work(k):
        try:
            flow, mats, records = _evaluate_sample(
                k, batch.values[k], grid, model, vf, config.y0,
                time_indices, pvar_p, config.tau)
        except Exception as exc:
            log.warning("sample %d aborted: %s", k, exc)
            return k, None, f"{type(exc).__name__}: {exc}"
        residual = None
        if k < n_check:
            residual = 0.0
            for it, mat in zip(time_indices, mats):
                other = malliavin_matrix_parseval(flow, vf, basis,
                                                 grid.points[it])
                denom = max(np.linalg.norm(mat.sigma), np.linalg.norm(other.sigma))
                gap = np.linalg.norm(mat.sigma - other.sigma)
                residual = max(residual, gap / denom if denom > 0 else gap)
        return k, (records, residual), None

    results = [None] * config.count
    failures = []
    if config.threads > 1:
        with ThreadPoolExecutor(max_workers=config.threads) as pool:
            for k, payload, err in pool.map(work, range(config.count)):
                results[k] = payload
                if err is not None:
                    failures.append((k, err))
    else:
        for k in range(config.count):
            _, payload, err = work(k)
            results[k] = payload
            if err is not None:
                failures.append((k, err))

    aborted = len(failures)
    if aborted > 0.01 * config.count:
        raise RunError(
            f"{aborted} of {config.count} samples aborted (> 1%); first "
            f"failure: sample {failures[0][0]}: {failures[0][1]}"
        )

    rows = []
    final_Y = []
    lam_values = []
    degenerate_rows = 0
    total_rows = 0
    oracle_res = []
    for k in range(config.count):
        if results[k] is None:
            continue
        records, residual = results[k]
        if residual is not None:
            oracle_res.append(residual)
        for rec in records:
            rows.append((k, rec))
            lam_values.append(rec["lambda_min"])
            total_rows += 1
            if rec["verdict"] == "degenerate":
                degenerate_rows += 1
        final_Y.append(records[-1]["Y"])
    final_Y = np.array(final_Y)
    lam_values = np.array(lam_values)
    frac_deg = degenerate_rows / total_rows if total_rows else float("nan")
    quantiles = {"q05": float(np.quantile(lam_values, 0.05)),
                 "q50": float(np.quantile(lam_values, 0.50)),
                 "q95": float(np.quantile(lam_values, 0.95))} if total_rows else {}

    report = DensityReport(
        time=float(config.times[-1]),
        samples=final_Y,
        fraction_degenerate=frac_deg,
        lambda_min_quantiles=quantiles,
        aborted=aborted,
        count=config.count,
        oracle_max_residual=max(oracle_res) if oracle_res else None,
        oracle_checked=len(oracle_res),
    )

    if config.e <= 2 and final_Y.shape[0] >= 100:
        h = silverman_bandwidth(final_Y)
        query = _default_query_grid(final_Y, h)
        values = kde_density(final_Y, query)
        report.query_grid = query
        report.kde_values = values
        report.bandwidth = h
        report.kde_mass = _kde_mass(query, values)
        if config.reference is not None and config.e == 1:
            report.reference_name = config.reference[0]
            report.ks_distance, report.sup_distance = _reference_comparison(
                config.reference, final_Y[:, 0], query, values)

    _write_artifacts(config, report, rows, out_dir)
    return report


# ---------------------------------------------------------------------------
# Artifacts
# ---------------------------------------------------------------------------


def config_hash(config: ExperimentConfig) -> str:
    canon = json.dumps(config.raw, sort_keys=True)
    return hashlib.sha256(canon.encode()).hexdigest()


def _fmt(x: float) -> str:
    return "%.17g" % float(x)


def write_rows_csv(path: str, rows, e: int) -> None:
    ycols = ",".join(f"y_{i + 1}" for i in range(e))
    lines = [f"sample_index,t,{ycols},lambda_min,det,verdict,pvar_driver,log_norm_J"]
    for k, rec in rows:
        ys = ",".join(_fmt(v) for v in rec["Y"])
        pv = _fmt(rec["pvar_driver"]) if rec["pvar_driver"] is not None else ""
        lines.append(
            f"{k},{_fmt(rec['t'])},{ys},{_fmt(rec['lambda_min'])},"
            f"{_fmt(rec['det'])},{rec['verdict']},{pv},{_fmt(rec['log_norm_J'])}"
        )
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def _write_artifacts(config, report, rows, out_dir):
    csv_path, json_path = config.csv_path, config.json_path
    if out_dir is not None:
        os.makedirs(out_dir, exist_ok=True)
        csv_path = os.path.join(out_dir, os.path.basename(csv_path or "samples.csv"))
        json_path = os.path.join(out_dir, os.path.basename(json_path or "summary.json"))
    if csv_path:
        write_rows_csv(csv_path, rows, config.e)
    if json_path:
        summary = {
            "version": __version__,
            "config_hash": config_hash(config),
            "seed": config.seed,
            "config": config.raw,
            "count": config.count,
            "aborted": report.aborted,
            "fraction_degenerate": report.fraction_degenerate,
            "lambda_min_quantiles": report.lambda_min_quantiles,
            "oracle_check": {
                "checked": report.oracle_checked,
                "max_rel_residual": report.oracle_max_residual,
            },
            "kde": None if report.kde_mass is None else {
                "bandwidth": [float(b) for b in report.bandwidth],
                "mass": report.kde_mass,
            },
            "reference": None if report.reference_name is None else {
                "name": report.reference_name,
                "ks_distance": report.ks_distance,
                "sup_distance": report.sup_distance,
            },
        }
        with open(json_path, "w") as fh:
            json.dump(summary, fh, indent=2, sort_keys=True)
            fh.write("\n")
