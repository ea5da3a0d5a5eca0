"""Scenario runner: ``psrnoise run CONFIG [--output-dir DIR] [--seed N]``.

Exit status: 0 success, 2 config parse error, 3 invariant violation,
4 numerical-domain or I/O error.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import gaussian as gs
from . import magnetometer as mag
from . import montecarlo as mc
from . import polarimeter as pol
from . import psr
from .config import ConfigError, InvariantError, Scenario, ScenarioConfig, load
from .errors import DomainError

COLUMNS = {
    "phase_scan": ["phi_prp_rad", "signal_db", "noise_db"],
    "density_sweep": ["density_cm3", "shear_g", "sq_db", "antisq_db"],
    "sensitivity": ["density_cm3", "bmin_measured", "bmin_shot", "ratio", "intensity_noise_db"],
    "fit": ["sq_target_db", "antisq_target_db", "shear_g", "seed_np", "sq_db", "antisq_db"],
    "mc_variances": ["state", "phi_rad", "analytic", "empirical", "z_score"],
    "mc_spectrum": ["freq_hz", "power_db"],
}


def format_value(v) -> str:
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    v = float(v)
    if np.isnan(v):
        return "nan"
    if np.isinf(v):
        return "inf" if v > 0 else "-inf"
    return format(v, ".9g")


def emit_csv(columns, rows, path) -> Path:
    """Write ``rows`` under header ``columns``: LF endings, 9 significant digits."""
    path = Path(path)
    rows = [list(r) for r in rows]
    if any(len(r) != len(columns) for r in rows):
        raise ValueError("rows must have exactly one value per column")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        writer.writerows([format_value(v) for v in r] for r in rows)
    return path


def scenario_state(cfg: ScenarioConfig):
    """State under test plus any fit it came from."""
    if cfg.state_source == "fitted":
        fit = psr.fit_to_targets(cfg.targets, cfg.physical.transmission, cfg.physical.channel_order)
        params = replace(
            cfg.physical, density=1.0, power=1.0, coupling=fit.g, thermal_seed=(0.0, fit.n_p)
        )
        return psr.output_state(params), fit
    return psr.output_state(cfg.physical), None


def _extrema_scalars(state) -> dict:
    ext = gs.extremal_quadratures(state)
    return {
        "v_min_db": gs.to_db(ext.v_min),
        "v_max_db": gs.to_db(ext.v_max),
        "phi_prp_min_noise_rad": pol.analyzed_angle(ext.phi_min),
    }


def run_phase_scan(cfg: ScenarioConfig):
    state, fit = scenario_state(cfg)
    theta = mag.rotation_angle(cfg.magnet.response(cfg.physical.density), cfg.magnet.b_amp)
    recs = pol.phase_scan(state, theta, cfg.phis, cfg.detection)
    rows = [(r.phi_prp, pol.signal_db(r.mean_signal), r.noise_db) for r in recs]
    scalars = _extrema_scalars(state)
    phi_sq = scalars["phi_prp_min_noise_rad"]
    scalars["noise_db_plate_0"] = gs.to_db(
        pol.analyzed_variance(state, 0.0, cfg.detection.detector_efficiency))
    scalars["noise_db_plate_quarter"] = gs.to_db(
        pol.analyzed_variance(state, np.pi / 2, cfg.detection.detector_efficiency))
    scalars["signal_drop_db_at_min_noise"] = -20 * np.log10(abs(pol.signal_projection(phi_sq)))
    if fit is not None:
        scalars.update(fitted_g=fit.g, fitted_np=fit.n_p)
    scalars["rotation_rad"] = theta
    return {"phase_scan": rows}, scalars


def run_density_sweep(cfg: ScenarioConfig):
    rows = [
        (n, psr.shear_strength(replace(cfg.physical, density=n)), sq, anti)
        for n, sq, anti in psr.density_sweep(cfg.physical, cfg.densities)
    ]
    return {"density_sweep": rows}, {
        "sq_db_last": rows[-1][2],
        "antisq_db_last": rows[-1][3],
    }


def run_sensitivity_sweep(cfg: ScenarioConfig):
    reports = mag.density_sensitivity_sweep(
        cfg.densities, cfg.magnet.response(0.0), cfg.detection, cfg.physical
    )
    rows = [
        (r.density, r.b_min_measured, r.b_min_shot_limited, r.ratio, r.intensity_noise_db)
        for r in reports
    ]
    return {"sensitivity": rows}, {"ratio_first": rows[0][3], "ratio_last": rows[-1][3]}


def run_fit_targets(cfg: ScenarioConfig):
    fit = psr.fit_to_targets(cfg.targets, cfg.physical.transmission, cfg.physical.channel_order)
    row = (cfg.targets.sq_db, cfg.targets.antisq_db, fit.g, fit.n_p, fit.sq_db, fit.antisq_db)
    return {"fit": [row]}, {
        "fitted_g": fit.g, "fitted_np": fit.n_p,
        "fitted_sq_db": fit.sq_db, "fitted_antisq_db": fit.antisq_db,
    }


def run_monte_carlo(cfg: ScenarioConfig):
    m = cfg.montecarlo
    var_rows, worst = mc.validate_variances(cfg.rng, m.n_states, m.n_angles, m.count)
    state, _ = scenario_state(cfg)
    resp = cfg.magnet.response(cfg.physical.density)
    ts = mc.synthesize_polarimeter_trace(
        state, resp, cfg.magnet.b_amp, cfg.magnet.f_mod, cfg.detection,
        m.duration, m.sample_rate, replace(cfg.rng, seed=(cfg.rng.seed + 1) % 2**64),
    )
    freqs, power = mc.periodogram(ts, m.rbw, m.segments)
    floor = mc.noise_floor(freqs, power, cfg.magnet.f_mod)
    analytic = pol.analyzed_variance(state, cfg.detection.phi_prp, cfg.detection.detector_efficiency)
    with np.errstate(divide="ignore"):
        spectrum = list(zip(freqs, 10 * np.log10(power)))
    return {"mc_variances": var_rows, "mc_spectrum": spectrum}, {
        "max_abs_z": worst,
        "floor_db": gs.to_db(floor),
        "analytic_noise_db": gs.to_db(analytic),
    }


RUNNERS = {
    Scenario.PHASE_SCAN: run_phase_scan,
    Scenario.DENSITY_SWEEP: run_density_sweep,
    Scenario.SENSITIVITY_SWEEP: run_sensitivity_sweep,
    Scenario.FIT_TARGETS: run_fit_targets,
    Scenario.MONTE_CARLO_VALIDATE: run_monte_carlo,
}


def execute(cfg: ScenarioConfig) -> Path:
    """Run the scenario and write its CSVs and ``summary.txt``; returns the summary path."""
    tables, scalars = RUNNERS[cfg.scenario](cfg)
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    manifest = []
    for name, rows in tables.items():
        path = emit_csv(COLUMNS[name], rows, out / f"{name}.csv")
        manifest.append((path.name, hashlib.sha256(path.read_bytes()).hexdigest()))
    lines = [
        f"scenario: {cfg.scenario.value}",
        f"input_hash: {cfg.digest()}",
        f"rng_algorithm: {cfg.rng.algorithm_id}",
        f"seed: {cfg.rng.seed}",
    ]
    lines += [f"{k}: {format_value(v)}" for k, v in scalars.items()]
    lines += [f"file: {name} sha256={digest}" for name, digest in manifest]
    summary = out / "summary.txt"
    summary.write_text("\n".join(lines) + "\n")
    return summary


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="psrnoise", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="execute a scenario config")
    run.add_argument("config", type=Path)
    run.add_argument("--output-dir", type=Path, default=None)
    run.add_argument("--seed", type=int, default=None, help="overrides [rng] seed")
    args = parser.parse_args(argv)

    try:
        cfg = load(args.config)
        if args.seed is not None:
            cfg = replace(cfg, rng=mc.RngSpec(args.seed, cfg.rng.algorithm_id))
        if args.output_dir is not None:
            cfg = replace(cfg, output_dir=args.output_dir)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (InvariantError, ValueError) as exc:
        print(f"invariant violated: {exc}", file=sys.stderr)
        return 3
    try:
        summary = execute(cfg)
    except (DomainError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    print(summary.read_text(), end="")
    return 0


if __name__ == "__main__":
    sys.exit(main())
