"""Command-line front end.

    casimir-rough force        [--config cfg.json] [--output breakdown.csv]
    casimir-rough synth        --seed 1 [--output curve.csv]
    casimir-rough fit          --input curve.csv [--output fit.json] [--output-curve reduced.csv]
    casimir-rough analyze-map  --input map.csv [--output report.json]
    casimir-rough calibrate    --config cal.json
    casimir-rough psi          --set eps1=10 --set eps2=10

Every command accepts ``--config`` (JSON, see :mod:`casimir_rough.config`)
and repeated ``--set key=value`` overrides; flags win over the file.

Exit codes: 0 success, 2 configuration error, 3 input-data error,
4 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import warnings
from pathlib import Path

import numpy as np

from . import data_reduction as dr
from .combined_force import breakdown_grid, theory_function
from .config import ConfigError, RunConfig, load_config
from .core_types import ForceCurve, SeparationConvention
from .electrostatics import CalibrationRecord, calibrate_force_constant, estimate_residual_potential
from .lifshitz_psi import PSI_IDEAL, PsiQuadratureOptions, psi_with_error
from .roughness import check_lateral_validity, solve_zero_level
from .roughness_map import MapParseError, load_height_map, segment_three_levels

EXIT_OK, EXIT_CONFIG, EXIT_INPUT, EXIT_NUMERIC = 0, 2, 3, 4
BREAKDOWN_HEADER = ["separation_nm", "convention", "F0_pN", "F_rough_pN", "F_cond_pN", "F_combined_pN", "regime"]
CURVE_HEADER = ["separation_nm", "force_pN"]


class InputDataError(ValueError):
    pass


def fmt(x: float) -> str:
    return f"{x:.12g}"


def _write_text(text: str, path) -> None:
    """Write atomically, or to stdout when ``path`` is None."""
    if path is None:
        sys.stdout.write(text)
        return
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def write_curve_csv(curve: ForceCurve, path) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CURVE_HEADER)
    for a, f in zip(curve.separations_nm, curve.forces_pN):
        w.writerow([fmt(a), fmt(f)])
    _write_text(buf.getvalue(), path)


def read_curve_csv(path, convention=SeparationConvention.AuPd_surfaces) -> ForceCurve:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except FileNotFoundError as exc:
        raise InputDataError(f"force-curve file not found: {path}") from exc
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or [c.strip() for c in rows[0]] != CURVE_HEADER:
        raise InputDataError(f"force-curve CSV must start with header {','.join(CURVE_HEADER)!r}")
    pairs = []
    for i, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        try:
            pairs.append((float(row[0]), float(row[1])))
        except (ValueError, IndexError) as exc:
            raise InputDataError(f"line {i}: cannot parse {row!r}") from exc
    try:
        return ForceCurve.from_pairs(pairs, convention)
    except ValueError as exc:
        raise InputDataError(str(exc)) from exc


def _dump_json(obj, path) -> None:
    _write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n", path)


def _require(opts, key):
    if opts.get(key) is None:
        raise ConfigError(f"missing required option {key!r}")
    return opts[key]


def cmd_force(cfg: RunConfig) -> int:
    opts = cfg.options
    scenario = cfg.scenario_config()
    if opts["separations_nm"] is not None:
        grid = [float(a) for a in opts["separations_nm"]]
    else:
        grid = np.linspace(opts["grid_start_nm"], opts["grid_stop_nm"], int(opts["grid_num"])).tolist()
    try:
        convention = SeparationConvention(opts["convention"])
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    rows = breakdown_grid(grid, scenario, convention)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(BREAKDOWN_HEADER)
    for b in rows:
        if b.ok:
            w.writerow([fmt(b.separation_nm), b.convention.value, fmt(b.f0), fmt(b.f_rough),
                        fmt(b.f_cond), fmt(b.f_combined), b.regime.value])
        else:
            print(f"separation {b.separation_nm:g} nm: {b.error}", file=sys.stderr)
            w.writerow([fmt(b.separation_nm), b.convention.value, "", "", "", "", "ERROR"])
    _write_text(buf.getvalue(), opts["output"])
    return EXIT_OK


def _grid(opts):
    start, step = float(opts["grid_start_nm"]), float(opts["grid_step_nm"])
    if opts["grid_num"] is not None:
        if opts["grid_stop_nm"] is None:
            return start + step * np.arange(int(opts["grid_num"]))
        return np.linspace(start, float(opts["grid_stop_nm"]), int(opts["grid_num"]))
    stop = float(_require(opts, "grid_stop_nm"))
    return np.arange(start, stop + 0.5 * step, step)


def cmd_synth(cfg: RunConfig) -> int:
    opts = cfg.options
    seed = _require(opts, "seed")
    theory = theory_function(cfg.scenario_config(), opts["theory"], opts["theory_regime"], opts["convention"])
    grid = _grid(opts)
    if grid.size == 0 or grid[0] + opts["a0_nm"] <= 0:
        raise ConfigError("synthetic grid must contain positive absolute separations")
    curve = dr.synthesize_curve(
        theory, grid,
        (opts["a0_nm"], opts["B_nN_nm"], opts["C_pN_per_nm"], opts["E_pN"]),
        noise_sigma=float(opts["noise_pN"]), seed=int(seed), convention=opts["convention"])
    write_curve_csv(curve, opts["output"])
    return EXIT_OK


def cmd_fit(cfg: RunConfig) -> int:
    opts = cfg.options
    curve = read_curve_csv(_require(opts, "input"), opts["convention"])
    theory = theory_function(cfg.scenario_config(), opts["theory"], opts["theory_regime"], opts["convention"])
    bounds = (float(opts["a0_min_nm"]), float(opts["a0_max_nm"]))
    a0_guess = 0.5 * sum(bounds)
    region1_mask = curve.separations_nm + a0_guess > float(opts["region1_min_nm"])
    region1 = ForceCurve(curve.separations_nm[region1_mask], curve.forces_pN[region1_mask], curve.convention) \
        if region1_mask.any() else None
    if region1 is None or len(region1) < 10:
        raise InputDataError("region 1 holds fewer than 10 points")
    fit = dr.fit_systematics(region1, theory, float(opts["B_nN_nm"]), bounds)
    reduced = dr.subtract_systematics(dr.to_absolute(curve, fit.a0), fit)
    rms = []
    for lo, hi in opts["rms_ranges_nm"]:
        try:
            rep = dr.rms_deviation(theory, reduced, (lo, hi))
            rms.append({"range_nm": [lo, hi], "n_points": rep.n_points, "sigma_pN": float(fmt(rep.sigma))})
        except ValueError as exc:
            rms.append({"range_nm": [lo, hi], "error": str(exc)})
    report = {
        "a0_nm": float(fmt(fit.a0)), "B_nNnm": fit.B, "C": float(fmt(fit.C)), "E": float(fmt(fit.E)),
        "chi2": float(fmt(fit.chi2)), "n_region1": len(region1), "rms": rms,
    }
    _dump_json(report, opts["output"])
    if opts["output_curve"] is not None:
        write_curve_csv(reduced, opts["output_curve"])
    return EXIT_OK


def cmd_analyze_map(cfg: RunConfig) -> int:
    opts = cfg.options
    path = _require(opts, "input")
    if not Path(path).exists():
        raise InputDataError(f"height map not found: {path}")
    hm = load_height_map(path, opts["pitch_nm"])
    thresholds = None
    if opts["t_low_nm"] is not None or opts["t_high_nm"] is not None:
        thresholds = (float(_require(opts, "t_low_nm")), float(_require(opts, "t_high_nm")))
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        levels = segment_three_levels(hm, thresholds)
    model = solve_zero_level(levels)
    verdict = check_lateral_validity(opts["feature_nm"], opts["feature_nm"], opts["a_nm"],
                                     cfg.scenario["radius_um"], opts["validity_margin"])
    report = {
        "v1": levels.v1, "v2": levels.v2, "v0": levels.v0,
        "h1": levels.h1, "h2": levels.h2, "h0": levels.h0,
        "H": model.H, "A": model.A, "beta1": model.beta1, "beta2": model.beta2,
        "validity": {"ok": verdict.ok, "sqrt_aR_nm": verdict.sqrt_aR_nm, "bound_nm": verdict.bound_nm,
                     "max_feature_nm": verdict.max_feature_nm},
        "warnings": [str(w.message) for w in caught],
    }
    report = {k: (float(fmt(v)) if isinstance(v, float) else v) for k, v in report.items()}
    _dump_json(report, opts["output"])
    return EXIT_OK


def _records(items, keys, what):
    out = []
    for i, item in enumerate(items):
        if not isinstance(item, dict) or set(item) != set(keys):
            raise ConfigError(f"{what}[{i}] must have exactly the keys {sorted(keys)}")
        out.append([float(item[k]) for k in keys])
    return out


def cmd_calibrate(cfg: RunConfig) -> int:
    opts = cfg.options
    R = cfg.scenario["radius_um"]
    report = {}
    pairs = _records(opts["pairs"], ["V1_mV", "F_plus_pN", "F_minus_pN", "a_nm"], "pairs")
    V2 = float(opts["V2_mV"]) * 1e-3
    if pairs:
        arr = np.array(pairs)
        V2 = estimate_residual_potential(np.column_stack([arr[:, 0] * 1e-3, arr[:, 1], arr[:, 2]]), arr[:, 3], R)
        report["V2_mV"] = float(fmt(V2 * 1e3))
    recs = _records(opts["records"], ["V1_mV", "a_nm", "deflection_nm"], "records")
    if recs:
        k = calibrate_force_constant([CalibrationRecord(v * 1e-3, a, d) for v, a, d in recs], V2, R)
        report["k_N_per_m"] = float(fmt(k))
    if not report:
        raise ConfigError("calibrate needs 'records' and/or 'pairs'")
    _dump_json(report, opts["output"])
    return EXIT_OK


def cmd_psi(cfg: RunConfig) -> int:
    opts = cfg.options
    qopts = PsiQuadratureOptions(float(opts["rel_tolerance"]), float(opts["x_cutoff"]), float(opts["p_cutoff"]))
    value, err = psi_with_error(float(_require(opts, "eps1")), float(_require(opts, "eps2")), qopts)
    _dump_json({"psi": float(fmt(value)), "error_estimate": float(fmt(err)),
                "psi_over_ideal": float(fmt(value / PSI_IDEAL))}, opts["output"])
    return EXIT_OK


COMMANDS = {
    "force": cmd_force,
    "synth": cmd_synth,
    "fit": cmd_fit,
    "analyze-map": cmd_analyze_map,
    "calibrate": cmd_calibrate,
    "psi": cmd_psi,
}


def _parse_set(items):
    out = {}
    for item in items or []:
        key, sep, raw = item.partition("=")
        if not sep:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        try:
            out[key] = json.loads(raw)
        except json.JSONDecodeError:
            out[key] = raw
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="casimir-rough", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="JSON run configuration")
        p.add_argument("--set", action="append", metavar="KEY=VALUE", help="override a config key")
        p.add_argument("--output", help="output path (default: stdout)")
        if name in ("fit", "analyze-map"):
            p.add_argument("--input", help="input file")
        if name == "fit":
            p.add_argument("--output-curve", help="reduced force-curve CSV")
        if name == "synth":
            p.add_argument("--seed", type=int)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        overrides = _parse_set(args.set)
        for flag in ("output", "input", "output_curve", "seed"):
            value = getattr(args, flag, None)
            if value is not None:
                overrides[flag] = value
        cfg = load_config(args.command, args.config, overrides)
        return COMMANDS[args.command](cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (InputDataError, MapParseError, FileNotFoundError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
