"""Command-line front end: ``dkc <coupled|gain-scan|optimize|species-info>``.

Exit codes: 0 on success, 2 for configuration errors, 3 for numerical failures.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys

import numpy as np

from . import __version__
from .config import ConfigError, load_config, parse_config
from .constants import K_B
from .coupled import KickSchedule, mode_coefficients, propagate_analytic, propagate_uncoupled
from .errors import DKCError, InvalidInputError
from .presets import PRESETS, preset
from .scaling import SequenceConfig, gain_scan, optimize_kick, run_sequence
from .species import (
    binding_energy,
    derived_frequencies,
    magic_polarizability_ratio,
    oscillator_length,
    thin_lens_duration,
)

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3

COUPLED_HEADER = ("t_s", "R_m", "Rdot_m_per_s", "r_m", "rdot_m_per_s", "ER_K", "Er_K", "Ec_K", "ER_uncoupled_K")
SCAN_HEADER = ("t_dkc_s", "gain", "E_f_K")


def fmt(x):
    """Scientific notation with 12 significant digits, locale independent."""
    return format(float(x), ".11e")


def _rounded(x):
    """The float a CSV reader gets back from :func:`fmt`; NaN becomes None."""
    x = float(x)
    return float(fmt(x)) if math.isfinite(x) else None


def _round_tree(obj):
    if isinstance(obj, dict):
        return {k: _round_tree(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_tree(v) for v in obj]
    if isinstance(obj, (float, np.floating)):
        return _rounded(obj)
    return obj


def _dump_json(obj, fh):
    json.dump(_round_tree(obj), fh, indent=2, sort_keys=False, allow_nan=False)
    fh.write("\n")


def _write_table(path_stem, header, rows, fmt_name):
    if fmt_name == "csv":
        path = path_stem + ".csv"
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                writer.writerow([fmt(v) if isinstance(v, float) else v for v in row])
    else:
        path = path_stem + ".json"
        columns = {name: [row[i] for row in rows] for i, name in enumerate(header)}
        with open(path, "w", encoding="utf-8") as fh:
            _dump_json(columns, fh)
    return path


def _merge(base, override):
    out = dict(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = {**out[key], **value}
        else:
            out[key] = value
    return out


def _load(args):
    doc = preset(args.reproduce) if args.reproduce else {}
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                user = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"{args.config}: {exc.strerror}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{args.config}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
        if not isinstance(user, dict):
            raise ConfigError(f"{args.config}: expected a JSON object")
        doc = _merge(doc, user)
    cfg = parse_config(doc)
    if args.format:
        cfg.output_format = args.format
    if args.out:
        cfg.output_path = args.out
    if cfg.output_path is None:
        cfg.output_path = "dkc_out"
    return cfg


def cmd_coupled(cfg, args):
    """Coupled and uncoupled propagation through one kick; trajectory table plus summary."""
    sched = KickSchedule(cfg.omega_kick, cfg.t_r, cfg.t_dkc)
    s0 = cfg.initial_state
    coupled = propagate_analytic(s0, sched, cfg.pair, report_dt=cfg.report_dt)
    uncoupled = propagate_uncoupled(s0, sched, cfg.pair, times=coupled.trajectory.times)
    main = uncoupled if args.uncoupled_only else coupled
    traj, en = main.trajectory, main.energies

    rows = [
        tuple(float(v) for v in (
            traj.times[i], traj.R[i], traj.R_dot[i], traj.r[i], traj.r_dot[i],
            en.T_R[i], en.T_r[i], en.T_c[i], uncoupled.energies.T_R[i],
        ))
        for i in range(len(traj))
    ]
    os.makedirs(cfg.output_path, exist_ok=True)
    table = _write_table(os.path.join(cfg.output_path, "coupled"), COUPLED_HEADER, rows, cfg.output_format)

    cen = coupled.energies
    hold = (cen.times >= sched.hold_start) & (cen.times <= sched.hold_end)
    i_ramp = int(np.argmin(np.abs(cen.times - sched.t_r)))
    final_c, final_u = float(cen.T_R[-1]), float(uncoupled.energies.T_R[-1])
    total = cen.total[hold]
    e_b = binding_energy(cfg.pair.reduced_mass, cfg.scattering_length)
    delta_er = float(cen.T_r[-1] - cen.T_r[0])
    summary = {
        "command": "coupled",
        "trajectory": "uncoupled" if args.uncoupled_only else "coupled",
        "final_ER_K": final_c,
        "final_ER_uncoupled_K": final_u,
        "relative_difference_ER": abs(final_c - final_u) / final_u if final_u else 0.0,
        "ER_after_switch_on_K": float(cen.T_R[i_ramp]),
        "final_Er_K": float(cen.T_r[-1]),
        "delta_Er_K": delta_er,
        "Ec_hold_min_K": float(cen.T_c[hold].min()),
        "Ec_hold_max_K": float(cen.T_c[hold].max()),
        "hold_energy_relative_drift": float((total.max() - total.min()) / abs(total.mean()))
        if total.size and total.mean() else 0.0,
        "binding_energy_temperature_K": 2.0 * e_b / K_B,
        "binding_to_vibrational_gain_ratio": 2.0 * e_b / K_B / delta_er if delta_er > 0 else None,
        "table": os.path.basename(table),
    }
    with open(os.path.join(cfg.output_path, "coupled_summary.json"), "w", encoding="utf-8") as fh:
        _dump_json(summary, fh)
    return summary


def _template(cfg, regime):
    return SequenceConfig.template(cfg.omega_trap, cfg.t_pre_tof, regime, omega_kick=cfg.omega_kick,
                                   t_r=cfg.t_r, t_tof=cfg.t_tof)


def _optimum(cfg, regime, points):
    good = [p for p in points if p.error is None]
    if not good:
        return {"error": "every scan point failed"}
    i = max(range(len(good)), key=lambda k: good[k].gain)
    lo, hi = good[max(i - 1, 0)].t_dkc, good[min(i + 1, len(good) - 1)].t_dkc
    if hi <= lo:
        p = good[i]
        return {"t_opt_s": p.t_dkc, "G_max": p.gain, "E_f_min_K": p.E_f, "threshold": cfg.threshold,
                "window_s": None, "half_widths_s": None}
    opt = optimize_kick(_template(cfg, regime), cfg.pair, (lo, hi), threshold=cfg.threshold)
    return {
        "t_opt_s": opt.t_opt,
        "G_max": opt.gain_max,
        "E_f_min_K": opt.E_f,
        "threshold": opt.threshold,
        "window_s": list(opt.window) if opt.window else None,
        "half_widths_s": list(opt.half_widths) if opt.window else None,
    }


def cmd_gain_scan(cfg, args, write=True):
    """Gain against kick duration for every configured regime."""
    curves = {}
    if write:
        os.makedirs(cfg.output_path, exist_ok=True)
    for label, regime in cfg.regimes:
        points = gain_scan(_template(cfg, regime), cfg.pair, cfg.scan_grid(), threads=args.threads)
        entry = _optimum(cfg, regime, points)
        free = run_sequence(_template(cfg, regime).with_kick_duration(0.0), cfg.pair, with_trace=False)
        entry["E_i_K"] = free.E_i
        entry["sigma_at_kick_m"] = free.sigma_at_kick
        entry["failed_points"] = sum(p.error is not None for p in points)
        if write:
            failed = entry["failed_points"] > 0
            header = SCAN_HEADER + (("error",) if failed else ())
            rows = []
            for p in points:
                row = (p.t_dkc, p.gain, p.E_f)
                if failed:
                    row = (p.t_dkc, 0.0, 0.0, 1) if p.error else row + (0,)
                rows.append(row)
            stem = os.path.join(cfg.output_path, f"gain_scan_{label}")
            entry["table"] = os.path.basename(_write_table(stem, header, rows, cfg.output_format))
        curves[label] = entry
    summary = {"command": "gain-scan" if write else "optimize", "curves": curves}
    if write:
        with open(os.path.join(cfg.output_path, "gain_scan_summary.json"), "w", encoding="utf-8") as fh:
            _dump_json(summary, fh)
    return summary


def cmd_optimize(cfg, args):
    return cmd_gain_scan(cfg, args, write=False)


def cmd_species_info(cfg, args):
    """Trap-frequency algebra and derived scales for the configured species and trap."""
    f = derived_frequencies(cfg.pair, cfg.omega_trap)
    alpha_plus, alpha_minus = mode_coefficients(cfg.pair)
    e_b = binding_energy(cfg.pair.reduced_mass, cfg.scattering_length)
    return {
        "command": "species-info",
        "omega_mol": f.omega_mol,
        "omega_r": f.omega_r,
        "omega_c_sq": f.omega_c_sq,
        "omega_light": f.omega_light,
        "omega_heavy": f.omega_heavy,
        "alpha_plus": alpha_plus,
        "alpha_minus": alpha_minus,
        "mass_ratio": cfg.pair.mass_ratio,
        "a_mol_m": oscillator_length(cfg.pair.total_mass, cfg.omega_trap),
        "p_opt": magic_polarizability_ratio(cfg.pair),
        "thin_lens_s": thin_lens_duration(cfg.omega_trap, cfg.t_pre_tof) if cfg.t_pre_tof > 0 else None,
        "binding_energy_J": e_b,
        "binding_energy_K": e_b / K_B,
        "binding_energy_temperature_K": 2.0 * e_b / K_B,
    }


COMMANDS = {
    "coupled": cmd_coupled,
    "gain-scan": cmd_gain_scan,
    "optimize": cmd_optimize,
    "species-info": cmd_species_info,
}


def build_parser():
    parser = argparse.ArgumentParser(prog="dkc", description="Delta-kick collimation of Feshbach molecules")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--config", metavar="FILE", help="JSON configuration file")
    parser.add_argument("--reproduce", choices=sorted(PRESETS), help="use a published parameter set")
    parser.add_argument("--out", metavar="DIR", help="output directory (default: dkc_out)")
    parser.add_argument("--format", choices=("csv", "json"), help="table format")
    parser.add_argument("--threads", type=int, default=1, metavar="N", help="worker threads for scans")
    parser.add_argument("--uncoupled-only", action="store_true",
                        help="coupled: tabulate the uncoupled trajectory")
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    if args.threads < 1:
        print("dkc: --threads must be at least 1", file=sys.stderr)
        return EXIT_CONFIG
    try:
        cfg = _load(args)
    except (ConfigError, DKCError) as exc:
        print(f"dkc: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        summary = COMMANDS[args.command](cfg, args)
    except InvalidInputError as exc:
        print(f"dkc: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DKCError as exc:
        print(f"dkc: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    _dump_json(summary, sys.stdout)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
