"""Run configuration: JSON documents with unit-suffixed keys.

A configuration has up to five blocks::

    {
      "species":  {"m_light_u": 40.96182526, "m_heavy_u": 86.909180531, "p": 1.10,
                   "scattering_length_au": 1000},
      "trap":     {"omega_hz": 100, "kick_omega_hz": 100},
      "sequence": {"t_pre_tof_s": 0.0149, "t_dkc_s": 150e-6, "t_r_s": 1e-6, "t_tof_s": 0,
                   "scan_min_s": 0, "scan_max_s": 300e-6, "scan_steps": 301, "threshold": 100,
                   "R0_m": 4.06e-6, "Rdot0_m_per_s": 2.55e-3, "r0_au": 1000, "rdot0_m_per_s": 0},
      "regime":   {"type": "thomas_fermi", "n_molecules": 5e4, "a_dd_au": 500},
      "output":   {"format": "csv", "path": "dkc_out", "report_dt_s": 1e-7}
    }

Frequencies ending in ``_hz`` are ordinary frequencies; the angular
frequency is ``2 pi`` times the value. ``regime`` may also be a list of
regime blocks, each with an optional ``label``, to run several curves.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional

from .constants import BOHR_RADIUS, MASS_K41_U, MASS_RB87_U, P_2000NM
from .coupled import CoupledState
from .errors import DKCError
from .scaling import Hydrodynamic, Regime, ThomasFermi, Thermal, Variational
from .species import SpeciesPair

__all__ = ["ConfigError", "RunConfig", "parse_config", "load_config", "make_regime", "regime_label"]

TWO_PI = 2.0 * math.pi


class ConfigError(DKCError, ValueError):
    """Invalid configuration; the message names the offending field."""


_SCHEMA = {
    "species": {"m_light_u", "m_heavy_u", "p", "scattering_length_au"},
    "trap": {"omega_hz", "kick_omega_hz"},
    "sequence": {
        "t_pre_tof_s", "t_dkc_s", "t_r_s", "t_tof_s", "scan_min_s", "scan_max_s", "scan_steps",
        "threshold", "R0_m", "Rdot0_m_per_s", "r0_au", "rdot0_m_per_s",
    },
    "regime": {"type", "label", "n_molecules", "a_dd_au", "xi", "temperature_K"},
    "output": {"format", "path", "report_dt_s"},
}

_REGIME_TYPES = ("thomas_fermi", "variational", "hydrodynamic", "thermal")


@dataclass
class RunConfig:
    pair: SpeciesPair
    omega_trap: float
    omega_kick: float
    t_pre_tof: float = 14.9e-3
    t_dkc: float = 150e-6
    t_r: float = 1e-6
    t_tof: float = 0.0
    scan: tuple = (0.0, 300e-6, 301)
    threshold: float = 100.0
    initial_state: CoupledState = field(default_factory=lambda: CoupledState(0.0, 0.0, 0.0, 0.0))
    scattering_length: float = 1000 * BOHR_RADIUS
    regimes: list = field(default_factory=list)
    output_format: str = "csv"
    output_path: Optional[str] = None
    report_dt: float = 1e-7

    def scan_grid(self):
        lo, hi, steps = self.scan
        if steps == 1:
            return [lo]
        return [lo + (hi - lo) * i / (steps - 1) for i in range(steps)]


def make_regime(kind, n_molecules=5e4, a_dd=500 * BOHR_RADIUS, xi=None, temperature=None) -> Regime:
    """Build a regime from its configuration name."""
    if kind == "thomas_fermi":
        return ThomasFermi(n_molecules, a_dd)
    if kind == "variational":
        return Variational(n_molecules, a_dd)
    if kind == "hydrodynamic":
        if xi is None:
            raise ConfigError("regime.xi: required for the hydrodynamic regime")
        return Hydrodynamic(xi, temperature)
    if kind == "thermal":
        return Thermal(temperature)
    raise ConfigError(f"regime.type: expected one of {', '.join(_REGIME_TYPES)}, got {kind!r}")


def regime_label(regime: Regime) -> str:
    if isinstance(regime, ThomasFermi):
        return "thomas_fermi"
    if isinstance(regime, Variational):
        return f"variational_add{regime.a_dd / BOHR_RADIUS:g}au"
    if isinstance(regime, Hydrodynamic):
        return f"hydrodynamic_xi{regime.xi:g}"
    return "thermal"


def _number(block, key, where, default=None, positive=False, non_negative=False):
    if key not in block:
        if default is None:
            raise ConfigError(f"{where}.{key}: missing required field")
        return default
    value = block[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise ConfigError(f"{where}.{key}: expected a finite number, got {value!r}")
    if positive and not value > 0:
        raise ConfigError(f"{where}.{key}: must be positive, got {value!r}")
    if non_negative and value < 0:
        raise ConfigError(f"{where}.{key}: must be non-negative, got {value!r}")
    return float(value)


def _block(doc, name):
    block = doc.get(name, {})
    if not isinstance(block, dict):
        raise ConfigError(f"{name}: expected an object")
    unknown = set(block) - _SCHEMA[name]
    if unknown:
        raise ConfigError(f"{name}.{sorted(unknown)[0]}: unknown field")
    return block


def _parse_regime(block, where):
    if not isinstance(block, dict):
        raise ConfigError(f"{where}: expected an object")
    unknown = set(block) - _SCHEMA["regime"]
    if unknown:
        raise ConfigError(f"{where}.{sorted(unknown)[0]}: unknown field")
    kind = block.get("type", "thomas_fermi")
    xi = block.get("xi")
    if xi is not None:
        xi = _number(block, "xi", where)
        if not 0.0 <= xi <= 1.0:
            raise ConfigError(f"{where}.xi: must lie in [0, 1], got {xi!r}")
    temperature = _number(block, "temperature_K", where, default=0.0, non_negative=True) or None
    try:
        regime = make_regime(
            kind,
            n_molecules=_number(block, "n_molecules", where, default=5e4, positive=True),
            a_dd=_number(block, "a_dd_au", where, default=500.0, positive=True) * BOHR_RADIUS,
            xi=xi,
            temperature=temperature,
        )
    except ConfigError as exc:
        raise ConfigError(str(exc).replace("regime.", f"{where}.", 1)) from None
    except DKCError as exc:
        raise ConfigError(f"{where}: {exc}") from None
    return block.get("label") or regime_label(regime), regime


def parse_config(doc) -> RunConfig:
    """Validate a configuration mapping and build a :class:`RunConfig`."""
    if not isinstance(doc, dict):
        raise ConfigError("<root>: expected a JSON object")
    unknown = set(doc) - set(_SCHEMA)
    if unknown:
        raise ConfigError(f"{sorted(unknown)[0]}: unknown block")
    sp, tr, sq, out = (_block(doc, n) for n in ("species", "trap", "sequence", "output"))

    pair = SpeciesPair.from_atomic_mass_units(
        _number(sp, "m_light_u", "species", MASS_K41_U, positive=True),
        _number(sp, "m_heavy_u", "species", MASS_RB87_U, positive=True),
        _number(sp, "p", "species", P_2000NM, positive=True),
    )
    omega_trap = TWO_PI * _number(tr, "omega_hz", "trap", 100.0, positive=True)
    omega_kick = TWO_PI * _number(tr, "kick_omega_hz", "trap", omega_trap / TWO_PI, positive=True)

    t_dkc = _number(sq, "t_dkc_s", "sequence", 150e-6, non_negative=True)
    t_r = _number(sq, "t_r_s", "sequence", 1e-6, non_negative=True)
    if 2 * t_r > t_dkc and t_dkc > 0:
        raise ConfigError("sequence.t_r_s: ramps longer than half of t_dkc_s")
    steps = sq.get("scan_steps", 301)
    if isinstance(steps, bool) or not isinstance(steps, int) or steps < 1:
        raise ConfigError(f"sequence.scan_steps: expected a positive integer, got {steps!r}")
    scan_lo = _number(sq, "scan_min_s", "sequence", 0.0, non_negative=True)
    scan_hi = _number(sq, "scan_max_s", "sequence", 300e-6, non_negative=True)
    if scan_hi < scan_lo or (steps > 1 and scan_hi == scan_lo):
        raise ConfigError("sequence.scan_max_s: must exceed scan_min_s")

    initial = CoupledState(
        _number(sq, "R0_m", "sequence", 0.0),
        _number(sq, "Rdot0_m_per_s", "sequence", 0.0),
        _number(sq, "r0_au", "sequence", 0.0) * BOHR_RADIUS,
        _number(sq, "rdot0_m_per_s", "sequence", 0.0),
    )

    raw_regimes = doc.get("regime", {"type": "thomas_fermi"})
    if isinstance(raw_regimes, list):
        if not raw_regimes:
            raise ConfigError("regime: list must not be empty")
        regimes = [_parse_regime(b, f"regime[{i}]") for i, b in enumerate(raw_regimes)]
    else:
        regimes = [_parse_regime(raw_regimes, "regime")]

    fmt = out.get("format", "csv")
    if fmt not in ("csv", "json"):
        raise ConfigError(f"output.format: expected 'csv' or 'json', got {fmt!r}")
    path = out.get("path")
    if path is not None and not isinstance(path, str):
        raise ConfigError("output.path: expected a string")

    return RunConfig(
        pair=pair,
        omega_trap=omega_trap,
        omega_kick=omega_kick,
        t_pre_tof=_number(sq, "t_pre_tof_s", "sequence", 14.9e-3, non_negative=True),
        t_dkc=t_dkc,
        t_r=t_r,
        t_tof=_number(sq, "t_tof_s", "sequence", 0.0, non_negative=True),
        scan=(scan_lo, scan_hi, steps),
        threshold=_number(sq, "threshold", "sequence", 100.0, positive=True),
        initial_state=initial,
        scattering_length=_number(sp, "scattering_length_au", "species", 1000.0, positive=True) * BOHR_RADIUS,
        regimes=regimes,
        output_format=fmt,
        output_path=path,
        report_dt=_number(out, "report_dt_s", "output", 1e-7, positive=True),
    )


def load_config(path) -> RunConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"{path}: {exc.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return parse_config(doc)
