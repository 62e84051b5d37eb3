"""Parameter sets of the published figures, in configuration-file form."""

import copy

_KRB = {"m_light_u": 40.96182526, "m_heavy_u": 86.909180531, "p": 1.10, "scattering_length_au": 1000}

_SCAN = {
    "t_pre_tof_s": 14.9e-3,
    "t_r_s": 1e-6,
    "t_tof_s": 0.0,
    "scan_min_s": 0.0,
    "scan_max_s": 300e-6,
    "scan_steps": 301,
    "threshold": 100,
}

PRESETS = {
    # coupled center-of-mass / vibration dynamics during a 150 us kick
    "fig1": {
        "species": _KRB,
        "trap": {"omega_hz": 100},
        "sequence": {
            "t_dkc_s": 150e-6,
            "t_r_s": 1e-6,
            "R0_m": 4.06e-6,
            "Rdot0_m_per_s": 2.55e-3,
            "r0_au": 1000,
            "rdot0_m_per_s": 0.0,
        },
        "output": {"report_dt_s": 1e-7},
    },
    # condensed regimes: Thomas-Fermi and variational at three a_dd
    "fig2": {
        "species": _KRB,
        "trap": {"omega_hz": 100},
        "sequence": _SCAN,
        "regime": [
            {"type": "thomas_fermi", "n_molecules": 5e4, "a_dd_au": 500},
            {"type": "variational", "n_molecules": 5e4, "a_dd_au": 500},
            {"type": "variational", "n_molecules": 5e4, "a_dd_au": 250},
            {"type": "variational", "n_molecules": 5e4, "a_dd_au": 50},
        ],
    },
    # finite temperature at a_dd = 500 a.u.: 2 nK, 30 nK, 50 nK, 1 uK
    "fig3": {
        "species": _KRB,
        "trap": {"omega_hz": 100},
        "sequence": _SCAN,
        "regime": [
            {"type": "hydrodynamic", "xi": 0.9999, "temperature_K": 2e-9, "label": "xi0.9999_2nK"},
            {"type": "hydrodynamic", "xi": 0.8958, "temperature_K": 30e-9, "label": "xi0.8958_30nK"},
            {"type": "hydrodynamic", "xi": 0.7056, "temperature_K": 50e-9, "label": "xi0.7056_50nK"},
            {"type": "hydrodynamic", "xi": 0.0, "temperature_K": 1e-6, "label": "xi0_1uK"},
        ],
    },
}


def preset(name):
    """A fresh copy of the named preset document."""
    try:
        return copy.deepcopy(PRESETS[name])
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None
