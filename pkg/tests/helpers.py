"""Shared fixtures for the coupled-dynamics tests."""

import math

import numpy as np

from dkc.constants import BOHR_RADIUS
from dkc.coupled import CoupledState, KickSchedule
from dkc.species import SpeciesPair


def fig1_setup():
    pair = SpeciesPair.krb()
    sched = KickSchedule(2 * math.pi * 100, 1e-6, 150e-6)
    s0 = CoupledState(4.06e-6, 2.55e-3, 1000 * BOHR_RADIUS, 0.0)
    return pair, sched, s0


def random_scenario(rng):
    """A physically plausible coupled kick drawn from ``rng``."""
    pair = SpeciesPair.from_atomic_mass_units(rng.uniform(6, 90), rng.uniform(6, 180), rng.uniform(0.3, 3.0))
    w = 2 * math.pi * rng.uniform(20, 500)
    t_r = rng.choice([0.0, rng.uniform(0.1e-6, 5e-6)])
    t_dkc = rng.uniform(max(2 * t_r, 1e-6), 400e-6)
    s0 = CoupledState(
        rng.normal(0, 5e-6), rng.normal(0, 3e-3),
        rng.uniform(100, 3000) * BOHR_RADIUS, rng.normal(0, 1e-4),
    )
    return pair, KickSchedule(w, t_r, t_dkc), s0


def channel_error(a, b, omega):
    """Largest error of ``b`` against ``a`` relative to each channel's phase-space amplitude.

    ``a`` and ``b`` are ``(R, R_dot, r, r_dot)``; a channel's amplitude is
    ``max(|x|, |v| / omega)`` so positions and velocities share one scale.
    """
    a, b = np.asarray(a, float), np.asarray(b, float)
    worst = 0.0
    for i in (0, 2):
        amp = max(abs(a[i]), abs(a[i + 1]) / omega)
        worst = max(worst, abs(b[i] - a[i]) / amp, abs(b[i + 1] - a[i + 1]) / (omega * amp))
    return worst
