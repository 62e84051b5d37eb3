"""Scaling-law dynamics of the molecular cloud through pre-TOF, kick and TOF.

The cloud size follows ``sigma(t) = sigma(0) lambda(t)`` with

    lambda'' = -w^2(t) lambda + w^2(0) (c3 / lambda^3 + c4 / lambda^4)

where the regime fixes ``(c3, c4)``:

==================  ===================
Thomas-Fermi        (0, 1)
Variational         (alpha, 1)
Hydrodynamic(xi)    (1 - xi, xi)
Thermal             (1, 0)
==================  ===================

Once the trap is off the right-hand side depends on ``lambda`` alone, so the
asymptotic expansion rate follows from the first integral
``lambda_dot_inf^2 = lambda_dot^2 + w^2(0) (c3 / lambda^2 + 2 c4 / (3 lambda^3))``.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Optional, Union

import numpy as np

from .constants import BOHR_RADIUS, HBAR, K_B
from .coupled import KickSchedule
from .errors import (
    DKCError,
    DomainError,
    FocusCrossingError,
    IntegrationError,
    InvalidInputError,
    NumericalConsistencyError,
)
from .numerics import find_root, integrate_ode, minimize_scalar
from .species import SpeciesPair, oscillator_length

__all__ = [
    "ThomasFermi",
    "Variational",
    "Hydrodynamic",
    "Thermal",
    "Regime",
    "ScalingState",
    "SequenceConfig",
    "SequenceResult",
    "ScanPoint",
    "KickOptimum",
    "rhs_coefficients",
    "scaling_rhs",
    "initial_size",
    "size_std_factor",
    "mean_field_xi",
    "asymptotic_expansion_energy",
    "run_sequence",
    "gain_scan",
    "optimize_kick",
]


@dataclass(frozen=True)
class ThomasFermi:
    """Pure condensate without kinetic energy.

    ``n_molecules`` and ``a_dd`` only set the initial Thomas-Fermi radius;
    the dynamics do not depend on them.
    """

    n_molecules: float = 5e4
    a_dd: float = 500 * BOHR_RADIUS

    def __post_init__(self):
        if not (self.n_molecules >= 1 and self.a_dd > 0):
            raise InvalidInputError("Thomas-Fermi regime needs N >= 1 and a_dd > 0")


@dataclass(frozen=True)
class Variational:
    """Gaussian variational condensate, with a kinetic-energy correction."""

    n_molecules: float
    a_dd: float

    def __post_init__(self):
        if not (self.n_molecules >= 1 and self.a_dd > 0):
            raise InvalidInputError("variational regime needs N >= 1 and a_dd > 0")

    def kinetic_coefficient(self, a_mol):
        return (math.pi / 2.0) ** 0.4 * (a_mol / (self.n_molecules * self.a_dd)) ** 0.8


@dataclass(frozen=True)
class Hydrodynamic:
    """Partly condensed / collisional cloud with mean-field fraction ``xi``."""

    xi: float
    temperature: Optional[float] = None

    def __post_init__(self):
        if not 0.0 <= self.xi <= 1.0:
            raise InvalidInputError(f"xi must lie in [0, 1], got {self.xi!r}")
        if self.temperature is not None and not self.temperature > 0:
            raise InvalidInputError("temperature must be positive")


@dataclass(frozen=True)
class Thermal:
    """Non-interacting cloud (Ermakov dynamics); same as ``Hydrodynamic(0)``."""

    temperature: Optional[float] = None

    xi = 0.0

    def __post_init__(self):
        if self.temperature is not None and not self.temperature > 0:
            raise InvalidInputError("temperature must be positive")


Regime = Union[ThomasFermi, Variational, Hydrodynamic, Thermal]


def _is_condensed(regime):
    return isinstance(regime, (ThomasFermi, Variational))


def rhs_coefficients(regime: Regime, a_mol=None):
    """``(c3, c4)``: weights of the ``lambda**-3`` and ``lambda**-4`` terms."""
    if isinstance(regime, ThomasFermi):
        return 0.0, 1.0
    if isinstance(regime, Variational):
        if a_mol is None:
            raise InvalidInputError("variational regime needs the oscillator length a_mol")
        return regime.kinetic_coefficient(a_mol), 1.0
    if isinstance(regime, Hydrodynamic):
        return 1.0 - regime.xi, regime.xi
    if isinstance(regime, Thermal):
        return 1.0, 0.0
    raise InvalidInputError(f"unknown regime {regime!r}")


def scaling_rhs(regime: Regime, lam, omega_sq_t, omega_sq_0, a_mol=None):
    """Second derivative of the scaling factor."""
    if not lam > 0:
        raise DomainError(f"scaling factor must be positive, got {lam!r}")
    c3, c4 = rhs_coefficients(regime, a_mol)
    inv3 = 1.0 / (lam * lam * lam)
    return -omega_sq_t * lam + omega_sq_0 * (c3 * inv3 + c4 * inv3 / lam)


def size_std_factor(regime: Regime):
    """Standard deviation per unit of the size returned by :func:`initial_size`.

    Condensed clouds are sized by their Thomas-Fermi radius, whose inverted
    parabola has standard deviation ``R_TF / sqrt(7)``.
    """
    return 1.0 / math.sqrt(7.0) if _is_condensed(regime) else 1.0


def initial_size(regime: Regime, pair: SpeciesPair, omega_trap, temperature=None):
    """In-trap cloud size: Thomas-Fermi radius or Gaussian width (m)."""
    M = pair.total_mass
    if _is_condensed(regime):
        a_mol = oscillator_length(M, omega_trap)
        return a_mol * (15.0 * regime.n_molecules * regime.a_dd / a_mol) ** 0.2
    if temperature is None:
        temperature = regime.temperature
    if temperature is None or not temperature > 0:
        raise InvalidInputError("a positive temperature is needed for the thermal cloud size")
    if regime.xi >= 1.0:
        raise InvalidInputError("thermal size formula is undefined for xi = 1; use ThomasFermi")
    return math.sqrt(K_B * temperature / M) / (omega_trap * math.sqrt(1.0 - regime.xi))


def mean_field_xi(temperature, n0, a_dd, total_mass):
    """Mean-field fraction ``E_mf / (E_mf + k_B T)``."""
    if temperature < 0 or n0 < 0 or a_dd < 0:
        raise InvalidInputError("temperature, density and a_dd must be non-negative")
    e_mf = 4.0 * math.pi * HBAR**2 * a_dd * n0 / (math.sqrt(2.0) * total_mass)
    e_th = K_B * temperature
    if e_mf + e_th == 0.0:
        raise InvalidInputError("xi is undefined when both mean-field and thermal energy vanish")
    return e_mf / (e_mf + e_th)


@dataclass(frozen=True)
class ScalingState:
    lam: float
    lam_dot: float
    t: float = 0.0


def asymptotic_expansion_energy(state: ScalingState, regime: Regime, sigma0_std, omega_sq_0,
                                total_mass, a_mol=None):
    """Expansion energy ``M sigma_dot_inf^2 / k_B`` in K for a cloud in free flight.

    ``sigma0_std`` is the initial standard deviation of the cloud.
    """
    if not state.lam > 0:
        raise DomainError("scaling factor must be positive")
    c3, c4 = rhs_coefficients(regime, a_mol)
    lam = state.lam
    radicand = state.lam_dot**2 + omega_sq_0 * (c3 / lam**2 + 2.0 * c4 / (3.0 * lam**3))
    if radicand < 0:
        raise NumericalConsistencyError(f"negative asymptotic radicand {radicand!r}")
    return total_mass * sigma0_std**2 * radicand / K_B


@dataclass(frozen=True)
class SequenceConfig:
    """Release, pre-TOF, kick and final TOF of one collimation sequence.

    ``kick.t_dkc = 0`` disables the kick. ``sigma0`` overrides the in-trap
    size computed by :func:`initial_size` (same convention: Thomas-Fermi
    radius for condensed regimes, standard deviation otherwise).
    """

    omega_trap: float
    t_pre_tof: float
    kick: KickSchedule
    t_tof: float
    regime: Regime
    sigma0: Optional[float] = None

    def __post_init__(self):
        if not (math.isfinite(self.omega_trap) and self.omega_trap > 0):
            raise InvalidInputError("omega_trap must be positive")
        if not (self.t_pre_tof >= 0 and self.t_tof >= 0):
            raise InvalidInputError("sequence durations must be non-negative")
        if self.sigma0 is not None and not self.sigma0 > 0:
            raise InvalidInputError("sigma0 must be positive")

    @classmethod
    def template(cls, omega_trap, t_pre_tof, regime, omega_kick=None, t_r=1e-6, t_tof=0.0, sigma0=None):
        """Configuration for scans: the kick carries frequency and ramp time only."""
        kick = KickSchedule(omega_trap if omega_kick is None else omega_kick, t_r, 2.0 * t_r)
        return cls(omega_trap, t_pre_tof, kick, t_tof, regime, sigma0)

    def with_kick_duration(self, t_dkc) -> "SequenceConfig":
        kick = KickSchedule.clipped(self.kick.omega0, self.kick.t_r, t_dkc)
        return replace(self, kick=kick)


@dataclass(frozen=True)
class SequenceResult:
    """Outcome of one sequence; energies in K, sizes are standard deviations in m."""

    times: np.ndarray
    sigma: np.ndarray
    E_i: float
    E_f: float
    gain: float
    sigma_at_kick: float
    final_state: ScalingState = field(repr=False)

    @property
    def sigma_trace(self):
        return self.times, self.sigma


class _Sequence:
    """Sequence pieces shared by every kick duration of one configuration."""

    def __init__(self, cfg: SequenceConfig, pair: SpeciesPair, rtol=1e-10):
        self.cfg = cfg
        self.pair = pair
        self.rtol = rtol
        self.w = cfg.omega_trap
        self.a_mol = oscillator_length(pair.total_mass, cfg.omega_trap)
        self.coeffs = rhs_coefficients(cfg.regime, self.a_mol)
        size = cfg.sigma0 if cfg.sigma0 is not None else initial_size(cfg.regime, pair, cfg.omega_trap)
        self.sigma0_std = size * size_std_factor(cfg.regime)
        # dimensionless time tau = w t, lambda' = d lambda / d tau
        self.pre_times, self.pre_lam, start = self._free(0.0, cfg.t_pre_tof, (1.0, 0.0))
        self.kick_start = start
        self.E_i = self._energy(start)

    def _rhs(self, profile):
        c3, c4 = self.coeffs

        def rhs(tau, y):
            lam, dlam = y
            if not lam > 0:
                raise DomainError("scaling factor left the positive axis")
            inv3 = 1.0 / (lam * lam * lam)
            return (dlam, -profile(tau) * lam + c3 * inv3 + c4 * inv3 / lam)
        return rhs

    def _integrate(self, t0, t1, y, profile):
        try:
            sol = integrate_ode(self._rhs(profile), self.w * t0, self.w * t1, y,
                                rtol=self.rtol, atol=1e-13)
        except IntegrationError as exc:
            raise FocusCrossingError(exc.t_last / self.w) from exc
        if not sol.y_final[0] > 0:
            raise FocusCrossingError(t1)
        return sol

    def _free(self, t0, t1, y):
        if t1 <= t0:
            return np.array([t0]), np.array([y[0]]), tuple(y)
        sol = self._integrate(t0, t1, y, lambda tau: 0.0)
        return sol.t / self.w, sol.y[:, 0], tuple(sol.y_final)

    def _energy(self, y):
        state = ScalingState(y[0], y[1] * self.w)
        return asymptotic_expansion_energy(state, self.cfg.regime, self.sigma0_std, self.w**2,
                                           self.pair.total_mass, self.a_mol)

    def kick(self, sched: KickSchedule):
        """Apply the kick after the pre-TOF; returns (times, lambdas, end state)."""
        y = self.kick_start
        t_base = self.cfg.t_pre_tof
        if sched.t_dkc == 0:
            return np.array([t_base]), np.array([y[0]]), y
        ratio = (sched.omega0 / self.w) ** 2
        tw = self.w
        profiles = {
            "on": lambda tau: ratio * (tau / tw - t_base) / sched.t_r,
            "hold": lambda tau: ratio,
            "off": lambda tau: ratio * (t_base + sched.t_dkc - tau / tw) / sched.t_r,
        }
        times, lams = [np.array([t_base])], [np.array([y[0]])]
        for t_a, t_b, kind in sched.segments():
            sol = self._integrate(t_base + t_a, t_base + t_b, y, profiles[kind])
            times.append(sol.t[1:] / self.w)
            lams.append(sol.y[1:, 0])
            y = tuple(sol.y_final)
        return np.concatenate(times), np.concatenate(lams), y

    def gain(self, sched: KickSchedule):
        _, _, y = self.kick(sched)
        E_f = self._energy(y)
        return self.E_i / E_f, E_f

    def run(self, sched: KickSchedule, with_trace=True) -> SequenceResult:
        k_times, k_lams, y = self.kick(sched)
        E_f = self._energy(y)
        t_end = self.cfg.t_pre_tof + sched.t_dkc
        if with_trace:
            f_times, f_lams, y_out = self._free(t_end, t_end + self.cfg.t_tof, y)
            times = np.concatenate([self.pre_times, k_times[1:], f_times[1:]])
            lams = np.concatenate([self.pre_lam, k_lams[1:], f_lams[1:]])
        else:
            y_out = y
            times, lams = np.array([0.0, t_end]), np.array([1.0, y[0]])
        t_final = float(times[-1])
        return SequenceResult(
            times=times,
            sigma=self.sigma0_std * lams,
            E_i=self.E_i,
            E_f=E_f,
            gain=self.E_i / E_f,
            sigma_at_kick=self.sigma0_std * self.kick_start[0],
            final_state=ScalingState(y_out[0], y_out[1] * self.w, t_final),
        )


def run_sequence(cfg: SequenceConfig, pair: SpeciesPair, rtol=1e-10, with_trace=True) -> SequenceResult:
    """Release from the trap, free expansion, kick, and final time of flight.

    ``E_i`` is the asymptotic expansion energy of the same sequence without
    the kick, ``E_f`` the one after it, and ``gain = E_i / E_f``.

    Raises
    ------
    FocusCrossingError
        If the scaling factor collapses during the sequence.
    """
    return _Sequence(cfg, pair, rtol).run(cfg.kick, with_trace)


@dataclass(frozen=True)
class ScanPoint:
    t_dkc: float
    gain: float
    E_f: float
    error: Optional[str] = None


def gain_scan(cfg: SequenceConfig, pair: SpeciesPair, t_dkc_grid, threads=1, rtol=1e-10):
    """Gain for every kick duration in ``t_dkc_grid``, in input order.

    The kick frequency and ramp time come from ``cfg.kick``; ramps are
    shortened when a kick is shorter than two ramp times. A failing point is
    reported with ``error`` set and NaN values rather than aborting the scan.
    """
    grid = [float(t) for t in t_dkc_grid]
    if any(not t >= 0 for t in grid):
        raise InvalidInputError("kick durations must be non-negative")
    seq = _Sequence(cfg, pair, rtol)

    def point(t_dkc):
        try:
            sched = KickSchedule.clipped(cfg.kick.omega0, cfg.kick.t_r, t_dkc)
            g, e_f = seq.gain(sched)
            return ScanPoint(t_dkc, g, e_f)
        except DKCError as exc:
            return ScanPoint(t_dkc, math.nan, math.nan, str(exc))

    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(point, grid))
    return [point(t) for t in grid]


@dataclass(frozen=True)
class KickOptimum:
    """Best kick duration and the interval over which the gain stays above ``threshold``.

    ``window`` is ``None`` when the threshold exceeds the maximum gain.
    """

    t_opt: float
    gain_max: float
    E_f: float
    threshold: float
    window: Optional[tuple]

    @property
    def half_widths(self):
        if self.window is None:
            return None
        return self.t_opt - self.window[0], self.window[1] - self.t_opt


def optimize_kick(cfg: SequenceConfig, pair: SpeciesPair, bracket, threshold=100.0,
                  xtol=1e-12, rtol=1e-10, max_search=200e-3):
    """Maximize the gain over the kick duration inside ``bracket`` (s).

    The threshold crossings are located by stepping away from the optimum
    until the gain drops below ``threshold`` and bisecting the last step.
    """
    lo, hi = map(float, bracket)
    if not 0 <= lo < hi:
        raise InvalidInputError("bracket must satisfy 0 <= lo < hi")
    seq = _Sequence(cfg, pair, rtol)

    def gain(t):
        sched = KickSchedule.clipped(cfg.kick.omega0, cfg.kick.t_r, t)
        return seq.gain(sched)[0]

    t_opt, neg = minimize_scalar(lambda t: -gain(t), (lo, hi), xtol=xtol)
    g_max = -neg
    _, e_f = seq.gain(KickSchedule.clipped(cfg.kick.omega0, cfg.kick.t_r, t_opt))
    if threshold > g_max:
        return KickOptimum(t_opt, g_max, e_f, threshold, None)

    def excess(t):
        return gain(t) - threshold

    step = max(hi - lo, 0.05 * t_opt)

    def crossing(direction):
        inner = t_opt
        while True:
            outer = inner + direction * step
            if outer <= 0.0:
                outer = 0.0
                if excess(0.0) >= 0:
                    return 0.0
            elif abs(outer - t_opt) > max_search:
                raise NumericalConsistencyError("gain stays above threshold over the search range")
            if excess(outer) < 0:
                pair_ = (outer, inner) if direction < 0 else (inner, outer)
                return find_root(excess, pair_, xtol=xtol)
            if outer == 0.0:
                return 0.0
            inner = outer

    return KickOptimum(t_opt, g_max, e_f, threshold, (crossing(-1.0), crossing(1.0)))
