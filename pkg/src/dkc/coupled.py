"""Coupled center-of-mass / vibrational motion of a dimer during a delta kick.

The maximal-coupling (collinear) model reads

    R'' + w_mol^2(t) R = (mu / M) w_c^2(t) r
    r'' + w_r^2(t)   r = w_c^2(t) R

with every squared frequency proportional to the ramped ``w_mol^2(t)``. The
normal modes ``z_+ = R - r gamma / (1 + gamma)`` and ``z_- = R + r / (1 + gamma)``
decouple exactly, each oscillating with ``w_{+-}^2(t) = alpha_{+-} w_mol^2(t)``.
Under a linear ramp each mode is a combination of Airy functions, and of
sines and cosines during the hold; :func:`propagate_analytic` stitches those
pieces together, :func:`propagate_numeric` integrates the same equations
directly and serves as its oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .constants import K_B
from .errors import InvalidInputError, NumericalConsistencyError
from .numerics import airy, find_root, integrate_ode, quad
from .species import SpeciesPair, derived_frequencies

__all__ = [
    "KickSchedule",
    "CoupledState",
    "NormalModeState",
    "Trajectory",
    "EnergyTrace",
    "Propagation",
    "ramp_omega_sq",
    "mode_coefficients",
    "eigenfrequencies_sq",
    "to_normal_modes",
    "from_normal_modes",
    "energies",
    "propagate_analytic",
    "propagate_numeric",
    "propagate_uncoupled",
    "classical_period",
]

# largest tolerated |pi W - 1| for the Airy Wronskian at a matching point
_WRONSKIAN_TOL = 1e-9


@dataclass(frozen=True)
class KickSchedule:
    """Linear switch-on, constant hold, linear switch-off of the trap.

    ``t_r = 0`` is a square pulse. ``t_dkc = 0`` means no kick at all.
    """

    omega0: float
    t_r: float
    t_dkc: float

    def __post_init__(self):
        if not (math.isfinite(self.omega0) and self.omega0 > 0):
            raise InvalidInputError(f"omega0 must be positive, got {self.omega0!r}")
        if not (self.t_r >= 0 and math.isfinite(self.t_dkc) and 2 * self.t_r <= self.t_dkc):
            raise InvalidInputError(
                f"schedule requires 0 <= 2 t_r <= t_dkc, got t_r={self.t_r!r}, t_dkc={self.t_dkc!r}"
            )

    @classmethod
    def clipped(cls, omega0, t_r, t_dkc):
        """Schedule whose ramps are shortened to fit inside a short kick."""
        return cls(omega0, min(t_r, 0.5 * t_dkc), t_dkc)

    @property
    def hold_start(self):
        return self.t_r

    @property
    def hold_end(self):
        return self.t_dkc - self.t_r

    def omega_sq(self, t):
        return ramp_omega_sq(t, self)

    def segments(self):
        """``(t_start, t_end, kind)`` for the non-empty phases, kind in on/hold/off."""
        out = []
        if self.t_r > 0:
            out.append((0.0, self.t_r, "on"))
        if self.hold_end > self.hold_start:
            out.append((self.hold_start, self.hold_end, "hold"))
        if self.t_r > 0:
            out.append((self.hold_end, self.t_dkc, "off"))
        return out


def ramp_omega_sq(t, sched: KickSchedule):
    """Squared trap frequency of the ramp at time ``t`` in ``[0, t_dkc]``."""
    if not (0.0 <= t <= sched.t_dkc):
        raise InvalidInputError(f"t={t!r} outside the kick window [0, {sched.t_dkc!r}]")
    w2 = sched.omega0 * sched.omega0
    if t < sched.t_r:
        return w2 * t / sched.t_r
    if t <= sched.t_dkc - sched.t_r:
        return w2
    return w2 * (sched.t_dkc - t) / sched.t_r


@dataclass(frozen=True)
class CoupledState:
    R: float
    R_dot: float
    r: float
    r_dot: float
    t: float = 0.0

    def as_array(self):
        return np.array([self.R, self.R_dot, self.r, self.r_dot])

    @classmethod
    def from_array(cls, values, t=0.0):
        R, R_dot, r, r_dot = (float(v) for v in values)
        return cls(R, R_dot, r, r_dot, t)


@dataclass(frozen=True)
class NormalModeState:
    z_plus: float
    z_plus_dot: float
    z_minus: float
    z_minus_dot: float


def to_normal_modes(s: CoupledState, gamma) -> NormalModeState:
    if not gamma > 0:
        raise InvalidInputError("mass ratio must be positive")
    w_plus = gamma / (1.0 + gamma)
    w_minus = 1.0 / (1.0 + gamma)
    return NormalModeState(
        z_plus=s.R - s.r * w_plus,
        z_plus_dot=s.R_dot - s.r_dot * w_plus,
        z_minus=s.R + s.r * w_minus,
        z_minus_dot=s.R_dot + s.r_dot * w_minus,
    )


def from_normal_modes(n: NormalModeState, gamma, t=0.0) -> CoupledState:
    if not gamma > 0:
        raise InvalidInputError("mass ratio must be positive")
    return CoupledState(
        R=(n.z_plus + gamma * n.z_minus) / (1.0 + gamma),
        R_dot=(n.z_plus_dot + gamma * n.z_minus_dot) / (1.0 + gamma),
        r=n.z_minus - n.z_plus,
        r_dot=n.z_minus_dot - n.z_plus_dot,
        t=t,
    )


def mode_coefficients(pair: SpeciesPair):
    """``(alpha_plus, alpha_minus)``: squared normal-mode frequencies in units of w_mol^2."""
    gamma = pair.mass_ratio
    alpha_plus = (1.0 + gamma) / (1.0 + pair.p)
    return alpha_plus, pair.p * alpha_plus / gamma


def eigenfrequencies_sq(pair: SpeciesPair, omega_mol):
    """Squared eigenfrequencies of the coupled oscillators from the secular equation."""
    f = derived_frequencies(pair, omega_mol)
    w2, wr2, wc2 = omega_mol**2, f.omega_r**2, f.omega_c_sq
    root = math.sqrt((w2 - wr2) ** 2 + 4.0 * pair.reduced_mass / pair.total_mass * wc2 * wc2)
    return 0.5 * (w2 + wr2 + root), 0.5 * (w2 + wr2 - root)


def _frequency_ratios(pair):
    unit = derived_frequencies(pair, 1.0)
    return unit.omega_r**2, unit.omega_c_sq


def energies(s: CoupledState, pair: SpeciesPair, w_mol_sq, w_r_sq, w_c_sq):
    """Center-of-mass, vibrational and coupling energies in J.

    The arguments may be numpy arrays of matching shape.
    """
    E_R = 0.5 * pair.total_mass * (w_mol_sq * s.R**2 + s.R_dot**2)
    E_r = 0.5 * pair.reduced_mass * (w_r_sq * s.r**2 + s.r_dot**2)
    E_c = -pair.reduced_mass * w_c_sq * s.R * s.r
    return E_R, E_r, E_c


@dataclass(frozen=True)
class Trajectory:
    """Phase-space samples; every field is an array over ``times``."""

    times: np.ndarray
    R: np.ndarray
    R_dot: np.ndarray
    r: np.ndarray
    r_dot: np.ndarray

    def __len__(self):
        return len(self.times)

    def state(self, i) -> CoupledState:
        return CoupledState(
            float(self.R[i]), float(self.R_dot[i]), float(self.r[i]), float(self.r_dot[i]),
            float(self.times[i]),
        )

    @property
    def final(self) -> CoupledState:
        return self.state(-1)

    def as_array(self):
        return np.column_stack([self.R, self.R_dot, self.r, self.r_dot])


@dataclass(frozen=True)
class EnergyTrace:
    """Channel energies in J over ``times``.

    The ``T_*`` properties are temperature equivalents ``2 E / k_B`` in K.
    """

    times: np.ndarray
    E_R: np.ndarray
    E_r: np.ndarray
    E_c: np.ndarray

    @property
    def T_R(self):
        return 2.0 * self.E_R / K_B

    @property
    def T_r(self):
        return 2.0 * self.E_r / K_B

    @property
    def T_c(self):
        return 2.0 * self.E_c / K_B

    @property
    def total(self):
        return self.E_R + self.E_r + self.E_c


class Propagation(NamedTuple):
    trajectory: Trajectory
    energies: EnergyTrace


def _report_times(sched: KickSchedule, report_dt=None, times=None):
    if times is not None:
        out = np.asarray(times, dtype=float)
        if out.ndim != 1 or np.any(out < 0) or np.any(out > sched.t_dkc) or np.any(np.diff(out) < 0):
            raise InvalidInputError("report times must be sorted and inside [0, t_dkc]")
        return out
    if sched.t_dkc == 0.0:
        return np.zeros(1)
    if report_dt is None:
        report_dt = sched.t_dkc / 1000.0
    if not report_dt > 0:
        raise InvalidInputError("report_dt must be positive")
    n = int(math.floor(sched.t_dkc / report_dt + 1e-9))
    grid = np.arange(n + 1) * report_dt
    grid = np.concatenate([grid, [sched.hold_start, sched.hold_end, sched.t_dkc]])
    return np.unique(np.clip(grid, 0.0, sched.t_dkc))


def _match(ai, aip, bi, bip, value, slope):
    """Coefficients (a, b) of ``a Ai + b Bi`` with the given value and argument-slope."""
    wronskian = ai * bip - aip * bi
    if abs(math.pi * wronskian - 1.0) > _WRONSKIAN_TOL:
        raise NumericalConsistencyError(f"Airy Wronskian off by {math.pi * wronskian - 1.0:.3e}")
    return math.pi * (value * bip - slope * bi), math.pi * (aip * value * -1.0 + ai * slope)


class _ModePath:
    """Closed-form solution of ``z'' + alpha w_mol^2(t) z = 0`` over a kick."""

    def __init__(self, alpha, sched: KickSchedule, z0, zd0):
        if not alpha > 0:
            raise InvalidInputError("mode frequency coefficient must be positive")
        self.sched = sched
        self.omega = math.sqrt(alpha) * sched.omega0
        t_r = sched.t_r
        z, zd = z0, zd0
        if t_r > 0:
            self.eta = (alpha * sched.omega0**2 / t_r) ** (1.0 / 3.0)
            v0 = airy(0.0)
            self.a_on, self.b_on = _match(*v0, z, -zd / self.eta)
            z, zd = self._on(t_r)
        # hold: z(t) = c cos(W (t - t_r)) + s sin(W (t - t_r))
        self.c_hold, self.s_hold = z, zd / self.omega
        if t_r > 0:
            z, zd = self._hold(sched.hold_end)
            v = airy(-self.eta * t_r)
            self.a_off, self.b_off = _match(*v, z, zd / self.eta)

    def _on(self, t):
        v = airy(-self.eta * t)
        return (
            self.a_on * v.ai + self.b_on * v.bi,
            -self.eta * (self.a_on * v.ai_prime + self.b_on * v.bi_prime),
        )

    def _hold(self, t):
        phase = self.omega * (t - self.sched.t_r)
        c, s = math.cos(phase), math.sin(phase)
        return (
            self.c_hold * c + self.s_hold * s,
            self.omega * (self.s_hold * c - self.c_hold * s),
        )

    def _off(self, t):
        v = airy(self.eta * (t - self.sched.t_dkc))
        return (
            self.a_off * v.ai + self.b_off * v.bi,
            self.eta * (self.a_off * v.ai_prime + self.b_off * v.bi_prime),
        )

    def __call__(self, t):
        sched = self.sched
        if t < sched.t_r:
            return self._on(t)
        if t <= sched.hold_end:
            return self._hold(t)
        return self._off(t)

    def sample(self, times):
        out = np.array([self(float(t)) for t in times])
        return out[:, 0], out[:, 1]


def _energy_trace(traj: Trajectory, sched, pair, coupled):
    kr, kc = _frequency_ratios(pair)
    w2 = np.array([ramp_omega_sq(float(t), sched) for t in traj.times])
    s = CoupledState(traj.R, traj.R_dot, traj.r, traj.r_dot)
    E_R, E_r, E_c = energies(s, pair, w2, kr * w2, (kc if coupled else 0.0) * w2)
    return EnergyTrace(traj.times, E_R, E_r, E_c)


def _check_start(s0: CoupledState):
    if s0.t != 0.0:
        raise InvalidInputError("initial state must be given at t = 0")
    if not all(math.isfinite(v) for v in (s0.R, s0.R_dot, s0.r, s0.r_dot)):
        raise InvalidInputError("initial state must be finite")


def propagate_analytic(s0: CoupledState, sched: KickSchedule, pair: SpeciesPair,
                       report_dt=None, times=None) -> Propagation:
    """Exact piecewise Airy / trigonometric solution of the coupled kick.

    ``times`` overrides the default report grid, which holds multiples of
    ``report_dt`` (default ``t_dkc / 1000``) plus the ramp boundaries.
    """
    _check_start(s0)
    grid = _report_times(sched, report_dt, times)
    gamma = pair.mass_ratio
    alpha_plus, alpha_minus = mode_coefficients(pair)
    n0 = to_normal_modes(s0, gamma)
    zp, zpd = _ModePath(alpha_plus, sched, n0.z_plus, n0.z_plus_dot).sample(grid)
    zm, zmd = _ModePath(alpha_minus, sched, n0.z_minus, n0.z_minus_dot).sample(grid)
    back = from_normal_modes(NormalModeState(zp, zpd, zm, zmd), gamma)
    traj = Trajectory(grid, back.R, back.R_dot, back.r, back.r_dot)
    return Propagation(traj, _energy_trace(traj, sched, pair, coupled=True))


def propagate_uncoupled(s0: CoupledState, sched: KickSchedule, pair: SpeciesPair,
                        report_dt=None, times=None) -> Propagation:
    """Same kick with the coupling frequency forced to zero.

    R and r then evolve as independent ramped oscillators with squared
    frequencies ``w_mol^2(t)`` and ``w_r^2(t)``.
    """
    _check_start(s0)
    grid = _report_times(sched, report_dt, times)
    kr, _ = _frequency_ratios(pair)
    R, R_dot = _ModePath(1.0, sched, s0.R, s0.R_dot).sample(grid)
    r, r_dot = _ModePath(kr, sched, s0.r, s0.r_dot).sample(grid)
    traj = Trajectory(grid, R, R_dot, r, r_dot)
    return Propagation(traj, _energy_trace(traj, sched, pair, coupled=False))


def propagate_numeric(s0: CoupledState, sched: KickSchedule, pair: SpeciesPair,
                      report_dt=None, rtol=1e-10, times=None, coupled=True) -> Propagation:
    """Direct integration of the coupled equations of motion.

    Each ramp phase is integrated separately so the adaptive steps never
    straddle a kink of the schedule. The state is rescaled channel by channel
    before integration, so ``rtol`` is meaningful for the sub-nanometre
    internuclear coordinate as well.
    """
    _check_start(s0)
    grid = _report_times(sched, report_dt, times)
    kr, kc = _frequency_ratios(pair)
    if not coupled:
        kc = 0.0
    mu_over_m = pair.reduced_mass / pair.total_mass
    w0 = sched.omega0

    def _length(x, v):
        size = max(abs(x), abs(v) / w0)
        return size if size > 0 else 1.0

    lR = _length(s0.R, s0.R_dot)
    lr = _length(s0.r, s0.r_dot)
    scale = np.array([lR, lR * w0, lr, lr * w0])

    def rhs_for(w2_of_t):
        def rhs(t, u):
            R, Rd, r, rd = u * scale
            w2 = w2_of_t(t)
            return np.array([
                Rd,
                -w2 * R + mu_over_m * kc * w2 * r,
                rd,
                -kr * w2 * r + kc * w2 * R,
            ]) / scale
        return rhs

    w2_peak = w0 * w0
    profiles = {
        "on": lambda t: w2_peak * t / sched.t_r,
        "hold": lambda t: w2_peak,
        "off": lambda t: w2_peak * (sched.t_dkc - t) / sched.t_r,
    }
    u = s0.as_array() / scale
    out = np.empty((len(grid), 4))
    filled = np.zeros(len(grid), dtype=bool)
    for t_a, t_b, kind in sched.segments():
        sol = integrate_ode(rhs_for(profiles[kind]), t_a, t_b, u, rtol=rtol, atol=1e-14)
        mask = (grid >= t_a) & (grid <= t_b) & ~filled
        if np.any(mask):
            out[mask] = np.atleast_2d(sol(grid[mask])) * scale
            filled |= mask
        u = sol.y_final
    if not sched.segments():
        out[:] = s0.as_array()
    traj = Trajectory(grid, out[:, 0], out[:, 1], out[:, 2], out[:, 3])
    return Propagation(traj, _energy_trace(traj, sched, pair, coupled=coupled))


def classical_period(v_int, binding_energy, reduced_mass, r_window, n_scan=4000, tol=1e-12):
    """Classical vibration period in a caller-supplied interaction potential.

    Evaluates ``sqrt(2 mu) * integral dr / sqrt(-E_b - V(r))`` between the two
    turning points of the first classically allowed region found when
    scanning ``r_window`` on ``n_scan`` points.
    """
    r_lo, r_hi = map(float, r_window)
    if not (0 <= r_lo < r_hi):
        raise InvalidInputError("r_window must satisfy 0 <= lo < hi")
    level = -binding_energy

    def kinetic(r):
        return level - v_int(r)

    grid = np.linspace(r_lo, r_hi, n_scan)
    values = np.array([kinetic(r) for r in grid])
    allowed = values > 0
    inside = np.flatnonzero(allowed)
    if inside.size == 0:
        raise InvalidInputError("no classically allowed region inside r_window")
    first = inside[0]
    last = first
    while last + 1 < n_scan and allowed[last + 1]:
        last += 1
    if first == 0 or last == n_scan - 1:
        raise InvalidInputError("turning points not bracketed by r_window")
    # turning points to full precision: their error sets the roundoff floor of the integral
    r_min = find_root(kinetic, (grid[first - 1], grid[first]), xtol=0.0)
    r_max = find_root(kinetic, (grid[last], grid[last + 1]), xtol=0.0)

    def integrand(r):
        k = kinetic(r)
        return 1.0 / math.sqrt(k) if k > 0 else 0.0

    return math.sqrt(2.0 * reduced_mass) * quad(integrand, r_min, r_max, tol=tol, endpoint_singular=True)
