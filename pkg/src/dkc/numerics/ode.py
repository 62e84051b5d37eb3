"""Adaptive Dormand-Prince 5(4) integrator with continuous output."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import DomainError, IntegrationError

__all__ = ["OdeSolution", "OdeStats", "integrate_ode"]

# Dormand & Prince (1980), with the dense-output coefficients of Hairer's DOPRI5
_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_E = (71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40)
_D = (
    -12715105075 / 11282082432,
    0.0,
    87487479700 / 32700410799,
    -10690763975 / 1880347072,
    701980252875 / 199316789632,
    -1453857185 / 822651844,
    69997945 / 29380423,
)

_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 5.0


@dataclass
class OdeStats:
    n_steps: int = 0
    n_rejected: int = 0
    n_fev: int = 0


@dataclass
class OdeSolution:
    """Accepted step grid, states at the grid and a dense interpolant.

    Calling the solution evaluates the 4th-order continuous extension at any
    time inside ``[t[0], t[-1]]``.
    """

    t: np.ndarray
    y: np.ndarray
    _coeffs: np.ndarray = field(repr=False)
    stats: OdeStats = field(default_factory=OdeStats)

    @property
    def t_final(self):
        return float(self.t[-1])

    @property
    def y_final(self):
        return self.y[-1]

    def __call__(self, t):
        t_arr = np.atleast_1d(np.asarray(t, dtype=float))
        lo, hi = self.t[0], self.t[-1]
        span = hi - lo
        if np.any(t_arr < lo - 1e-12 * span) or np.any(t_arr > hi + 1e-12 * span):
            raise ValueError("dense output requested outside the integration interval")
        idx = np.clip(np.searchsorted(self.t, t_arr, side="right") - 1, 0, len(self.t) - 2)
        h = self.t[idx + 1] - self.t[idx]
        theta = ((t_arr - self.t[idx]) / h)[:, None]
        theta1 = 1.0 - theta
        r = self._coeffs[idx]
        out = r[:, 0] + theta * (r[:, 1] + theta1 * (r[:, 2] + theta * (r[:, 3] + theta1 * r[:, 4])))
        return out[0] if np.ndim(t) == 0 else out


def _error_norm(err, y0, y1, rtol, atol):
    scale = atol + rtol * np.maximum(np.abs(y0), np.abs(y1))
    return float(np.max(np.abs(err) / scale))


def _initial_step(f, t0, y0, f0, rtol, atol, span):
    scale = atol + rtol * np.abs(y0)
    d0 = float(np.max(np.abs(y0) / scale))
    d1 = float(np.max(np.abs(f0) / scale))
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    h0 = min(h0, span)
    y1 = y0 + h0 * f0
    f1 = np.asarray(f(t0 + h0, y1), dtype=float)
    d2 = float(np.max(np.abs(f1 - f0) / scale)) / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** 0.2
    return min(100 * h0, h1, span)


def integrate_ode(f, t0, t1, y0, rtol=1e-10, atol=1e-14, first_step=None, max_step=math.inf):
    """Integrate ``y' = f(t, y)`` from ``t0`` to ``t1`` (``t1 > t0``).

    Parameters
    ----------
    f : callable
        ``f(t, y)`` returning the derivative as a sequence of floats.
    rtol, atol : float
        Per-component local error bound ``rtol * |y| + atol``.

    Returns
    -------
    OdeSolution

    Raises
    ------
    IntegrationError
        If the step size underflows, e.g. at a singularity of ``f``.
    """
    if not t1 > t0:
        raise ValueError(f"integration interval must satisfy t1 > t0, got [{t0}, {t1}]")
    y = np.array(y0, dtype=float).reshape(-1)
    if not np.all(np.isfinite(y)):
        raise ValueError("initial state must be finite")
    stats = OdeStats()
    span = t1 - t0

    k1 = np.asarray(f(t0, y), dtype=float)
    stats.n_fev += 1
    if not np.all(np.isfinite(k1)):
        raise IntegrationError("non-finite derivative at the initial point", t0)
    if first_step is None:
        h = _initial_step(f, t0, y, k1, rtol, atol, span)
        stats.n_fev += 1
    else:
        h = float(first_step)
    h = min(h, max_step, span)

    ts = [t0]
    ys = [y.copy()]
    coeffs = []
    t = t0
    step_rejected = False
    k = [None] * 7
    while t < t1:
        h_min = 16.0 * np.finfo(float).eps * max(abs(t), abs(t1) * 1e-3, 1e-300)
        if h < h_min:
            raise IntegrationError("step size underflow", t)
        last = t + h >= t1 or (t1 - (t + h)) < h_min
        if last:
            h = t1 - t
        k[0] = k1
        ok = True
        try:
            for s in range(1, 7):
                ys_stage = y + h * sum(a * kj for a, kj in zip(_A[s], k[:s]) if a != 0.0)
                k[s] = np.asarray(f(t + _C[s] * h, ys_stage), dtype=float)
                if not np.all(np.isfinite(k[s])):
                    ok = False
                    break
        except DomainError:
            ok = False
        stats.n_fev += 6
        if not ok:
            stats.n_rejected += 1
            step_rejected = True
            h *= 0.25
            continue

        y_new = ys_stage  # row 7 of the tableau is the 5th-order solution
        err = h * sum(e * kj for e, kj in zip(_E, k) if e != 0.0)
        err_norm = _error_norm(err, y, y_new, rtol, atol)
        if err_norm > 1.0:
            stats.n_rejected += 1
            step_rejected = True
            h *= max(_MIN_FACTOR, _SAFETY * err_norm**-0.2)
            continue

        ydiff = y_new - y
        bspl = h * k[0] - ydiff
        dense = h * sum(d * kj for d, kj in zip(_D, k) if d != 0.0)
        coeffs.append(np.stack([y, ydiff, bspl, ydiff - h * k[6] - bspl, dense]))

        t = t1 if last else t + h
        y = y_new
        k1 = k[6]
        ts.append(t)
        ys.append(y.copy())
        stats.n_steps += 1

        factor = _MAX_FACTOR if err_norm == 0.0 else min(_MAX_FACTOR, _SAFETY * err_norm**-0.2)
        if step_rejected:
            factor = min(1.0, factor)
            step_rejected = False
        h = min(h * factor, max_step)

    return OdeSolution(np.array(ts), np.array(ys), np.array(coeffs), stats)
