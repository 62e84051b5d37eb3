"""scikit-learn style wrappers around the simulators.

:class:`KickOptimizer` fits the optimal kick duration of a collimation
sequence and predicts the gain at arbitrary durations.
:class:`CoupledKickTransformer` fits the (linear) phase-space map of one kick
and transforms batches of initial ``(R, R_dot, r, r_dot)`` states.
"""

from __future__ import annotations

import math

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .config import make_regime
from .constants import BOHR_RADIUS, MASS_K41_U, MASS_RB87_U, P_2000NM
from .coupled import (
    CoupledState,
    KickSchedule,
    propagate_analytic,
    propagate_numeric,
    propagate_uncoupled,
)
from .errors import InvalidInputError
from .scaling import SequenceConfig, _Sequence, gain_scan, optimize_kick
from .species import SpeciesPair

__all__ = ["KickOptimizer", "CoupledKickTransformer"]

TWO_PI = 2.0 * math.pi


class KickOptimizer(BaseEstimator):
    """Find the kick duration that maximizes the expansion-energy gain.

    ``fit`` runs a coarse scan over ``scan_range`` followed by golden-section
    refinement and bisection of the ``threshold`` crossings.

    Attributes
    ----------
    t_opt_, gain_max_, window_ : float, float, tuple or None
    E_i_ : float
        Expansion energy without kick (K).
    scan_ : ndarray of shape (scan_steps, 2)
        Coarse scan ``(t_dkc, gain)``.
    """

    def __init__(self, regime="thomas_fermi", n_molecules=5e4, a_dd_au=500.0, xi=None,
                 temperature=None, trap_frequency_hz=100.0, kick_frequency_hz=None,
                 t_pre_tof=14.9e-3, ramp_time=1e-6, p=P_2000NM, m_light_u=MASS_K41_U,
                 m_heavy_u=MASS_RB87_U, scan_range=(0.0, 300e-6), scan_steps=61,
                 threshold=100.0, threads=1):
        self.regime = regime
        self.n_molecules = n_molecules
        self.a_dd_au = a_dd_au
        self.xi = xi
        self.temperature = temperature
        self.trap_frequency_hz = trap_frequency_hz
        self.kick_frequency_hz = kick_frequency_hz
        self.t_pre_tof = t_pre_tof
        self.ramp_time = ramp_time
        self.p = p
        self.m_light_u = m_light_u
        self.m_heavy_u = m_heavy_u
        self.scan_range = scan_range
        self.scan_steps = scan_steps
        self.threshold = threshold
        self.threads = threads

    def _build(self):
        pair = SpeciesPair.from_atomic_mass_units(self.m_light_u, self.m_heavy_u, self.p)
        regime = make_regime(self.regime, self.n_molecules, self.a_dd_au * BOHR_RADIUS,
                             self.xi, self.temperature)
        w = TWO_PI * self.trap_frequency_hz
        w_kick = None if self.kick_frequency_hz is None else TWO_PI * self.kick_frequency_hz
        return pair, SequenceConfig.template(w, self.t_pre_tof, regime, omega_kick=w_kick, t_r=self.ramp_time)

    def fit(self, X=None, y=None):
        """Scan and refine; ``X`` and ``y`` are ignored."""
        pair, cfg = self._build()
        lo, hi = self.scan_range
        if self.scan_steps < 3 or not 0 <= lo < hi:
            raise InvalidInputError("scan needs at least 3 points on a non-empty range")
        grid = np.linspace(lo, hi, self.scan_steps)
        points = gain_scan(cfg, pair, grid, threads=self.threads)
        gains = np.array([pt.gain for pt in points])
        i = int(np.nanargmax(gains))
        bracket = (grid[max(i - 1, 0)], grid[min(i + 1, len(grid) - 1)])
        opt = optimize_kick(cfg, pair, bracket, threshold=self.threshold)
        self.pair_ = pair
        self.config_ = cfg
        self.scan_ = np.column_stack([grid, gains])
        self.t_opt_ = opt.t_opt
        self.gain_max_ = opt.gain_max
        self.window_ = opt.window
        self.E_i_ = _Sequence(cfg, pair).E_i
        return self

    def predict(self, X):
        """Gain for each kick duration (s) in ``X`` of shape (n,) or (n, 1)."""
        check_is_fitted(self, "t_opt_")
        t = check_array(np.asarray(X, dtype=float).reshape(-1, 1), ensure_all_finite=True).ravel()
        return np.array([pt.gain for pt in gain_scan(self.config_, self.pair_, t, threads=self.threads)])


class CoupledKickTransformer(TransformerMixin, BaseEstimator):
    """Phase-space map ``(R, R_dot, r, r_dot)(0) -> (...)(t_dkc)`` of one kick.

    The equations of motion are linear, so ``fit`` propagates the four unit
    states and stores the 4x4 transfer matrix; ``transform`` applies it.

    Parameters
    ----------
    method : {"analytic", "numeric", "uncoupled"}
    """

    def __init__(self, p=P_2000NM, m_light_u=MASS_K41_U, m_heavy_u=MASS_RB87_U,
                 kick_frequency_hz=100.0, ramp_time=1e-6, kick_duration=150e-6, method="analytic"):
        self.p = p
        self.m_light_u = m_light_u
        self.m_heavy_u = m_heavy_u
        self.kick_frequency_hz = kick_frequency_hz
        self.ramp_time = ramp_time
        self.kick_duration = kick_duration
        self.method = method

    def fit(self, X=None, y=None):
        propagators = {
            "analytic": propagate_analytic,
            "numeric": propagate_numeric,
            "uncoupled": propagate_uncoupled,
        }
        if self.method not in propagators:
            raise InvalidInputError(f"unknown method {self.method!r}")
        pair = SpeciesPair.from_atomic_mass_units(self.m_light_u, self.m_heavy_u, self.p)
        sched = KickSchedule(TWO_PI * self.kick_frequency_hz, self.ramp_time, self.kick_duration)
        columns = []
        for basis in np.eye(4):
            run = propagators[self.method](CoupledState.from_array(basis), sched, pair,
                                           times=[0.0, sched.t_dkc])
            columns.append(run.trajectory.as_array()[-1])
        self.transfer_matrix_ = np.column_stack(columns)
        self.schedule_ = sched
        self.pair_ = pair
        self.n_features_in_ = 4
        return self

    def transform(self, X):
        check_is_fitted(self, "transfer_matrix_")
        X = check_array(X, dtype=float)
        if X.shape[1] != 4:
            raise ValueError(f"expected 4 columns (R, R_dot, r, r_dot), got {X.shape[1]}")
        return X @ self.transfer_matrix_.T
