import math

import numpy as np
import pytest

from dkc.constants import BOHR_RADIUS, K_B
from dkc.coupled import KickSchedule
from dkc.errors import DomainError, InvalidInputError
from dkc.numerics import integrate_ode
from dkc.scaling import (
    Hydrodynamic,
    ScalingState,
    SequenceConfig,
    Thermal,
    ThomasFermi,
    Variational,
    asymptotic_expansion_energy,
    gain_scan,
    initial_size,
    mean_field_xi,
    optimize_kick,
    rhs_coefficients,
    run_sequence,
    scaling_rhs,
    size_std_factor,
)
from dkc.species import SpeciesPair, oscillator_length

W = 2 * math.pi * 100
T_PRE = 14.9e-3
PAIR = SpeciesPair.krb()
A_MOL = oscillator_length(PAIR.total_mass, W)


def cfg_for(regime, t_dkc=160e-6, sigma0=None, t_tof=0.0):
    return SequenceConfig.template(W, T_PRE, regime, t_tof=t_tof, sigma0=sigma0).with_kick_duration(t_dkc)


def test_rhs_coefficients():
    assert rhs_coefficients(ThomasFermi()) == (0.0, 1.0)
    assert rhs_coefficients(Thermal()) == (1.0, 0.0)
    assert rhs_coefficients(Hydrodynamic(0.3)) == pytest.approx((0.7, 0.3))
    c3, c4 = rhs_coefficients(Variational(5e4, 500 * BOHR_RADIUS), A_MOL)
    assert c4 == 1.0
    assert c3 == pytest.approx((math.pi / 2) ** 0.4 * (A_MOL / (5e4 * 500 * BOHR_RADIUS)) ** 0.8, rel=1e-14)
    with pytest.raises(InvalidInputError):
        rhs_coefficients(Variational(5e4, 500 * BOHR_RADIUS))


def test_rhs_is_equilibrium_in_static_trap():
    for regime in (ThomasFermi(), Thermal(), Hydrodynamic(0.4)):
        assert scaling_rhs(regime, 1.0, W**2, W**2) == pytest.approx(0.0, abs=1e-9 * W**2)
    assert scaling_rhs(ThomasFermi(), 2.0, 0.0, 1.0) == pytest.approx(1 / 16)
    with pytest.raises(DomainError):
        scaling_rhs(Thermal(), 0.0, 1.0, 1.0)


def test_variational_approaches_thomas_fermi():
    # N a_dd = 1e6 a_mol makes the kinetic term negligible
    a_dd = 1e6 * A_MOL / 5e4
    g_var = run_sequence(cfg_for(Variational(5e4, a_dd)), PAIR).gain
    g_tf = run_sequence(cfg_for(ThomasFermi(5e4, a_dd)), PAIR).gain
    assert abs(g_var / g_tf - 1) < 1e-3


def test_initial_sizes():
    r_tf = initial_size(ThomasFermi(5e4, 500 * BOHR_RADIUS), PAIR, W)
    assert r_tf == pytest.approx(A_MOL * (15 * 5e4 * 500 * BOHR_RADIUS / A_MOL) ** 0.2, rel=1e-14)
    assert size_std_factor(ThomasFermi()) == pytest.approx(1 / math.sqrt(7))
    s_th = initial_size(Thermal(1e-6), PAIR, W)
    assert s_th == pytest.approx(math.sqrt(K_B * 1e-6 / PAIR.total_mass) / W, rel=1e-14)
    assert initial_size(Hydrodynamic(0.75, 1e-6), PAIR, W) == pytest.approx(2 * s_th, rel=1e-14)
    with pytest.raises(InvalidInputError):
        initial_size(Hydrodynamic(1.0, 1e-6), PAIR, W)
    with pytest.raises(InvalidInputError):
        initial_size(Thermal(), PAIR, W)


def test_mean_field_xi():
    assert mean_field_xi(0.0, 1e19, 500 * BOHR_RADIUS, PAIR.total_mass) == 1.0
    assert mean_field_xi(1.0, 0.0, 500 * BOHR_RADIUS, PAIR.total_mass) == 0.0
    hot = mean_field_xi(1e-6, 1e19, 500 * BOHR_RADIUS, PAIR.total_mass)
    cold = mean_field_xi(1e-8, 1e19, 500 * BOHR_RADIUS, PAIR.total_mass)
    assert 0 < hot < cold < 1
    with pytest.raises(InvalidInputError):
        mean_field_xi(0.0, 0.0, 500 * BOHR_RADIUS, PAIR.total_mass)


@pytest.mark.parametrize("regime", [ThomasFermi(), Thermal(), Hydrodynamic(0.6), Variational(5e4, 50 * BOHR_RADIUS)])
def test_asymptotic_energy_matches_long_free_flight(regime):
    # integrate the free expansion to t = 1 s and read off the velocity
    c3, c4 = rhs_coefficients(regime, A_MOL)

    def f(tau, y):
        return np.array([y[1], c3 / y[0] ** 3 + c4 / y[0] ** 4])

    sol = integrate_ode(f, 0.0, W * 1.0, np.array([1.0, 0.0]))
    sigma0 = 1e-5
    brute = PAIR.total_mass * (sigma0 * W * sol.y_final[1]) ** 2 / K_B
    start = ScalingState(1.0, 0.0)
    closed = asymptotic_expansion_energy(start, regime, sigma0, W**2, PAIR.total_mass, A_MOL)
    assert brute == pytest.approx(closed, rel=1e-3)
    # the invariant is conserved along the flight
    later = ScalingState(sol.y_final[0], sol.y_final[1] * W)
    assert asymptotic_expansion_energy(later, regime, sigma0, W**2, PAIR.total_mass, A_MOL) == pytest.approx(closed, rel=1e-8)


def test_free_expansion_is_monotone():
    res = run_sequence(cfg_for(ThomasFermi(), t_dkc=0.0, t_tof=5e-3), PAIR)
    assert np.all(np.diff(res.sigma) >= 0)
    assert res.gain == 1.0


def test_hydrodynamic_limits_reproduce_named_regimes():
    tf = ThomasFermi(5e4, 500 * BOHR_RADIUS)
    std = initial_size(tf, PAIR, W) * size_std_factor(tf)
    a = run_sequence(cfg_for(tf), PAIR)
    b = run_sequence(cfg_for(Hydrodynamic(1.0), sigma0=std), PAIR)
    for x, y in ((a.gain, b.gain), (a.E_i, b.E_i), (a.E_f, b.E_f)):
        assert abs(x / y - 1) <= 1e-10
    c = run_sequence(cfg_for(Thermal(1e-6)), PAIR)
    d = run_sequence(cfg_for(Hydrodynamic(0.0, 1e-6)), PAIR)
    for x, y in ((c.gain, d.gain), (c.E_i, d.E_i), (c.E_f, d.E_f)):
        assert abs(x / y - 1) <= 1e-10


def test_thomas_fermi_gain_independent_of_a_dd():
    grid = [100e-6, 160e-6, 200e-6]
    ref = [p.gain for p in gain_scan(cfg_for(ThomasFermi(5e4, 500 * BOHR_RADIUS)), PAIR, grid)]
    for a_dd in (50, 250):
        other = [p.gain for p in gain_scan(cfg_for(ThomasFermi(5e4, a_dd * BOHR_RADIUS)), PAIR, grid)]
        assert np.allclose(other, ref, rtol=1e-10, atol=0)


def test_weaker_interaction_lowers_variational_gain():
    gains = [run_sequence(cfg_for(Variational(5e4, a * BOHR_RADIUS)), PAIR).gain for a in (500, 250, 50)]
    assert gains[0] > gains[1] > gains[2]


def test_gain_falls_with_temperature():
    gains = [run_sequence(cfg_for(Hydrodynamic(xi, t)), PAIR).gain
             for xi, t in ((0.9999, 2e-9), (0.8958, 30e-9), (0.7056, 50e-9), (0.0, 1e-6))]
    assert all(x > y for x, y in zip(gains, gains[1:]))


def test_scan_order_and_threads_are_deterministic():
    grid = np.linspace(0, 300e-6, 13)
    one = gain_scan(cfg_for(ThomasFermi()), PAIR, grid, threads=1)
    four = gain_scan(cfg_for(ThomasFermi()), PAIR, grid, threads=4)
    assert [p.t_dkc for p in four] == list(grid)
    assert [p.gain for p in one] == [p.gain for p in four]
    assert one[0].gain == 1.0


def test_short_kicks_use_clipped_ramps():
    pts = gain_scan(cfg_for(ThomasFermi()), PAIR, [0.5e-6, 1e-6, 2e-6])
    assert all(p.error is None and p.gain > 1 for p in pts)


def test_strong_kick_stays_finite():
    # the repulsive lambda**-3 term keeps an over-focused cloud off the origin
    cfg = SequenceConfig.template(W, T_PRE, Thermal(1e-6), omega_kick=50 * W)
    (pt,) = gain_scan(cfg, PAIR, [5e-3])
    assert pt.error is None and 0 < pt.gain < 1


def test_failed_point_is_reported_not_raised(monkeypatch):
    import dkc.scaling as scaling
    from dkc.errors import IntegrationError

    cfg = cfg_for(ThomasFermi())
    seq_ok = gain_scan(cfg, PAIR, [100e-6])[0]
    real = scaling.integrate_ode

    def flaky(f, t0, t1, y0, **kw):
        if t1 - t0 > W * 150e-6 and t0 > 0:
            raise IntegrationError("step size underflow", t0)
        return real(f, t0, t1, y0, **kw)

    monkeypatch.setattr(scaling, "integrate_ode", flaky)
    pts = gain_scan(cfg, PAIR, [100e-6, 250e-6])
    assert pts[0].gain == seq_ok.gain and pts[0].error is None
    assert "collapsed" in pts[1].error
    assert math.isnan(pts[1].gain)


def test_optimizer_window_brackets_threshold():
    opt = optimize_kick(cfg_for(ThomasFermi()), PAIR, (150e-6, 170e-6))
    lo, hi = opt.window
    assert lo < opt.t_opt < hi
    probe = gain_scan(cfg_for(ThomasFermi()), PAIR, [lo, hi])
    assert [p.gain for p in probe] == pytest.approx([100.0, 100.0], rel=1e-6)


def test_optimizer_without_window_when_threshold_too_high():
    opt = optimize_kick(cfg_for(Thermal(1e-6)), PAIR, (150e-6, 180e-6), threshold=100.0)
    assert opt.window is None and opt.half_widths is None


def test_sequence_validation():
    with pytest.raises(InvalidInputError):
        SequenceConfig(W, -1.0, KickSchedule(W, 0, 0), 0.0, Thermal())
    with pytest.raises(InvalidInputError):
        Hydrodynamic(1.5)
