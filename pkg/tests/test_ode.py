import math

import numpy as np
import pytest

from dkc.errors import DomainError, IntegrationError
from dkc.numerics import integrate_ode


def test_exponential_decay():
    sol = integrate_ode(lambda t, y: -y, 0.0, 1.0, np.array([1.0]))
    assert abs(sol.y_final[0] - math.exp(-1)) < 1e-10
    assert sol.t_final == 1.0


def test_backward_span_rejected():
    with pytest.raises(ValueError):
        integrate_ode(lambda t, y: -y, 1.0, 0.0, np.array([1.0]))


def test_harmonic_energy_over_ten_periods():
    w = 3.0
    sol = integrate_ode(lambda t, y: np.array([y[1], -w * w * y[0]]), 0.0, 20 * math.pi / w,
                        np.array([1.0, 0.0]), rtol=1e-9)
    x, v = sol.y_final
    assert abs(0.5 * (v * v + w * w * x * x) - 0.5 * w * w) / (0.5 * w * w) < 1e-7


def test_ermakov_free_expansion():
    # lam'' = w^2 / lam^3 with lam(0) = 1 gives sqrt(1 + w^2 t^2)
    w = 2.0
    sol = integrate_ode(lambda t, y: np.array([y[1], w * w / y[0] ** 3]), 0.0, 5.0, np.array([1.0, 0.0]))
    for t in np.linspace(0.0, 5.0, 41):
        assert abs(sol(t)[0] - math.sqrt(1 + w * w * t * t)) < 1e-9


def test_dense_output_matches_nodes_and_interpolates():
    sol = integrate_ode(lambda t, y: np.array([y[1], -y[0]]), 0.0, 6.0, np.array([0.0, 1.0]))
    assert np.allclose(sol(sol.t), sol.y)
    ts = np.linspace(0.0, 6.0, 97)
    assert np.max(np.abs(sol(ts)[:, 0] - np.sin(ts))) < 1e-8


def test_tighter_tolerance_reduces_error():
    def err(rtol):
        sol = integrate_ode(lambda t, y: np.array([y[1], -y[0]]), 0.0, 10.0, np.array([0.0, 1.0]), rtol=rtol, atol=1e-16)
        return abs(sol.y_final[0] - math.sin(10.0))

    assert err(1e-6) / err(0.5e-6) >= 1.5


def test_domain_error_rejects_step_and_recovers():
    # the RHS refuses y < 0; the integrator must shrink steps instead of crashing
    calls = {"domain": 0}

    def f(t, y):
        if y[0] < 0:
            calls["domain"] += 1
            raise DomainError("negative")
        return -0.5 / max(y[0], 1e-300) * np.ones(1)

    # y = sqrt(1 - t) reaches zero at t = 1; stop before it
    sol = integrate_ode(f, 0.0, 0.99, np.array([1.0]), first_step=0.5)
    assert sol.y_final[0] == pytest.approx(0.1, rel=1e-6)


def test_step_size_underflow_raises_with_last_time():
    def f(t, y):
        if t > 0.5:
            raise DomainError("wall")
        return np.ones(1)

    with pytest.raises(IntegrationError) as info:
        integrate_ode(f, 0.0, 1.0, np.array([0.0]))
    assert info.value.t_last == pytest.approx(0.5, abs=1e-6)


def test_stats_are_counted():
    sol = integrate_ode(lambda t, y: -y, 0.0, 1.0, np.array([1.0]))
    assert sol.stats.n_steps >= 1 and sol.stats.n_fev >= 6 * sol.stats.n_steps


def test_non_finite_initial_state_rejected():
    with pytest.raises(ValueError):
        integrate_ode(lambda t, y: -y, 0.0, 1.0, np.array([math.nan]))
