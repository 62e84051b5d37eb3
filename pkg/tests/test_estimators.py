import math

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from dkc.constants import BOHR_RADIUS
from dkc.coupled import CoupledState, KickSchedule, propagate_analytic
from dkc.estimators import CoupledKickTransformer, KickOptimizer
from dkc.species import SpeciesPair


def test_params_round_trip_and_clone():
    est = KickOptimizer(regime="variational", a_dd_au=250.0, scan_steps=21)
    params = est.get_params()
    assert params["regime"] == "variational" and params["a_dd_au"] == 250.0
    twin = clone(est).set_params(threshold=50.0)
    assert twin.threshold == 50.0 and est.threshold == 100.0


def test_kick_optimizer_fit_predict():
    est = KickOptimizer(scan_range=(100e-6, 220e-6), scan_steps=13).fit()
    assert 155e-6 < est.t_opt_ < 165e-6
    assert est.gain_max_ > 500
    lo, hi = est.window_
    assert lo < est.t_opt_ < hi
    g = est.predict([[est.t_opt_], [0.0]])
    assert g[0] == pytest.approx(est.gain_max_, rel=1e-9) and g[1] == 1.0
    assert est.scan_.shape == (13, 2)


def test_predict_before_fit():
    with pytest.raises(NotFittedError):
        KickOptimizer().predict([1e-4])


def test_transformer_matches_propagator():
    tr = CoupledKickTransformer().fit()
    s0 = CoupledState(4.06e-6, 2.55e-3, 1000 * BOHR_RADIUS, 0.0)
    sched = KickSchedule(2 * math.pi * 100, 1e-6, 150e-6)
    ref = propagate_analytic(s0, sched, SpeciesPair.krb()).trajectory.as_array()[-1]
    out = tr.transform(s0.as_array()[None, :])[0]
    assert np.allclose(out, ref, rtol=1e-9, atol=1e-25)


def test_transformer_methods_agree():
    X = np.array([[1e-6, 1e-3, 5e-8, 0.0], [-2e-6, 0.0, 1e-8, 1e-5]])
    a = CoupledKickTransformer(method="analytic").fit_transform(X)
    b = CoupledKickTransformer(method="numeric").fit_transform(X)
    assert np.allclose(a, b, rtol=1e-7, atol=1e-20)


def test_transformer_rejects_bad_input():
    tr = CoupledKickTransformer().fit()
    with pytest.raises(ValueError):
        tr.transform(np.zeros((2, 3)))
    with pytest.raises(ValueError):
        CoupledKickTransformer(method="magic").fit()
