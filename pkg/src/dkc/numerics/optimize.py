"""Derivative-free scalar search: golden-section minimization and bisection."""

from __future__ import annotations

import math

from ..errors import BracketError, ConvergenceError

__all__ = ["minimize_scalar", "find_root"]

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def _checked(g, x):
    value = g(x)
    if not math.isfinite(value):
        raise ValueError(f"objective is not finite at x = {x!r}")
    return value


def minimize_scalar(g, bracket, xtol=1e-8, max_iter=500):
    """Golden-section search for the minimum of a unimodal ``g`` on ``bracket``.

    Returns ``(x_min, g(x_min))`` with ``x_min`` the midpoint of the final
    interval, whose width is at most ``xtol``.
    """
    lo, hi = map(float, bracket)
    if not lo < hi:
        raise BracketError(f"bracket must satisfy lo < hi, got {bracket!r}")
    x1 = hi - _INV_PHI * (hi - lo)
    x2 = lo + _INV_PHI * (hi - lo)
    g1, g2 = _checked(g, x1), _checked(g, x2)
    for _ in range(max_iter):
        if hi - lo <= xtol:
            break
        if g1 == g2:
            # indistinguishable values: a unimodal minimum lies between them
            lo, hi = x1, x2
            x1 = hi - _INV_PHI * (hi - lo)
            x2 = lo + _INV_PHI * (hi - lo)
            g1, g2 = _checked(g, x1), _checked(g, x2)
        elif g1 < g2:
            hi, x2, g2 = x2, x1, g1
            x1 = hi - _INV_PHI * (hi - lo)
            g1 = _checked(g, x1)
        else:
            lo, x1, g1 = x1, x2, g2
            x2 = lo + _INV_PHI * (hi - lo)
            g2 = _checked(g, x2)
    else:
        raise ConvergenceError("golden-section search did not reach xtol")
    x_min = 0.5 * (lo + hi)
    return x_min, _checked(g, x_min)


def find_root(g, bracket, xtol=1e-10, max_iter=2000):
    """Bisection for ``g(x) = 0`` on a sign-changing ``bracket``."""
    lo, hi = map(float, bracket)
    g_lo, g_hi = _checked(g, lo), _checked(g, hi)
    if g_lo == 0.0:
        return lo
    if g_hi == 0.0:
        return hi
    if (g_lo > 0) == (g_hi > 0):
        raise BracketError(f"no sign change on [{lo!r}, {hi!r}]")
    for _ in range(max_iter):
        if abs(hi - lo) <= xtol:
            break
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        g_mid = _checked(g, mid)
        if g_mid == 0.0:
            return mid
        if (g_mid > 0) == (g_lo > 0):
            lo, g_lo = mid, g_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
