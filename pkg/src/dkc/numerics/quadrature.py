"""Adaptive Gauss-Kronrod (7, 15) quadrature."""

from __future__ import annotations

import heapq
import math
import sys

from ..errors import ConvergenceError

_EPS = sys.float_info.epsilon

__all__ = ["quad"]

_XGK = (
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
)
_WGK = (
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
)
_WG = (
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
)


def _gk15(g, a, b):
    center = 0.5 * (a + b)
    half = 0.5 * (b - a)
    f_center = g(center)
    kronrod = _WGK[7] * f_center
    gauss = _WG[3] * f_center
    for j in range(7):
        dx = half * _XGK[j]
        fsum = g(center - dx) + g(center + dx)
        kronrod += _WGK[j] * fsum
        if j % 2 == 1:
            gauss += _WG[j // 2] * fsum
    return kronrod * half, abs((kronrod - gauss) * half)


def quad(g, a, b, tol=1e-10, endpoint_singular=False, max_intervals=2000):
    """Integrate ``g`` over ``[a, b]`` to absolute or relative accuracy ``tol``.

    With ``endpoint_singular`` the integral is mapped through
    ``x = a + (b - a) (1 - cos(theta)) / 2``, which turns integrable
    ``(x - a)**-1/2`` and ``(b - x)**-1/2`` endpoint behaviour into a smooth
    integrand in ``theta``.
    """
    if not a < b:
        raise ValueError(f"quad requires a < b, got a={a!r}, b={b!r}")
    if endpoint_singular:
        half = 0.5 * (b - a)

        def integrand(theta):
            # 1 - cos written as 2 sin^2, measured from the nearer endpoint
            if theta <= 0.5 * math.pi:
                x = a + 2.0 * half * math.sin(0.5 * theta) ** 2
            else:
                x = b - 2.0 * half * math.sin(0.5 * (math.pi - theta)) ** 2
            return g(x) * half * math.sin(theta)

        lo, hi = 0.0, math.pi
    else:
        integrand, lo, hi = g, a, b

    value, error = _gk15(integrand, lo, hi)
    heap = [(-error, lo, hi, value)]
    total, total_err = value, error
    # intervals this narrow only resolve roundoff of the integrand; keep them unsplit
    min_width = 1e3 * _EPS * max(abs(lo), abs(hi))
    settled = []
    while total_err > max(tol, tol * abs(total)) and heap:
        if len(heap) >= max_intervals:
            raise ConvergenceError(
                f"quadrature did not converge within {max_intervals} subintervals "
                f"(estimate {total!r}, error {total_err!r})"
            )
        neg_err, x0, x1, v = heapq.heappop(heap)
        if x1 - x0 < min_width:
            settled.append(v)
            total_err += neg_err
            continue
        mid = 0.5 * (x0 + x1)
        v_left, e_left = _gk15(integrand, x0, mid)
        v_right, e_right = _gk15(integrand, mid, x1)
        total += v_left + v_right - v
        total_err += e_left + e_right + neg_err
        heapq.heappush(heap, (-e_left, x0, mid, v_left))
        heapq.heappush(heap, (-e_right, mid, x1, v_right))
    # re-sum to shed the drift of the running updates
    return math.fsum([item[3] for item in heap] + settled)
