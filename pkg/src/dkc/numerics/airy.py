"""Real-argument Airy functions Ai, Bi and their derivatives.

Three regimes:

* ``|x| <= X_SWITCH``: Taylor series of the Airy equation ``y'' = x y`` about
  the nearest node of a fixed anchor grid. The node at 0 carries the exact
  Maclaurin data; the others are filled once at import by chaining Taylor
  steps outward from 0 (Bi, and Ai for x < 0) or inward from the asymptotic
  value at ``_AI_SEED`` (Ai for x > 0, where forward chaining is unstable).
* ``x > X_SWITCH``: exponential asymptotic expansions.
* ``x < -X_SWITCH``: oscillatory asymptotic expansions.

The anchor grid extends past ``X_SWITCH`` so both branches can be compared in
the overlap band.
"""

from __future__ import annotations

import math
from typing import NamedTuple

from ..errors import AiryOverflowError

__all__ = ["AiryValues", "airy", "X_SWITCH"]

X_SWITCH = 8.0
_GRID_STEP = 0.5
_GRID_EDGE = 9.0
_AI_SEED = 12.0

_SQRT_PI = math.sqrt(math.pi)

AI0 = 3.0 ** (-2.0 / 3.0) / math.gamma(2.0 / 3.0)
AIP0 = -(3.0 ** (-1.0 / 3.0)) / math.gamma(1.0 / 3.0)
BI0 = 3.0 ** (-1.0 / 6.0) / math.gamma(2.0 / 3.0)
BIP0 = 3.0 ** (1.0 / 6.0) / math.gamma(1.0 / 3.0)


class AiryValues(NamedTuple):
    ai: float
    ai_prime: float
    bi: float
    bi_prime: float


def _taylor(x0, y, dy, h):
    """Value and slope at ``x0 + h`` of the Airy solution with data (y, dy) at x0."""
    # c[n+2] = (x0 c[n] + c[n-1]) / ((n+1)(n+2))
    c_prev, c0, c1 = 0.0, y, dy
    value = c0 + c1 * h
    slope = c1
    hn = h  # h**(n-1) for the slope, h**n for the value at loop index n
    n = 0
    small = 0
    while n < 400:
        c2 = (x0 * c0 + c_prev) / ((n + 1) * (n + 2))
        slope_term = (n + 2) * c2 * hn
        hn *= h
        value_term = c2 * hn
        value += value_term
        slope += slope_term
        scale = abs(value) + abs(slope) + 1e-300
        if abs(value_term) + abs(slope_term) <= 1e-18 * scale:
            small += 1
            if small >= 3:
                break
        else:
            small = 0
        c_prev, c0, c1 = c0, c1, c2
        n += 1
    return value, slope


def _u_coefficients(n):
    u = [1.0]
    for k in range(1, n):
        u.append(u[-1] * (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / (216.0 * k * (2 * k - 1)))
    v = [-(6 * k + 1) / (6 * k - 1) * uk for k, uk in enumerate(u)]
    return u, v


_U, _V = _u_coefficients(60)


def _sum_asymptotic(coeffs, inv_zeta, sign, start=0, stride=1):
    """Sum ``sum_k sign**k coeffs[start + stride k] inv_zeta**(start + stride k)``,
    stopped at the smallest term."""
    total = 0.0
    last = math.inf
    k = 0
    idx = start
    while idx < len(coeffs):
        term = coeffs[idx] * inv_zeta**idx * (sign**k)
        if abs(term) >= last:
            break
        total += term
        if abs(term) < 1e-17 * abs(total):
            break
        last = abs(term)
        k += 1
        idx += stride
    return total


def _asymptotic_ai_positive(x):
    zeta = 2.0 / 3.0 * x**1.5
    inv = 1.0 / zeta
    q = x**0.25
    e = math.exp(-zeta)
    ai = e / (2.0 * _SQRT_PI * q) * _sum_asymptotic(_U, inv, -1.0)
    aip = -q * e / (2.0 * _SQRT_PI) * _sum_asymptotic(_V, inv, -1.0)
    return ai, aip


def _asymptotic_bi_positive(x):
    zeta = 2.0 / 3.0 * x**1.5
    inv = 1.0 / zeta
    q = x**0.25
    try:
        e = math.exp(zeta)
    except OverflowError:
        raise AiryOverflowError(f"Bi({x!r}) overflows double precision") from None
    bi = e / (_SQRT_PI * q) * _sum_asymptotic(_U, inv, 1.0)
    bip = q * e / _SQRT_PI * _sum_asymptotic(_V, inv, 1.0)
    if math.isinf(bi) or math.isinf(bip):
        raise AiryOverflowError(f"Bi({x!r}) overflows double precision")
    return bi, bip


def _asymptotic_negative(x):
    z = -x
    zeta = 2.0 / 3.0 * z**1.5
    inv = 1.0 / zeta
    q = z**0.25
    phase = zeta - math.pi / 4.0
    c, s = math.cos(phase), math.sin(phase)
    u_even = _sum_asymptotic(_U, inv, -1.0, 0, 2)
    u_odd = _sum_asymptotic(_U, inv, -1.0, 1, 2)
    v_even = _sum_asymptotic(_V, inv, -1.0, 0, 2)
    v_odd = _sum_asymptotic(_V, inv, -1.0, 1, 2)
    amp = 1.0 / (_SQRT_PI * q)
    damp = q / _SQRT_PI
    return AiryValues(
        ai=amp * (c * u_even + s * u_odd),
        ai_prime=damp * (s * v_even - c * v_odd),
        bi=amp * (-s * u_even + c * u_odd),
        bi_prime=damp * (c * v_even + s * v_odd),
    )


def _build_anchors():
    n_side = int(round(_GRID_EDGE / _GRID_STEP))
    nodes = [i * _GRID_STEP for i in range(-n_side, n_side + 1)]
    zero = n_side
    ai = [0.0] * len(nodes)
    aip = [0.0] * len(nodes)
    bi = [0.0] * len(nodes)
    bip = [0.0] * len(nodes)
    ai[zero], aip[zero], bi[zero], bip[zero] = AI0, AIP0, BI0, BIP0

    for i in range(zero - 1, -1, -1):
        x0 = nodes[i + 1]
        ai[i], aip[i] = _taylor(x0, ai[i + 1], aip[i + 1], -_GRID_STEP)
        bi[i], bip[i] = _taylor(x0, bi[i + 1], bip[i + 1], -_GRID_STEP)
    for i in range(zero + 1, len(nodes)):
        x0 = nodes[i - 1]
        bi[i], bip[i] = _taylor(x0, bi[i - 1], bip[i - 1], _GRID_STEP)

    # Ai is recessive for x > 0: march inward from the asymptotic seed
    y, dy = _asymptotic_ai_positive(_AI_SEED)
    x = _AI_SEED
    while x > _GRID_EDGE + 1e-12:
        y, dy = _taylor(x, y, dy, -_GRID_STEP)
        x -= _GRID_STEP
    ai[-1], aip[-1] = y, dy
    for i in range(len(nodes) - 2, zero, -1):
        ai[i], aip[i] = _taylor(nodes[i + 1], ai[i + 1], aip[i + 1], -_GRID_STEP)
    return nodes, ai, aip, bi, bip


_NODES, _AI, _AIP, _BI, _BIP = _build_anchors()
_NODE_OFFSET = int(round(_GRID_EDGE / _GRID_STEP))


def _airy_taylor(x):
    i = int(round(x / _GRID_STEP)) + _NODE_OFFSET
    x0 = _NODES[i]
    h = x - x0
    if h == 0.0:
        return AiryValues(_AI[i], _AIP[i], _BI[i], _BIP[i])
    ai, aip = _taylor(x0, _AI[i], _AIP[i], h)
    bi, bip = _taylor(x0, _BI[i], _BIP[i], h)
    return AiryValues(ai, aip, bi, bip)


def _airy_asymptotic(x):
    if x > 0:
        ai, aip = _asymptotic_ai_positive(x)
        bi, bip = _asymptotic_bi_positive(x)
        return AiryValues(ai, aip, bi, bip)
    return _asymptotic_negative(x)


def airy(x: float) -> AiryValues:
    """Ai(x), Ai'(x), Bi(x), Bi'(x) for real ``x``.

    Raises
    ------
    AiryOverflowError
        If Bi(x) exceeds the double-precision range (x above about 104).
    ValueError
        For non-finite ``x``.
    """
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"airy argument must be finite, got {x!r}")
    if abs(x) <= X_SWITCH:
        return _airy_taylor(x)
    return _airy_asymptotic(x)
