"""Airy function Ai, its derivative, and the zeros of Ai(-z).

On ``|x| <= 10`` values come from a short Taylor expansion about the nearest
node of a 0.25-spaced table; the table itself is filled by Taylor stepping
from exact data (Ai(0), Ai'(0) on the left; the large-argument expansion at
``x = 10`` marching leftward, the stable direction, on the right).  Beyond
``|x| = 10`` the Poincare asymptotic expansions are used; there the smallest
term is below 1e-17 of the leading one.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

__all__ = [
    "airy_ai",
    "airy_ai_prime",
    "airy_ai_and_prime",
    "airy_zero",
    "airy_zeros",
    "AI0",
    "AIP0",
    "X_MIN",
    "X_MAX",
]

# Ai(0) = 3^(-2/3)/Gamma(2/3), Ai'(0) = -3^(-1/3)/Gamma(1/3)
AI0 = 0.35502805388781723926
AIP0 = -0.25881940379280679840

X_MIN = -100.0
X_MAX = 100.0

_SPLIT = 10.0
_STEP = 0.25
_NODES = np.arange(-_SPLIT, _SPLIT + 0.5 * _STEP, _STEP)
_N_TAYLOR = 32
_N_ASYMP = 24

_SQRT_PI = math.sqrt(math.pi)


def _asymptotic_coeffs(n):
    u = [1.0]
    for k in range(1, n):
        u.append(u[-1] * (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / ((2 * k - 1) * 216.0 * k))
    v = [1.0] + [-(6 * k + 1) / (6 * k - 1) * u[k] for k in range(1, n)]
    return np.array(u), np.array(v)


_U, _V = _asymptotic_coeffs(2 * _N_ASYMP)


def _asymptotic_positive(x):
    """Ai, Ai' for x >= 10 (arrays)."""
    zeta = (2.0 / 3.0) * x * np.sqrt(x)
    inv = 1.0 / zeta
    su = np.zeros_like(x)
    sv = np.zeros_like(x)
    for k in range(_N_ASYMP - 1, -1, -1):
        sign = -1.0 if k % 2 else 1.0
        su = su * inv + sign * _U[k]
        sv = sv * inv + sign * _V[k]
    e = np.exp(-zeta) / (2.0 * _SQRT_PI)
    q = np.sqrt(np.sqrt(x))
    return e / q * su, -e * q * sv


def _asymptotic_negative(x):
    """Ai, Ai' for x <= -10 (arrays), via modulus/phase form at t = -x."""
    t = -x
    zeta = (2.0 / 3.0) * t * np.sqrt(t)
    inv2 = 1.0 / (zeta * zeta)
    pu = np.zeros_like(t)
    qu = np.zeros_like(t)
    pv = np.zeros_like(t)
    qv = np.zeros_like(t)
    half = _N_ASYMP // 2
    for k in range(half - 1, -1, -1):
        sign = -1.0 if k % 2 else 1.0
        pu = pu * inv2 + sign * _U[2 * k]
        qu = qu * inv2 + sign * _U[2 * k + 1]
        pv = pv * inv2 + sign * _V[2 * k]
        qv = qv * inv2 + sign * _V[2 * k + 1]
    qu = qu / zeta
    qv = qv / zeta
    phase = zeta + 0.25 * math.pi
    s, c = np.sin(phase), np.cos(phase)
    q = np.sqrt(np.sqrt(t))
    ai = (s * pu - c * qu) / (_SQRT_PI * q)
    aip = -q * (c * pv + s * qv) / _SQRT_PI
    return ai, aip


def _taylor(x0, y0, yp0, h, nterms=_N_TAYLOR):
    """Advance (Ai, Ai') from x0 by h using the ODE y'' = x y.

    Coefficients satisfy a_{k+2} = (x0 a_k + a_{k-1}) / ((k+2)(k+1)).
    Works elementwise on arrays.
    """
    a_prev2 = y0                    # a_{k-2}
    a_prev1 = yp0                   # a_{k-1}
    a_k = 0.5 * x0 * y0             # a_2
    hp = h                          # h^(k-1) while computing a_k
    y = y0 + yp0 * h
    yp = yp0 + 0.0 * h
    # loop invariant: a_k is coefficient k, hp = h^(k-1)
    for k in range(2, nterms):
        y = y + a_k * hp * h
        yp = yp + k * a_k * hp
        hp = hp * h
        a_next = (x0 * a_prev1 + a_prev2) / ((k + 1) * k)
        a_prev2, a_prev1, a_k = a_prev1, a_k, a_next
    return y, yp


@lru_cache(maxsize=None)
def _table():
    n = len(_NODES)
    ai = np.empty(n)
    aip = np.empty(n)
    i0 = int(round(_SPLIT / _STEP))
    ai[i0], aip[i0] = AI0, AIP0
    # left half: march from 0 towards -10
    for i in range(i0, 0, -1):
        ai[i - 1], aip[i - 1] = _taylor(_NODES[i], ai[i], aip[i], -_STEP, 40)
    # right half: start from the asymptotic value at +10 and march left;
    # the recessive solution grows in this direction, so errors damp out.
    a10, ap10 = _asymptotic_positive(np.array([_SPLIT]))
    ai[-1], aip[-1] = a10[0], ap10[0]
    for i in range(n - 1, i0 + 1, -1):
        ai[i - 1], aip[i - 1] = _taylor(_NODES[i], ai[i], aip[i], -_STEP, 40)
    ai.setflags(write=False)
    aip.setflags(write=False)
    return ai, aip


def airy_ai_and_prime(x):
    """Return ``(Ai(x), Ai'(x))`` for scalar or array ``x`` in [X_MIN, X_MAX]."""
    xa = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(xa)) or np.any(xa < X_MIN) or np.any(xa > X_MAX):
        raise ValueError(f"Airy argument outside supported range [{X_MIN}, {X_MAX}]")
    flat = np.atleast_1d(xa).ravel()
    ai = np.empty_like(flat)
    aip = np.empty_like(flat)

    mid = np.abs(flat) <= _SPLIT
    if np.any(mid):
        xm = flat[mid]
        tab_ai, tab_aip = _table()
        idx = np.rint((xm + _SPLIT) / _STEP).astype(int)
        x0 = _NODES[idx]
        ai[mid], aip[mid] = _taylor(x0, tab_ai[idx], tab_aip[idx], xm - x0)
    hi = flat > _SPLIT
    if np.any(hi):
        ai[hi], aip[hi] = _asymptotic_positive(flat[hi])
    lo = flat < -_SPLIT
    if np.any(lo):
        ai[lo], aip[lo] = _asymptotic_negative(flat[lo])

    if xa.ndim == 0:
        return float(ai[0]), float(aip[0])
    return ai.reshape(xa.shape), aip.reshape(xa.shape)


def airy_ai(x):
    """Airy function Ai(x)."""
    return airy_ai_and_prime(x)[0]


def airy_ai_prime(x):
    """Derivative Ai'(x)."""
    return airy_ai_and_prime(x)[1]


def _zero_estimate(n):
    t = 3.0 * math.pi * (4 * n - 1) / 8.0
    t2 = t ** -2
    return t ** (2.0 / 3.0) * (1 + t2 * (5.0 / 48 + t2 * (-5.0 / 36 + t2 * 77125.0 / 82944)))


@lru_cache(maxsize=None)
def airy_zero(n: int) -> float:
    """n-th positive root z_n of Ai(-z) = 0, for 1 <= n <= 100.

    Safeguarded Newton iteration inside a bracket around the asymptotic
    estimate.
    """
    if not isinstance(n, (int, np.integer)) or not 1 <= n <= 100:
        raise ValueError("Airy zero index must be an integer in [1, 100]")
    z = _zero_estimate(n)
    lo, hi = z - 0.15, z + 0.15
    flo, fhi = airy_ai(-lo), airy_ai(-hi)
    if flo * fhi > 0:
        raise RuntimeError(f"failed to bracket Airy zero {n}")
    for _ in range(100):
        f, fp = airy_ai_and_prime(-z)
        if f == 0.0:
            break
        # bracket update
        if (f > 0) == (flo > 0):
            lo, flo = z, f
        else:
            hi, fhi = z, f
        step = f / fp          # d/dz Ai(-z) = -Ai'(-z)  ->  z_new = z + f/fp
        z_new = z + step
        if not lo < z_new < hi and not hi < z_new < lo:
            z_new = 0.5 * (lo + hi)
        if abs(z_new - z) <= 2e-16 * z:
            z = z_new
            break
        z = z_new
    return z


def airy_zeros(n_max: int) -> np.ndarray:
    """First ``n_max`` zeros z_1 < ... < z_n_max."""
    return np.array([airy_zero(k) for k in range(1, n_max + 1)])
