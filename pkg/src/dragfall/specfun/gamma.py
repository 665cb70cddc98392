"""log-Gamma, digamma and trigamma for positive real arguments.

Also provides the half-shift differences lnG(s) - lnG(s + 1/2),
psi(s) - psi(s + 1/2) and psi1(s) - psi1(s + 1/2), which the partition
function needs for s up to ~1e9.  Evaluating those as differences of the
individual functions loses up to log10(s) digits; the helpers here expand
the difference itself.
"""

from __future__ import annotations

import math

__all__ = [
    "ln_gamma",
    "digamma",
    "trigamma",
    "ln_gamma_ratio_half",
    "digamma_diff_half",
    "trigamma_diff_half",
]

# Lanczos approximation, g = 7, n = 9.
_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993227684700473478,
    676.520368121885098567009190444019,
    -1259.13921672240287047156078755283,
    771.3234287776530788486528258894,
    -176.61502916214059906584551354,
    12.507343278686904814458936853,
    -0.13857109526572011689554707,
    9.984369578019570859563e-6,
    1.50563273514931155834e-7,
)
_HALF_LN_2PI = 0.5 * math.log(2.0 * math.pi)

# Bernoulli numbers B_2 .. B_16
_B2K = (1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730, 7 / 6, -3617 / 510)

_ASYMPTOTIC_FROM = 12.0


def _check(x):
    x = float(x)
    if not x > 0 or not math.isfinite(x):
        raise ValueError(f"argument must be positive and finite, got {x}")
    return x


def _stirling_ln_gamma(x):
    s = 0.0
    inv = 1.0 / x
    inv2 = inv * inv
    p = inv
    for k, b in enumerate(_B2K, start=1):
        s += b / (2 * k * (2 * k - 1)) * p
        p *= inv2
    return (x - 0.5) * math.log(x) - x + _HALF_LN_2PI + s


def ln_gamma(x: float) -> float:
    """ln Gamma(x) for x > 0."""
    x = _check(x)
    if x >= _ASYMPTOTIC_FROM:
        return _stirling_ln_gamma(x)
    if x < 0.5:
        return ln_gamma(x + 1.0) - math.log(x)
    xm = x - 1.0
    a = _LANCZOS[0]
    for i in range(1, 9):
        a += _LANCZOS[i] / (xm + i)
    t = xm + _LANCZOS_G + 0.5
    return _HALF_LN_2PI + (xm + 0.5) * math.log(t) - t + math.log(a)


def digamma(x: float) -> float:
    """psi(x) = d ln Gamma / dx for x > 0 (recurrence, then asymptotic series)."""
    x = _check(x)
    acc = 0.0
    while x < _ASYMPTOTIC_FROM:
        acc -= 1.0 / x
        x += 1.0
    inv2 = 1.0 / (x * x)
    s = 0.0
    p = inv2
    for k, b in enumerate(_B2K, start=1):
        s += b / (2 * k) * p
        p *= inv2
    return acc + math.log(x) - 0.5 / x - s


def trigamma(x: float) -> float:
    """psi_1(x) = d^2 ln Gamma / dx^2 for x > 0."""
    x = _check(x)
    acc = 0.0
    while x < _ASYMPTOTIC_FROM:
        acc += 1.0 / (x * x)
        x += 1.0
    inv = 1.0 / x
    inv2 = inv * inv
    s = 0.0
    p = inv2 * inv
    for b in _B2K:
        s += b * p
        p *= inv2
    return acc + inv + 0.5 * inv2 + s


def ln_gamma_ratio_half(s: float) -> float:
    """ln Gamma(s) - ln Gamma(s + 1/2), accurate for large s."""
    s = _check(s)
    if s < _ASYMPTOTIC_FROM:
        return ln_gamma(s) - ln_gamma(s + 0.5)
    t = s + 0.5
    # (s - 1/2) ln s - s - [s ln t - t] with s ln t = s ln s + s log1p(1/(2s))
    main = -0.5 * math.log(s) - s * math.log1p(0.5 / s) + 0.5
    corr = 0.0
    for k, b in enumerate(_B2K, start=1):
        c = b / (2 * k * (2 * k - 1))
        corr += c * (s ** (1 - 2 * k) - t ** (1 - 2 * k))
    return main + corr


def digamma_diff_half(s: float) -> float:
    """psi(s) - psi(s + 1/2), accurate for large s."""
    s = _check(s)
    if s < _ASYMPTOTIC_FROM:
        return digamma(s) - digamma(s + 0.5)
    t = s + 0.5
    main = -math.log1p(0.5 / s) - 0.25 / (s * t)
    corr = 0.0
    for k, b in enumerate(_B2K, start=1):
        corr -= b / (2 * k) * (s ** (-2 * k) - t ** (-2 * k))
    return main + corr


def trigamma_diff_half(s: float) -> float:
    """psi_1(s) - psi_1(s + 1/2), accurate for large s."""
    s = _check(s)
    if s < _ASYMPTOTIC_FROM:
        return trigamma(s) - trigamma(s + 0.5)
    t = s + 0.5
    main = 0.5 / (s * t) + 0.25 * (s + t) / (s * s * t * t)
    corr = 0.0
    for k, b in enumerate(_B2K, start=1):
        corr += b * (s ** (-2 * k - 1) - t ** (-2 * k - 1))
    return main + corr
