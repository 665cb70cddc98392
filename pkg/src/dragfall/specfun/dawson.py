"""Dawson's integral and the imaginary error function.

``dawson(x) = exp(-x^2) * int_0^x exp(t^2) dt`` and
``erfi(x) = 2/sqrt(pi) * exp(x^2) * dawson(x)``.

For ``|x| <= 6`` the integral is summed as the positive series
``sum x^(2k+1) / (k! (2k+1))`` (no cancellation) and scaled by
``exp(-x^2)``; beyond that the asymptotic series
``1/(2x) * sum (2k-1)!! / (2x^2)^k`` is truncated at its smallest term,
which is below 1e-16 there.
"""

from __future__ import annotations

import math

__all__ = ["dawson", "dawson_prime", "dawson_derivatives", "erfi", "ln_erfi", "ERFI_MAX"]

ERFI_MAX = 26.0
_SERIES_MAX = 6.0
_TWO_OVER_SQRT_PI = 2.0 / math.sqrt(math.pi)


def _dawson_pos(x: float) -> float:
    if x <= _SERIES_MAX:
        x2 = x * x
        term = x          # x^(2k+1)/k!
        total = x
        k = 0
        while True:
            k += 1
            term *= x2 / k
            add = term / (2 * k + 1)
            total += add
            if add <= 1e-17 * total:
                break
        return total * math.exp(-x2)
    inv = 1.0 / (2.0 * x * x)
    term = 1.0
    total = 1.0
    k = 1
    while True:
        nxt = term * (2 * k - 1) * inv
        if nxt >= term or nxt <= 1e-17 * total:
            break
        term = nxt
        total += term
        k += 1
    return total / (2.0 * x)


def dawson(x: float) -> float:
    """Dawson's integral F(x); odd in x."""
    x = float(x)
    if x == 0.0:
        return 0.0
    if not math.isfinite(x):
        return 0.0 if math.isinf(x) else math.nan
    return math.copysign(_dawson_pos(abs(x)), x)


def dawson_prime(x: float) -> float:
    """F'(x) = 1 - 2 x F(x)."""
    return 1.0 - 2.0 * x * dawson(x)


def _asymptotic_jet(x: float):
    """D, D', D'' from the asymptotic series term by term (x > 6).

    With c_k = (2k-1)!!/2^(k+1), D = sum c_k x^-(2k+1).  Differentiating the
    series avoids the cancellation in 1 - 2xD and -2x + (4x^2 - 2)D, which
    would otherwise lose about x^2 and x^4 in relative accuracy.
    """
    inv2 = 1.0 / (x * x)
    c = 0.5 / x                                  # c_k x^-(2k+1)
    d0 = d1 = d2 = 0.0
    k = 0
    while True:
        n = 2 * k + 1
        d0 += c
        d1 -= n * c / x
        d2 += n * (n + 1) * c * inv2
        nxt = c * (2 * k + 1) * 0.5 * inv2
        if nxt >= c or nxt <= 1e-18 * d0:
            break
        c = nxt
        k += 1
    return d0, d1, d2


def dawson_derivatives(x: float) -> tuple[float, float, float]:
    """Return (D(x), D'(x), D''(x)), accurate to near machine precision."""
    x = float(x)
    ax = abs(x)
    if ax > _SERIES_MAX:
        d0, d1, d2 = _asymptotic_jet(ax)
        return math.copysign(d0, x), d1, math.copysign(d2, x)
    d = dawson(x)
    return d, 1.0 - 2.0 * x * d, -2.0 * x + (4.0 * x * x - 2.0) * d


def erfi(x: float) -> float:
    """Imaginary error function, valid for ``|x| <= ERFI_MAX``.

    Raises
    ------
    OverflowError
        Beyond ``ERFI_MAX``; use :func:`ln_erfi` there.
    """
    x = float(x)
    if abs(x) > ERFI_MAX:
        raise OverflowError(f"erfi({x}) overflows the direct form; use ln_erfi")
    return _TWO_OVER_SQRT_PI * math.exp(x * x) * dawson(x)


def ln_erfi(x: float) -> float:
    """Natural log of erfi(x) for x > 0, finite for any size of x."""
    x = float(x)
    if x <= 0:
        raise ValueError("ln_erfi requires x > 0")
    return math.log(_TWO_OVER_SQRT_PI) + x * x + math.log(dawson(x))
