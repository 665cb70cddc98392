"""Airy, Dawson/erfi and the Gamma family against mpmath/scipy oracles."""

import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import special as sp

from dragfall.specfun import (
    airy_ai,
    airy_ai_and_prime,
    airy_ai_prime,
    airy_zero,
    airy_zeros,
    dawson,
    dawson_derivatives,
    dawson_prime,
    digamma,
    digamma_diff_half,
    erfi,
    integrate_1d,
    ln_erfi,
    ln_gamma,
    ln_gamma_ratio_half,
    trigamma,
    trigamma_diff_half,
)
from dragfall.specfun.airy import AI0, AIP0

mp.mp.dps = 30

# ------------------------------------------------------------------ Airy


def test_ai_at_origin_matches_gamma_identity():
    exact = 3.0 ** (-2.0 / 3.0) / math.gamma(2.0 / 3.0)
    assert airy_ai(0.0) == pytest.approx(exact, rel=1e-15)
    assert AI0 == pytest.approx(0.3550280539, abs=1e-10)
    assert AIP0 == pytest.approx(-(3.0 ** (-1.0 / 3.0)) / math.gamma(1.0 / 3.0), rel=1e-15)


def test_ai_at_origin_by_integral_representation():
    # Ai(0) = (1/pi) int_0^inf cos(t^3/3) dt = 1/(pi) * Gamma(1/3) / (2 * 3^(1/6)) ... use mpmath quadosc
    val = mp.quadosc(lambda t: mp.cos(t ** 3 / 3), [0, mp.inf], zeros=lambda n: mp.cbrt(3 * mp.pi * n))
    assert airy_ai(0.0) == pytest.approx(float(val / mp.pi), rel=1e-12)


@pytest.mark.parametrize("x", np.linspace(-30.0, 20.0, 401))
def test_ai_matches_mpmath_on_supported_range(x):
    ai, aip = airy_ai_and_prime(x)
    ref, refp = mp.airyai(x), mp.airyai(x, derivative=1)
    # absolute error scaled by the local envelope; relative near zeros is meaningless
    env = float(mp.sqrt(ref ** 2 + (refp / max(1.0, abs(x)) ** 0.5) ** 2))
    assert abs(ai - float(ref)) <= 1e-13 * env
    envp = float(mp.sqrt(refp ** 2 + (ref * max(1.0, abs(x)) ** 0.5) ** 2))
    assert abs(aip - float(refp)) <= 1e-13 * envp


@pytest.mark.parametrize("x", [-29.3, -15.1, -7.7, -0.5, 0.3, 2.0, 5.0, 9.9, 10.1, 15.0, 20.0, 60.0])
def test_ai_relative_accuracy_away_from_zeros(x):
    ref = mp.airyai(x)
    assert abs(airy_ai(x) - float(ref)) <= 1e-12 * abs(float(ref))
    refp = mp.airyai(x, derivative=1)
    assert abs(airy_ai_prime(x) - float(refp)) <= 1e-12 * abs(float(refp))


def test_ai_decays_monotonically_for_positive_x():
    x = np.linspace(0.0, 20.0, 2001)
    ai = airy_ai(x)
    assert np.all(np.diff(ai) < 0)
    assert ai[-1] < 1e-26


# 9-point central stencil for f'' (error O(h^8))
_D2 = np.array([-1 / 560, 8 / 315, -1 / 5, 8 / 5, -205 / 72, 8 / 5, -1 / 5, 8 / 315, -1 / 560])


def test_ai_ode_residual_by_finite_differences():
    h = 0.02
    offs = np.arange(-4, 5) * h
    for x in np.linspace(-20.0, 8.0, 57):
        second = float(_D2 @ airy_ai(x + offs)) / (h * h)
        assert abs(second - x * airy_ai(x)) < 1e-10 * max(1.0, abs(x))


def test_ai_vectorised_and_scalar_agree():
    xs = np.array([-12.0, -1.0, 0.0, 3.0, 11.0])
    vec = airy_ai(xs)
    assert isinstance(vec, np.ndarray)
    assert all(vec[i] == airy_ai(float(x)) for i, x in enumerate(xs))
    assert isinstance(airy_ai(1.0), float)


@pytest.mark.parametrize("x", [-100.5, 100.5, math.nan])
def test_ai_outside_range_raises(x):
    with pytest.raises(ValueError):
        airy_ai(x)


def test_first_zeros():
    assert airy_zero(1) == pytest.approx(2.33810741, abs=1e-8)
    assert airy_zero(2) == pytest.approx(4.08794944, abs=1e-8)
    for n in (1, 2, 3, 10, 50, 100):
        assert airy_zero(n) == pytest.approx(-float(mp.airyaizero(n)), rel=1e-14)


def test_zero_residuals_and_ordering():
    z = airy_zeros(100)
    assert np.all(np.diff(z) > 0)
    assert max(abs(airy_ai(-zn)) for zn in z[:20]) < 1e-13
    assert max(abs(airy_ai(-zn)) for zn in z) < 1e-12


@pytest.mark.parametrize("n", [0, 101, -3])
def test_zero_index_range(n):
    with pytest.raises(ValueError):
        airy_zero(n)


def test_bouncer_normalisation_identity():
    z1 = airy_zero(1)
    r = integrate_1d(lambda z: airy_ai(z - z1) ** 2, 0.0, z1 + 40.0)
    assert r.value == pytest.approx(airy_ai_prime(-z1) ** 2, rel=1e-12)


# ------------------------------------------------------------------ Dawson / erfi


def test_dawson_and_erfi_vanish_at_origin():
    assert dawson(0.0) == 0.0
    assert erfi(0.0) == 0.0


def test_dawson_small_argument():
    assert dawson(1e-6) == pytest.approx(1e-6, rel=1e-12)


def test_dawson_defining_integral():
    r = integrate_1d(lambda t: np.exp(t * t), 0.0, 0.5)
    assert r.value == pytest.approx(math.exp(0.25) * dawson(0.5), rel=1e-12)


@given(st.floats(-40.0, 40.0))
def test_dawson_matches_scipy(x):
    ref = sp.dawsn(x)
    assert dawson(x) == pytest.approx(ref, rel=1e-12, abs=1e-300)


@given(st.floats(-26.0, 26.0))
def test_erfi_consistent_with_dawson(x):
    assert erfi(x) == pytest.approx(2 / math.sqrt(math.pi) * math.exp(x * x) * dawson(x), rel=1e-12)
    assert erfi(x) == pytest.approx(sp.erfi(x), rel=1e-12, abs=1e-300)


def test_erfi_one():
    assert erfi(1.0) == pytest.approx(1.6504257587975428, rel=1e-14)


def test_erfi_overflow_and_log_variant():
    with pytest.raises(OverflowError):
        erfi(26.5)
    assert ln_erfi(30.0) == pytest.approx(float(mp.log(mp.erfi(30))), rel=1e-14)
    assert ln_erfi(2.0) == pytest.approx(math.log(sp.erfi(2.0)), rel=1e-14)
    with pytest.raises(ValueError):
        ln_erfi(0.0)


@pytest.mark.parametrize("x", [0.3, 1.7, 4.0, 5.99, 6.01, 9.0, 50.0, 3e3, 2e5, -7.5])
def test_dawson_derivatives_against_mpmath(x):
    mp.mp.dps = 40
    f = lambda t: mp.exp(-t * t) * mp.quad(lambda u: mp.exp(u * u), [0, t])
    ref = [f(x), mp.diff(f, x), mp.diff(f, x, 2)] if abs(x) < 100 else None
    d = dawson_derivatives(x)
    if ref is None:
        # leading asymptotics, checked to the next order
        assert d[0] == pytest.approx(0.5 / x + 0.25 / x ** 3, rel=1e-12)
        assert d[1] == pytest.approx(-0.5 / x ** 2 - 0.75 / x ** 4, rel=1e-12)
        assert d[2] == pytest.approx(1.0 / x ** 3 + 3.0 / x ** 5, rel=1e-12)
    else:
        for got, want in zip(d, ref):
            assert got == pytest.approx(float(want), rel=1e-11, abs=1e-300)
    assert d[1] == pytest.approx(dawson_prime(x), rel=1e-9, abs=1e-12)
    mp.mp.dps = 30


# ------------------------------------------------------------------ Gamma family

EULER_GAMMA = 0.5772156649015329


def test_gamma_identities():
    assert ln_gamma(1.0) == pytest.approx(0.0, abs=1e-15)
    assert ln_gamma(2.0) == pytest.approx(0.0, abs=1e-15)
    assert digamma(1.0) == pytest.approx(-EULER_GAMMA, rel=1e-14)
    assert trigamma(1.0) == pytest.approx(math.pi ** 2 / 6, rel=1e-14)


def test_digamma_one_by_integral_representation():
    # psi(1) = int_0^inf (e^{-t}/t - e^{-t}/(1 - e^{-t})) dt
    f = lambda t: np.exp(-t) / t - np.exp(-t) / -np.expm1(-t)
    assert integrate_1d(f, 0.0, np.inf).value == pytest.approx(digamma(1.0), rel=1e-10)


def test_trigamma_one_by_series():
    s = math.fsum(1.0 / k ** 2 for k in range(1, 200001)) + 1.0 / 200000.5
    assert trigamma(1.0) == pytest.approx(s, rel=1e-12)


@given(st.floats(0.1, 50.0))
def test_digamma_recurrence(x):
    assert digamma(x + 1) - digamma(x) == pytest.approx(1.0 / x, rel=1e-12)


@given(st.floats(1e-3, 1e6))
def test_gamma_family_matches_scipy(x):
    assert ln_gamma(x) == pytest.approx(sp.gammaln(x), rel=1e-13, abs=1e-14)
    assert digamma(x) == pytest.approx(sp.digamma(x), rel=1e-13, abs=1e-14)
    assert trigamma(x) == pytest.approx(sp.polygamma(1, x), rel=1e-13)


def test_trigamma_is_second_log_derivative():
    h = 1e-4
    x = 2.7
    fd = (ln_gamma(x + h) - 2 * ln_gamma(x) + ln_gamma(x - h)) / h ** 2
    assert trigamma(x) == pytest.approx(fd, rel=1e-6)


@given(st.floats(0.05, 1e9))
def test_half_shift_differences(s):
    mp.mp.dps = 40
    sm = mp.mpf(s)
    want0 = mp.loggamma(sm) - mp.loggamma(sm + 0.5)
    want1 = mp.digamma(sm) - mp.digamma(sm + 0.5)
    want2 = mp.polygamma(1, sm) - mp.polygamma(1, sm + 0.5)
    mp.mp.dps = 30
    assert ln_gamma_ratio_half(s) == pytest.approx(float(want0), rel=1e-12, abs=1e-15)
    assert digamma_diff_half(s) == pytest.approx(float(want1), rel=1e-12)
    assert trigamma_diff_half(s) == pytest.approx(float(want2), rel=1e-12)


@pytest.mark.parametrize("fn", [ln_gamma, digamma, trigamma, ln_gamma_ratio_half])
@pytest.mark.parametrize("x", [0.0, -1.0, math.inf])
def test_gamma_family_rejects_bad_input(fn, x):
    with pytest.raises(ValueError):
        fn(x)
