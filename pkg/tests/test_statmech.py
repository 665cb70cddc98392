"""Partition functions, internal energies and heat capacities of the two-species gas."""

import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dragfall.dynamics import Formulation
from dragfall.specfun import dawson, erfi, ln_gamma
from dragfall.statmech import (
    EnsembleParams,
    Source,
    default_beta_grid,
    reference_params,
    frictionless_log_partition,
    heat_capacity,
    heat_capacity_oracle,
    internal_energy,
    internal_energy_oracle,
    log_partition_closed,
    log_partition_oracle,
    oracle_factors,
    sweep_beta,
    thermo_point,
)

LOG, EXP = Formulation.LOG, Formulation.EXP
ALPHAS = [0.01, 0.03, 0.1, 0.2, 0.5]
BETAS = [0.1, 0.5, 1.0, 5.0, 50.0]


def _big_only(**kw):
    return EnsembleParams(n1=0, n2=1, **kw)


# ------------------------------------------------------------------ params


@pytest.mark.parametrize("kw", [dict(n1=-1), dict(n2=1.5), dict(m1=0.0), dict(m1=2.0),
                                dict(beta=0.0), dict(alpha=-1e-3), dict(L=math.inf), dict(h_planck=0.0)])
def test_ensemble_validation(kw):
    with pytest.raises(ValueError):
        EnsembleParams(**kw)


def test_reference_defaults():
    e = reference_params(3.0)
    assert (e.alpha, e.g, e.m1 / e.m2, e.beta) == (0.01, 1.0, 0.1, 3.0)
    assert (e.n1, e.n2, e.L, e.height, e.k_b, e.h_planck) == (1, 1, 1.0, 1.0, 1.0, 1.0)
    assert e.kappa == pytest.approx(50.0)
    assert EnsembleParams(alpha=0.0).kappa == math.inf


# ------------------------------------------------------------------ closed forms vs mpmath


@pytest.mark.parametrize("alpha,beta", [(0.01, 1.0), (0.3, 0.2), (0.1, 20.0)])
def test_big_particle_log_z_against_mpmath(alpha, beta):
    mp.mp.dps = 15
    m, g, L, h = 1.0, 1.0, 1.0, 1.0
    A, B = mp.mpf(alpha), mp.mpf(beta)
    trans = mp.quad(lambda q, p: mp.exp(-B * p * p / (2 * m) * mp.exp(2 * A * q / m)), [0, L], [-mp.inf, mp.inf])
    vt2 = m * g / A
    h1 = lambda q, p: m * vt2 * mp.log(mp.cosh(p / (m * mp.sqrt(vt2)))) + m * g * q
    h2 = lambda q, p: p * p / (2 * m) * mp.exp(2 * A * q / m) + m * m * g / (2 * A) * (1 - mp.exp(-2 * A * q / m))
    for form, H in ((LOG, h1), (EXP, h2)):
        vert = mp.quad(lambda q, p: mp.exp(-B * H(q, p)), [0, h], [-mp.inf, 0, mp.inf])
        want = float(2 * mp.log(trans) + mp.log(vert))
        got = log_partition_closed(form, _big_only(alpha=alpha, beta=beta))
        assert got == pytest.approx(want, abs=1e-9)


@pytest.mark.parametrize("beta", [0.05, 1.0, 30.0])
def test_small_particle_log_z_against_mpmath(beta):
    mp.mp.dps = 20
    m, g, L, h = 0.1, 1.0, 1.0, 1.0
    B = mp.mpf(beta)
    mom = mp.sqrt(2 * mp.pi * m / B)
    z = mp.quad(lambda q: mp.exp(-B * m * g * q), [0, h])
    want = float(3 * mp.log(mom) + 2 * mp.log(L) + mp.log(z))
    assert log_partition_closed(LOG, EnsembleParams(n1=1, n2=0, beta=beta)) == pytest.approx(want, abs=1e-12)


@pytest.mark.parametrize("alpha,beta", [(0.01, 1.0), (0.2, 0.3), (0.05, 40.0)])
def test_log_momentum_factor_is_sech_power_integral(alpha, beta):
    mp.mp.dps = 25
    m2, g = 1.0, 1.0
    kap = m2 * m2 * g / (2 * alpha)
    s = beta * kap
    vt = math.sqrt(m2 * g / alpha)
    integral = m2 * vt * mp.quad(lambda y: mp.sech(y) ** (2 * s), [-mp.inf, 0, mp.inf])
    closed = math.sqrt(math.pi * m2 ** 3 * g / alpha) * math.exp(ln_gamma(s) - ln_gamma(s + 0.5))
    assert closed == pytest.approx(float(integral), rel=1e-8)


@pytest.mark.parametrize("alpha,beta", [(0.01, 1.0), (0.2, 0.3), (0.5, 10.0)])
def test_exp_coordinate_integral_is_dawson_antiderivative(alpha, beta):
    # int_0^H e^{-alpha q/m} exp(-beta kappa (1 - e^{-2 alpha q/m})) dq = m/(alpha s1) * Phi
    mp.mp.dps = 25
    m, g, H = 1.0, 1.0, 1.0
    kap = m * m * g / (2 * alpha)
    s1 = math.sqrt(beta * kap)
    a = s1 * math.exp(-alpha * H / m)
    b0 = kap * -math.expm1(-2 * alpha * H / m)
    A = mp.mpf(alpha)
    direct = mp.quad(lambda q: mp.exp(-A * q / m) * mp.exp(-beta * kap * (1 - mp.exp(-2 * A * q / m))), [0, H])
    phi = dawson(s1) - math.exp(-beta * b0) * dawson(a)
    assert m / (alpha * s1) * phi == pytest.approx(float(direct), rel=1e-10)
    if s1 < 20:
        erfi_form = math.sqrt(math.pi) / 2 * math.exp(-s1 * s1) * (erfi(s1) - erfi(a))
        assert phi == pytest.approx(erfi_form, rel=1e-10)


# ------------------------------------------------------------------ closed vs package oracle


@pytest.mark.parametrize("form", list(Formulation))
def test_closed_matches_phase_space_quadrature_grid(form):
    worst = 0.0
    for a in ALPHAS:
        for b in BETAS:
            e = EnsembleParams(alpha=a, beta=b)
            worst = max(worst, abs(log_partition_closed(form, e) - log_partition_oracle(form, e)))
    assert worst < 1e-8


def test_oracle_gaussian_momentum_factor():
    f = oracle_factors(LOG, EnsembleParams(alpha=0.0, beta=2.0))
    assert f["small_momentum"] == pytest.approx(math.sqrt(2 * math.pi * 0.1 / 2.0), rel=1e-12)
    assert f["big_transverse"] == pytest.approx(math.sqrt(2 * math.pi / 2.0) * 1.0, rel=1e-12)
    assert f["small_xy"] == pytest.approx(1.0, rel=1e-14)


def test_oracle_survives_deep_cold():
    e = reference_params(1000.0)
    for form in Formulation:
        assert log_partition_oracle(form, e) == pytest.approx(log_partition_closed(form, e), abs=1e-8)


# ------------------------------------------------------------------ structure


@pytest.mark.parametrize("form", list(Formulation))
def test_factorisation(form):
    one_small = log_partition_closed(form, EnsembleParams(n1=1, n2=0, alpha=0.1, beta=2.0))
    one_big = log_partition_closed(form, EnsembleParams(n1=0, n2=1, alpha=0.1, beta=2.0))
    both = log_partition_closed(form, EnsembleParams(n1=2, n2=1, alpha=0.1, beta=2.0))
    assert both == pytest.approx(2 * one_small + one_big - math.log(2.0), abs=1e-12)


@pytest.mark.parametrize("form", list(Formulation))
@given(n1=st.integers(0, 50), n2=st.integers(0, 50), beta=st.floats(0.05, 100.0))
def test_extensivity(form, n1, n2, beta):
    e1 = EnsembleParams(n1=n1, n2=n2, beta=beta)
    e2 = EnsembleParams(n1=2 * n1, n2=2 * n2, beta=beta)
    strip = lambda e: log_partition_closed(form, e) + math.lgamma(e.n1 + 1) + math.lgamma(e.n2 + 1)
    assert strip(e2) == pytest.approx(2 * strip(e1), rel=1e-12, abs=1e-10)


def test_planck_constant_enters_once_per_degree_of_freedom():
    base = log_partition_closed(LOG, EnsembleParams(n1=2, n2=3))
    scaled = log_partition_closed(LOG, EnsembleParams(n1=2, n2=3, h_planck=2.0))
    assert base - scaled == pytest.approx(15 * math.log(2.0), rel=1e-14)


@pytest.mark.parametrize("beta", [0.1, 1.0, 10.0, 100.0])
def test_frictionless_limit(beta):
    e = EnsembleParams(alpha=1e-8, beta=beta)
    ref = frictionless_log_partition(e)
    for form in Formulation:
        assert log_partition_closed(form, e) == pytest.approx(ref, abs=1e-6)
        assert log_partition_closed(form, EnsembleParams(alpha=0.0, beta=beta)) == pytest.approx(ref, abs=1e-13)


# ------------------------------------------------------------------ derivative chain


@pytest.mark.parametrize("form", list(Formulation))
@pytest.mark.parametrize("alpha,beta", [(0.01, 0.1), (0.01, 1.0), (0.01, 1000.0), (0.2, 5.0), (0.5, 50.0)])
def test_energy_and_heat_capacity_chain(form, alpha, beta):
    e = EnsembleParams(alpha=alpha, beta=beta)
    assert internal_energy(form, e) == pytest.approx(internal_energy_oracle(form, e), rel=1e-6)
    assert heat_capacity(form, e) == pytest.approx(heat_capacity_oracle(form, e), rel=1e-5)


@pytest.mark.parametrize("beta", [0.1, 1.0, 10.0, 1000.0])
def test_formulations_coincide_without_drag(beta):
    e = EnsembleParams(alpha=1e-8, beta=beta)
    for q in (log_partition_closed, internal_energy, heat_capacity):
        assert q(LOG, e) == pytest.approx(q(EXP, e), rel=1e-6)


def test_high_temperature_limits():
    # the container confines every coordinate, so only momenta survive as
    # beta -> 0; a ln cosh momentum is linear at large |p| and carries a full k
    e = reference_params(1e-5)
    assert heat_capacity(LOG, e) == pytest.approx(3.5, abs=1e-5)
    assert heat_capacity(EXP, e) == pytest.approx(3.0, abs=1e-5)
    assert heat_capacity(LOG, e) - heat_capacity(EXP, e) > 0.4


def test_energy_diverges_like_inverse_beta():
    us = [internal_energy(EXP, reference_params(b)) for b in (1e-4, 1e-5)]
    slope = math.log(us[1] / us[0]) / math.log(10.0)
    assert slope == pytest.approx(1.0, abs=1e-3)


@given(alpha=st.floats(1e-6, 1.0), beta=st.floats(1e-3, 1e4))
def test_heat_capacity_positive(alpha, beta):
    e = EnsembleParams(alpha=alpha, beta=beta)
    for form in Formulation:
        c = heat_capacity(form, e)
        assert math.isfinite(c) and c > 0


def test_thermo_point_fields():
    e = reference_params(2.0)
    p = thermo_point(EXP, e)
    assert p.source is Source.CLOSED
    assert p.formulation is EXP
    assert p.beta == 2.0
    assert (p.log_z, p.u, p.c_v) == (log_partition_closed(EXP, e), internal_energy(EXP, e), heat_capacity(EXP, e))


# ------------------------------------------------------------------ sweep


@pytest.fixture(scope="module")
def ref_sweep():
    return sweep_beta(reference_params(), default_beta_grid())


def test_default_grid():
    g = default_beta_grid()
    assert g[0] == pytest.approx(0.1) and g[-1] == pytest.approx(1e4)
    assert len(g) == 61


def test_sweep_rows_are_validated(ref_sweep):
    assert ref_sweep.flagged == []
    assert all(r.oracle_dev < 1e-5 for r in ref_sweep.rows)
    assert all(r.abs_delta_cv > 0 for r in ref_sweep.rows)


def test_sweep_single_crossover(ref_sweep):
    assert len(ref_sweep.crossovers) == 1
    b = ref_sweep.crossovers[0]
    assert 1.0 < b < 100.0
    e = reference_params()
    lo = heat_capacity(EXP, e.with_beta(b * 0.99)) - heat_capacity(LOG, e.with_beta(b * 0.99))
    hi = heat_capacity(EXP, e.with_beta(b * 1.01)) - heat_capacity(LOG, e.with_beta(b * 1.01))
    assert lo < 0 < hi


def test_sweep_difference_decays_at_low_temperature(ref_sweep):
    # measured behaviour: the difference shrinks roughly like 1/beta at the cold end
    tail = ref_sweep.rows[-12:]
    d = [r.abs_delta_cv for r in tail]
    assert all(b < a for a, b in zip(d, d[1:]))
    scaled = [r.abs_delta_cv * r.beta for r in tail]
    assert max(scaled) / min(scaled) < 1.1


def test_sweep_vanishes_without_drag():
    res = sweep_beta(EnsembleParams(alpha=1e-8), default_beta_grid(0.1, 1e4, 4))
    assert max(r.abs_delta_cv for r in res.rows) < 1e-6


def test_sweep_flags_disagreement():
    # an impossible tolerance flags every row instead of dropping it
    grid = [1.0, 2.0, 4.0]
    res = sweep_beta(reference_params(), grid, cv_tol=1e-30)
    assert res.flagged == grid
    assert [r.beta for r in res.rows] == grid


@pytest.mark.parametrize("grid", [[], [1.0, 1.0], [2.0, 1.0], [0.0, 1.0]])
def test_sweep_grid_validation(grid):
    with pytest.raises(ValueError):
        sweep_beta(reference_params(), grid)
