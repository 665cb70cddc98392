"""Canonical ensemble of small free particles plus big particles with drag.

The system is N1 small particles (mass m1, free fall, no drag) and N2 big
particles (mass m2) in a pipe of cross-section L x L and height ``height``.
The big particles carry the exponential transverse Hamiltonian on x and y
and one of the two vertical Hamiltonians (LOG or EXP) on z.  The Hamiltonian
is separable, so

    ln Z = N1 ln f_small + N2 (2 ln f_trans + ln f_vert) - ln N1! - ln N2! - 3 N ln h

with one-particle phase-space factors:

    f_small = L^2 (2 pi m1 / beta)^{3/2} (1 - e^{-beta m1 g H}) / (beta m1 g)
    f_trans = sqrt(2 pi m2 / beta) (m2 / alpha) (1 - e^{-alpha L / m2})
    f_vert  (LOG) = sqrt(pi m2^3 g / alpha) Gamma(s) / Gamma(s + 1/2)
                    * (1 - e^{-beta m2 g H}) / (beta m2 g),      s = beta kappa
    f_vert  (EXP) = sqrt(2 pi m2 / beta) m2 / (alpha s1) * Phi(beta)

where ``kappa = m2^2 g / (2 alpha)``, ``s1 = sqrt(beta kappa)``,
``a = s1 e^{-alpha H / m2}``, ``b0 = kappa (1 - e^{-2 alpha H / m2})`` and

    Phi = D(s1) - e^{-beta b0} D(a)

with D Dawson's integral.  Phi equals ``s1 e^{-s1^2} int_a^s1 e^{t^2} dt``,
i.e. ``sqrt(pi)/2 e^{-s1^2} (erfi(s1) - erfi(a))``, so the erfi form is
recovered exactly; the Dawson form stays finite for any beta.

Every factor is handled as a jet ``(ln F, d ln F/d beta, d^2 ln F/d beta^2)``
so that U = -d ln Z/d beta and C_V = k beta^2 d^2 ln Z/d beta^2 come from the
same closed forms.  Each factor is cross-checked against direct phase-space
quadrature in :func:`log_partition_oracle`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from .dynamics import Formulation, MediumParams
from .mechanics import CanonicalState, hamiltonian
from .specfun import (
    QuadratureSpec,
    dawson_derivatives,
    digamma_diff_half,
    integrate_1d,
    ln_gamma_ratio_half,
    trigamma_diff_half,
)

__all__ = [
    "EnsembleParams",
    "ThermoPoint",
    "Source",
    "SweepRow",
    "SweepResult",
    "reference_params",
    "log_partition_closed",
    "log_partition_oracle",
    "frictionless_log_partition",
    "internal_energy",
    "internal_energy_oracle",
    "heat_capacity",
    "heat_capacity_oracle",
    "thermo_point",
    "sweep_beta",
    "default_beta_grid",
]


class Source(str, Enum):
    CLOSED = "closed"
    ORACLE = "oracle"


@dataclass(frozen=True)
class EnsembleParams:
    """Two-species ensemble; defaults are natural units with a light-to-heavy mass ratio of 0.1."""

    n1: int = 1
    n2: int = 1
    m1: float = 0.1
    m2: float = 1.0
    alpha: float = 0.01
    g: float = 1.0
    L: float = 1.0
    height: float = 1.0
    beta: float = 1.0
    k_b: float = 1.0
    h_planck: float = 1.0

    def __post_init__(self):
        for name in ("n1", "n2"):
            v = getattr(self, name)
            if int(v) != v or v < 0:
                raise ValueError(f"{name} must be a non-negative integer")
        for name in ("m1", "m2", "g", "L", "height", "beta", "k_b", "h_planck"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be positive and finite, got {v}")
        if not (math.isfinite(self.alpha) and self.alpha >= 0):
            raise ValueError("alpha must be non-negative")
        if not self.m2 > self.m1:
            raise ValueError("the big particle must be heavier (m2 > m1)")

    def with_beta(self, beta: float) -> "EnsembleParams":
        return replace(self, beta=float(beta))

    @property
    def kappa(self) -> float:
        """m2^2 g / (2 alpha); infinite at alpha = 0."""
        return math.inf if self.alpha == 0 else self.m2 * self.m2 * self.g / (2.0 * self.alpha)


def reference_params(beta: float = 1.0) -> EnsembleParams:
    """alpha = 0.01, g = 1, m1/m2 = 0.1 with m2 = N1 = N2 = L = height = k = h = 1."""
    return EnsembleParams(beta=beta)


@dataclass(frozen=True)
class ThermoPoint:
    beta: float
    log_z: float
    u: float
    c_v: float
    formulation: Formulation
    source: Source


# ---------------------------------------------------------------- jets

def _gauss(beta, m):
    """sqrt(2 pi m / beta)."""
    return 0.5 * math.log(2.0 * math.pi * m / beta), -0.5 / beta, 0.5 / (beta * beta)


def _baro(beta, eps, length):
    """length * (1 - e^{-x}) / x with x = beta * eps."""
    x = beta * eps
    em = -math.expm1(-x)                       # 1 - e^{-x}
    ex = math.exp(-x)
    ln = math.log(length) + math.log(em) - math.log(x)
    d = eps * ex / em - 1.0 / beta
    d2 = -eps * eps * ex / (em * em) + 1.0 / (beta * beta)
    return ln, d, d2


def _add(*jets):
    return tuple(math.fsum(j[i] for j in jets) for i in range(3))


def _scale(c, jet):
    return tuple(c * v for v in jet)


def _small(ens):
    b = ens.beta
    gx = _gauss(b, ens.m1)
    return _add(_scale(3.0, gx), (2.0 * math.log(ens.L), 0.0, 0.0),
                _baro(b, ens.m1 * ens.g * ens.height, ens.height))


def _transverse(ens):
    a, m = ens.alpha, ens.m2
    if a == 0:
        length = ens.L
    else:
        length = (m / a) * -math.expm1(-a * ens.L / m)
    return _add(_gauss(ens.beta, m), (math.log(length), 0.0, 0.0))


def _vertical_log(ens):
    b, m, g, h = ens.beta, ens.m2, ens.g, ens.height
    baro = _baro(b, m * g * h, h)
    if ens.alpha == 0:
        return _add(_gauss(b, m), baro)
    kap = ens.kappa
    s = b * kap
    mom = (0.5 * math.log(math.pi * m ** 3 * g / ens.alpha) + ln_gamma_ratio_half(s),
           kap * digamma_diff_half(s),
           kap * kap * trigamma_diff_half(s))
    return _add(mom, baro)


def _phi_jet(ens):
    """Phi and its first two beta-derivatives."""
    b, m, h = ens.beta, ens.m2, ens.height
    kap = ens.kappa
    s1 = math.sqrt(b * kap)
    a = s1 * math.exp(-ens.alpha * h / m)
    b0 = -kap * math.expm1(-2.0 * ens.alpha * h / m)
    e = math.exp(-b * b0)

    # x(beta) = c sqrt(beta): x' = x/(2 beta), x'' = -x/(4 beta^2)
    def chain(x):
        d, d1, d2 = dawson_derivatives(x)
        xp = x / (2.0 * b)
        xpp = -x / (4.0 * b * b)
        return d, d1 * xp, d2 * xp * xp + d1 * xpp

    f0, f1, f2 = chain(s1)
    g0, g1, g2 = chain(a)
    # T = e * G with e' = -b0 e
    t0 = e * g0
    t1 = e * (g1 - b0 * g0)
    t2 = e * (g2 - 2.0 * b0 * g1 + b0 * b0 * g0)
    return f0 - t0, f1 - t1, f2 - t2


def _vertical_exp(ens):
    b, m, g, h = ens.beta, ens.m2, ens.g, ens.height
    if ens.alpha == 0:
        return _add(_gauss(b, m), _baro(b, m * g * h, h))
    p0, p1, p2 = _phi_jet(ens)
    if not p0 > 0:
        raise ArithmeticError("vertical EXP factor is not positive; cannot take its logarithm")
    r1 = p1 / p0
    pref = math.log(m / (ens.alpha * math.sqrt(ens.kappa))) - 0.5 * math.log(b)
    return _add(_gauss(b, m), (pref, -0.5 / b, 0.5 / (b * b)),
                (math.log(p0), r1, p2 / p0 - r1 * r1))


def _combinatorial(ens):
    n = ens.n1 + ens.n2
    return -math.lgamma(ens.n1 + 1) - math.lgamma(ens.n2 + 1) - 3 * n * math.log(ens.h_planck)


def _total_jet(form: Formulation, ens: EnsembleParams):
    vert = _vertical_log(ens) if form is Formulation.LOG else _vertical_exp(ens)
    big = _add(_scale(2.0, _transverse(ens)), vert)
    parts = [(_combinatorial(ens), 0.0, 0.0)]
    if ens.n1:
        parts.append(_scale(ens.n1, _small(ens)))
    if ens.n2:
        parts.append(_scale(ens.n2, big))
    return _add(*parts)


def log_partition_closed(form: Formulation, ens: EnsembleParams) -> float:
    """ln Z from the closed-form one-particle factors."""
    return _total_jet(form, ens)[0]


def internal_energy(form: Formulation, ens: EnsembleParams) -> float:
    """U = -d ln Z / d beta (closed form)."""
    return -_total_jet(form, ens)[1]


def heat_capacity(form: Formulation, ens: EnsembleParams) -> float:
    """C_V = k beta^2 d^2 ln Z / d beta^2 (closed form)."""
    return ens.k_b * ens.beta ** 2 * _total_jet(form, ens)[2]


def frictionless_log_partition(ens: EnsembleParams) -> float:
    """ln Z of the same two species as ideal gases in gravity (alpha = 0)."""
    def one(m):
        eps = m * ens.g * ens.height
        x = ens.beta * eps
        return (1.5 * math.log(2.0 * math.pi * m / ens.beta) + 2.0 * math.log(ens.L)
                + math.log(ens.height) + math.log(-math.expm1(-x) / x))
    return ens.n1 * one(ens.m1) + ens.n2 * one(ens.m2) + _combinatorial(ens)


def thermo_point(form: Formulation, ens: EnsembleParams) -> ThermoPoint:
    j = _total_jet(form, ens)
    return ThermoPoint(ens.beta, j[0], -j[1], ens.k_b * ens.beta ** 2 * j[2], form, Source.CLOSED)


# ---------------------------------------------------------------- oracles

_ORACLE_SPEC = QuadratureSpec(rel_tol=1e-12, abs_tol=1e-300, max_subdivisions=2000)


class OracleError(RuntimeError):
    """A quadrature factor of the oracle failed to converge."""


def _q(f, a, b, spec, label):
    r = integrate_1d(f, a, b, spec)
    if not r.converged:
        raise OracleError(f"oracle factor '{label}' did not converge (error {r.error:.3g})")
    if not r.value > 0:
        raise OracleError(f"oracle factor '{label}' is not positive")
    return r.value


def _momentum_integral(energy, beta, sigma, spec, label):
    """int exp(-beta E(p)) dp over the real line, with p = sigma u."""
    return sigma * _q(lambda u: np.exp(-beta * energy(sigma * u)), -np.inf, np.inf, spec, label)


def _phase_integral(energy, beta, lo, hi, sigma, spec, label):
    """int_lo^hi dq int dp exp(-beta E(q, p)) as nested quadrature.

    The inner integrand is shifted by E(q, 0) so that it cannot underflow;
    the factor exp(-beta E(q, 0)) is restored in the outer integrand.
    """

    def outer(qs):
        vals = []
        for q in np.atleast_1d(qs):
            e0 = float(energy(q, 0.0))
            inner = _momentum_integral(lambda p, q=q, e0=e0: energy(q, p) - e0, beta, sigma, spec, label)
            vals.append(inner * math.exp(-beta * e0))
        return np.array(vals)

    return _q(outer, lo, hi, spec, label)


def oracle_factors(form: Formulation, ens: EnsembleParams,
                   spec: QuadratureSpec = _ORACLE_SPEC) -> dict:
    """One-particle phase-space factors by direct quadrature of exp(-beta H)."""
    b, g, h = ens.beta, ens.g, ens.height
    m1, m2, a = ens.m1, ens.m2, ens.alpha
    free1 = MediumParams(m1, g, 0.0)
    big = MediumParams(m2, g, a)
    s1, s2 = math.sqrt(m1 / b), math.sqrt(m2 / b)

    out = {}
    out["small_momentum"] = _momentum_integral(lambda p: p * p / (2.0 * m1), b, s1, spec, "small_momentum")
    out["small_xy"] = _q(lambda q: np.ones_like(q), 0.0, ens.L, spec, "small_xy")
    out["small_z"] = _q(lambda z: np.exp(-b * hamiltonian(Formulation.EXP, free1, CanonicalState(z, 0.0))),
                        0.0, h, spec, "small_z")

    def trans(q, p):
        return p * p / (2.0 * m2) * np.exp(2.0 * a * q / m2)

    out["big_transverse"] = _phase_integral(trans, b, 0.0, ens.L, s2, spec, "big_transverse")

    def vert(q, p):
        return hamiltonian(form, big, CanonicalState(q, p))

    out["big_vertical"] = _phase_integral(vert, b, 0.0, h, s2, spec, "big_vertical")
    return out


def log_partition_oracle(form: Formulation, ens: EnsembleParams,
                         spec: QuadratureSpec = _ORACLE_SPEC) -> float:
    """ln Z by direct quadrature of the one-particle phase-space integrals."""
    f = oracle_factors(form, ens, spec)
    ln_small = 3.0 * math.log(f["small_momentum"]) + 2.0 * math.log(f["small_xy"]) + math.log(f["small_z"])
    ln_big = 2.0 * math.log(f["big_transverse"]) + math.log(f["big_vertical"])
    return ens.n1 * ln_small + ens.n2 * ln_big + _combinatorial(ens)


def _stencil(fun, beta, rel_step):
    """5-point central first derivative of fun at beta."""
    h = beta * rel_step
    return (fun(beta - 2 * h) - 8 * fun(beta - h) + 8 * fun(beta + h) - fun(beta + 2 * h)) / (12.0 * h)


def internal_energy_oracle(form: Formulation, ens: EnsembleParams, rel_step: float = 1e-3) -> float:
    """-d ln Z/d beta by a 5-point stencil on :func:`log_partition_closed`."""
    return -_stencil(lambda b: log_partition_closed(form, ens.with_beta(b)), ens.beta, rel_step)


def heat_capacity_oracle(form: Formulation, ens: EnsembleParams, rel_step: float = 1e-3) -> float:
    """-k beta^2 dU/d beta by a 5-point stencil on :func:`internal_energy`."""
    du = _stencil(lambda b: internal_energy(form, ens.with_beta(b)), ens.beta, rel_step)
    return -ens.k_b * ens.beta ** 2 * du


# ---------------------------------------------------------------- sweep

@dataclass(frozen=True)
class SweepRow:
    beta: float
    log_z_log: float
    log_z_exp: float
    u_log: float
    u_exp: float
    cv_log: float
    cv_exp: float
    oracle_dev: float
    oracle_flag: bool

    @property
    def delta_cv(self) -> float:
        """C_V(EXP) - C_V(LOG)."""
        return self.cv_exp - self.cv_log

    @property
    def abs_delta_cv(self) -> float:
        return abs(self.delta_cv)


@dataclass(frozen=True)
class SweepResult:
    rows: list
    crossovers: list = field(default_factory=list)
    flagged: list = field(default_factory=list)


def default_beta_grid(lo: float = 0.1, hi: float = 1e4, points_per_decade: int = 12) -> list:
    n = int(round(math.log10(hi / lo) * points_per_decade)) + 1
    return [float(b) for b in np.logspace(math.log10(lo), math.log10(hi), n)]


def _delta_cv(ens, beta):
    e = ens.with_beta(beta)
    return heat_capacity(Formulation.EXP, e) - heat_capacity(Formulation.LOG, e)


def _refine(ens, lo, hi, f_lo, iters=80):
    """Bisection in log(beta) for a sign change of C_V(EXP) - C_V(LOG)."""
    for _ in range(iters):
        mid = math.sqrt(lo * hi)
        f_mid = _delta_cv(ens, mid)
        if f_mid == 0:
            return mid
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
        if hi / lo - 1.0 < 1e-13:
            break
    return math.sqrt(lo * hi)


def sweep_beta(ens_template: EnsembleParams, beta_grid, cv_tol: float = 1e-5) -> SweepResult:
    """Both heat capacities over ``beta_grid`` with sign-change detection.

    Each row's ``oracle_dev`` is the larger relative mismatch between the
    closed-form C_V and its finite-difference oracle; rows above ``cv_tol``
    are flagged (kept in the table, listed in ``flagged``).
    """
    grid = [float(b) for b in beta_grid]
    if not grid or any(b <= 0 for b in grid):
        raise ValueError("beta grid must be non-empty and positive")
    if any(b2 <= b1 for b1, b2 in zip(grid, grid[1:])):
        raise ValueError("beta grid must be strictly increasing")
    rows = []
    flagged = []
    for b in grid:
        e = ens_template.with_beta(b)
        pl = thermo_point(Formulation.LOG, e)
        pe = thermo_point(Formulation.EXP, e)
        dev = max(abs(heat_capacity_oracle(f, e) - p.c_v) / max(abs(p.c_v), 1e-300)
                  for f, p in ((Formulation.LOG, pl), (Formulation.EXP, pe)))
        flag = not dev <= cv_tol
        rows.append(SweepRow(b, pl.log_z, pe.log_z, pl.u, pe.u, pl.c_v, pe.c_v, dev, flag))
        if flag:
            flagged.append(b)
    crossings = []
    for r0, r1 in zip(rows, rows[1:]):
        d0, d1 = r0.delta_cv, r1.delta_cv
        if d0 == 0:
            crossings.append(r0.beta)
        elif d0 * d1 < 0:
            crossings.append(_refine(ens_template, r0.beta, r1.beta, d0))
    return SweepResult(rows, crossings, flagged)
