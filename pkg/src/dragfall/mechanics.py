"""Lagrangians, momenta and Hamiltonians of the two formulations.

Both Lagrangians come from ``L = v * int K/v^2 dv`` applied to the two
constants of motion; the gauge term linear in ``v`` is the one fixed by the
closed forms below.  Expressions are rearranged (``expm1``, ``log1p``,
positive series) so that ``alpha -> 0`` reproduces the frictionless values
without cancellation; ``alpha == 0`` is an explicit branch.

Hamilton's equations use hand-derived partial derivatives:

LOG:  dx/dt = v_T tanh(p / (m v_T)),            dp/dt = -m g
EXP:  dx/dt = (p/m) e^{2 alpha x/m},
      dp/dt = -(alpha p^2/m^2) e^{2 alpha x/m} - m g e^{-2 alpha x/m}
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dynamics import (
    Formulation,
    MediumParams,
    PhaseState,
    _check_log_domain,
    _log_cosh,
    solve_ode,
)

__all__ = [
    "CanonicalState",
    "lagrangian",
    "momentum",
    "velocity_from_momentum",
    "hamiltonian",
    "hamiltonian_first_order",
    "hamilton_equations",
    "hamilton_flow",
    "legendre_residual",
    "natural_units",
]

_L1_SERIES_TERMS = 60


@dataclass(frozen=True)
class CanonicalState:
    x: float
    p: float


def _artanh(u):
    return 0.5 * (np.log1p(u) - np.log1p(-u))


def _l1_kinetic_ratio(w):
    """L1 kinetic part divided by m v^2, as a function of w = alpha v^2/(m g).

    Equals artanh(sqrt w)/sqrt w + ln(1 - w)/(2 w); for w < 1/2 it is summed
    as sum_k w^k / (2 (2k+1)(k+1)), whose terms are all positive.
    """
    w = np.asarray(w, dtype=float)
    series = np.zeros_like(w)
    for k in range(_L1_SERIES_TERMS - 1, -1, -1):
        series = series * w + 1.0 / (2.0 * (2 * k + 1) * (k + 1))
    with np.errstate(divide="ignore", invalid="ignore"):
        u = np.sqrt(w)
        direct = _artanh(u) / u + np.log1p(-w) / (2.0 * w)
    return np.where(w < 0.5, series, direct)


def lagrangian(form: Formulation, params: MediumParams, state: PhaseState):
    """L1 (LOG) or L2 (EXP) in joules.

    L1 = m sqrt(m g/alpha) v artanh(sqrt(alpha/(m g)) v)
         + (m^2 g/2 alpha) ln(1 - alpha v^2/(m g)) - m g x
    L2 = (m^2/2 alpha)(g + alpha v^2/m) e^{-2 alpha x/m} - m^2 g/(2 alpha)
    """
    m, g, a = params.m, params.g, params.alpha
    x, v = state.x, state.v
    if a == 0:
        return 0.5 * m * v * v - m * g * x
    if form is Formulation.LOG:
        _check_log_domain(params, v)
        w = a * v * v / (m * g)
        out = m * v * v * _l1_kinetic_ratio(w) - m * g * x
        return out if np.ndim(out) else float(out)
    r = -2.0 * a * x / m
    return 0.5 * m * v * v * np.exp(r) + (m * m * g / (2.0 * a)) * np.expm1(r)


def momentum(form: Formulation, params: MediumParams, state: PhaseState):
    """Generalised momentum p = dL/dv.

    LOG: m sqrt(m g/alpha) artanh(sqrt(alpha/(m g)) v);  EXP: m v e^{-2 alpha x/m}.
    """
    m, g, a = params.m, params.g, params.alpha
    x, v = state.x, state.v
    if a == 0:
        return m * v
    if form is Formulation.LOG:
        _check_log_domain(params, v)
        vt = params.terminal_speed
        return m * vt * _artanh(np.asarray(v) / vt) + 0.0
    return m * v * np.exp(-2.0 * a * x / m)


def velocity_from_momentum(form: Formulation, params: MediumParams, x, p):
    """Inverse of :func:`momentum` at fixed ``x``."""
    m, a = params.m, params.alpha
    if a == 0:
        return p / m
    if form is Formulation.LOG:
        vt = params.terminal_speed
        return vt * np.tanh(p / (m * vt))
    return (p / m) * np.exp(2.0 * a * x / m)


def hamiltonian(form: Formulation, params: MediumParams, state: CanonicalState):
    """Exact Hamiltonians H1 (LOG) and H2 (EXP) in joules.

    H1 = -(m^2 g/2 alpha) ln[1 - tanh^2(p/(m v_T))] + m g x
       = (m^2 g/alpha) ln cosh(p/(m v_T)) + m g x
    H2 = (p^2/2m) e^{2 alpha x/m} + (m^2 g/2 alpha)(1 - e^{-2 alpha x/m})
    """
    m, g, a = params.m, params.g, params.alpha
    x, p = state.x, state.p
    if a == 0:
        return p * p / (2.0 * m) + m * g * x
    if form is Formulation.LOG:
        vt = params.terminal_speed
        return m * vt * vt * _log_cosh(np.asarray(p) / (m * vt)) + m * g * x
    r = 2.0 * a * x / m
    return p * p / (2.0 * m) * np.exp(r) - (m * m * g / (2.0 * a)) * np.expm1(-r)


def hamiltonian_first_order(form: Formulation, params: MediumParams, state: CanonicalState):
    """Hamiltonians truncated at first order in alpha.

    LOG: p^2/2m + m g x - alpha p^4 / (12 m^4 g)
    EXP: p^2/2m + m g x + alpha (x p^2/m^2 - g x^2)
    """
    m, g, a = params.m, params.g, params.alpha
    x, p = state.x, state.p
    h0 = p * p / (2.0 * m) + m * g * x
    if form is Formulation.LOG:
        return h0 - a * p ** 4 / (12.0 * m ** 4 * g)
    return h0 + a * (x * p * p / (m * m) - g * x * x)


def hamilton_equations(form: Formulation, params: MediumParams, state: CanonicalState):
    """Return ``(dH/dp, -dH/dx)`` from closed-form partial derivatives."""
    m, g, a = params.m, params.g, params.alpha
    x, p = state.x, state.p
    if a == 0:
        return p / m, -m * g + 0.0 * x
    if form is Formulation.LOG:
        vt = params.terminal_speed
        return vt * np.tanh(p / (m * vt)), -m * g + 0.0 * x
    e = np.exp(2.0 * a * x / m)
    return (p / m) * e, -(a * p * p / (m * m)) * e - m * g / e


def hamilton_flow(form: Formulation, params: MediumParams, initial: CanonicalState,
                  t_end: float, tol: float = 1e-10, t_eval=None):
    """Integrate Hamilton's equations; returns ``(t, x, p)`` arrays.

    With ``t_eval`` only the samples at those times are returned.
    """

    def fun(_t, y):
        dx, dp = hamilton_equations(form, params, CanonicalState(y[0], y[1]))
        return np.array([dx, dp])

    t, y, _ = solve_ode(fun, (initial.x, initial.p), t_end, tol, t_eval)
    if t_eval is not None:
        keep = np.isin(t, np.asarray(t_eval, dtype=float))
        t, y = t[keep], y[keep]
    return t, y[:, 0], y[:, 1]


def natural_units(alpha: float = 0.0) -> MediumParams:
    """m = g = 1 parameters, the default used in the test-suite."""
    return MediumParams(1.0, 1.0, alpha)


def legendre_residual(form: Formulation, params: MediumParams, state: PhaseState) -> float:
    """Relative mismatch between H(x, p(x, v)) and K(x, v)."""
    from .dynamics import constant_of_motion

    p = momentum(form, params, state)
    h = hamiltonian(form, params, CanonicalState(state.x, p))
    k = constant_of_motion(form, params, state)
    return float(abs(h - k) / max(abs(k), math.ulp(1.0)))
