"""Free fall with quadratic drag: equations of motion, constants of motion,
and an adaptive Dormand-Prince integrator with conservation diagnostics.

The equations are taken literally for every sign of ``v``::

    dx/dt = v,    dv/dt = -g + (alpha/m) v**2

so upward motion is accelerated by the "drag" term.  Every later formula
(Lagrangians, Hamiltonians, partition functions) is built on this literal
system, which is why it is kept.

Functions in this module accept numpy arrays in the ``PhaseState`` fields
unless noted otherwise.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "DomainError",
    "IntegrationError",
    "Formulation",
    "MediumParams",
    "PhaseState",
    "Trajectory",
    "rhs",
    "solve_ode",
    "integrate",
    "analytic_drop",
    "characteristic",
    "constant_of_motion",
]

# LOG-branch quantities are refused this close to the terminal speed.
DOMAIN_MARGIN = 1e-12
# Below this value of alpha v^2/(m g) the log is replaced by its series.
_SERIES_CUTOFF = 1e-8


class DomainError(ValueError):
    """A LOG-formulation quantity was requested at or beyond terminal speed."""


class IntegrationError(RuntimeError):
    """The adaptive integrator could not continue."""


class Formulation(enum.Enum):
    """Which of the two inequivalent descriptions to use.

    ``LOG`` is built on the logarithmic characteristic (superscript (1) in
    the constants of motion, Lagrangians and Hamiltonians); ``EXP`` on the
    exponential one (superscript (2)).
    """

    LOG = "log"
    EXP = "exp"


@dataclass(frozen=True)
class MediumParams:
    """Mass ``m`` (kg), gravity ``g`` (m/s^2), drag coefficient ``alpha`` (kg/m)."""

    m: float = 1.0
    g: float = 1.0
    alpha: float = 0.0

    def __post_init__(self):
        if not (self.m > 0 and math.isfinite(self.m)):
            raise ValueError("mass must be positive")
        if not (self.g > 0 and math.isfinite(self.g)):
            raise ValueError("g must be positive")
        if not (self.alpha >= 0 and math.isfinite(self.alpha)):
            raise ValueError("alpha must be non-negative")

    @property
    def terminal_speed(self) -> float:
        """sqrt(m g / alpha); infinite when alpha = 0."""
        if self.alpha == 0:
            return math.inf
        return math.sqrt(self.m * self.g / self.alpha)


@dataclass(frozen=True)
class PhaseState:
    x: float
    v: float


def _check_log_domain(params: MediumParams, v):
    if params.alpha == 0:
        return
    vt = params.terminal_speed
    if np.any(np.abs(v) >= vt * (1.0 - DOMAIN_MARGIN)):
        raise DomainError(
            f"|v| must stay below the terminal speed {vt:.6g} for the LOG formulation")


def neg_log1m_ratio(w):
    """-ln(1 - w)/w, with the w -> 0 limit handled by a short series."""
    w = np.asarray(w, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        direct = -np.log1p(-w) / np.where(w == 0, 1.0, w)
    series = 1.0 + w * (0.5 + w * (1.0 / 3.0 + w * 0.25))
    out = np.where(np.abs(w) < _SERIES_CUTOFF, series, direct)
    return out if out.ndim else float(out)


# ---------------------------------------------------------------------------
# Right-hand side and closed forms
# ---------------------------------------------------------------------------

def rhs(state: PhaseState, params: MediumParams):
    """Return ``(dx/dt, dv/dt) = (v, -g + alpha v^2/m)``."""
    v = state.v
    return v, -params.g + (params.alpha / params.m) * v * v


def analytic_drop(params: MediumParams, x0: float, t) -> PhaseState:
    """Exact solution for release from rest at ``x0``.

    ``v(t) = -v_T tanh(g t / v_T)`` and
    ``x(t) = x0 - (m/alpha) ln cosh(g t / v_T)``.
    """
    if params.alpha == 0:
        raise ValueError("analytic_drop needs alpha > 0; for alpha = 0 use "
                         "x0 - g t^2/2, v = -g t")
    vt = params.terminal_speed
    tau = params.g * np.asarray(t, dtype=float) / vt
    v = -vt * np.tanh(tau)
    x = x0 - (params.m / params.alpha) * _log_cosh(tau)
    if np.ndim(t) == 0:
        return PhaseState(float(x), float(v))
    return PhaseState(x, v)


def _log_cosh(y):
    """ln cosh(y) without cancellation at small |y| or overflow at large |y|."""
    y = np.abs(np.asarray(y, dtype=float))
    small = np.log1p(2.0 * np.sinh(0.5 * np.minimum(y, 20.0)) ** 2)
    large = y + np.log1p(np.exp(-2.0 * y)) - math.log(2.0)
    out = np.where(y < 20.0, small, large)
    return out if out.ndim else float(out)


def characteristic(form: Formulation, params: MediumParams, state: PhaseState):
    """Characteristic curves C1 (LOG) and C2 (EXP).

    C1 = -(m g / 2 alpha) ln(1 - alpha v^2/(m g)) + g x
    C2 = (1 - alpha v^2/(m g)) exp(-2 alpha x/m)
    """
    m, g, a = params.m, params.g, params.alpha
    x, v = state.x, state.v
    if form is Formulation.LOG:
        _check_log_domain(params, v)
        w = a * v * v / (m * g)
        return 0.5 * v * v * neg_log1m_ratio(w) + g * x
    return (1.0 - a * v * v / (m * g)) * np.exp(-2.0 * a * x / m)


def constant_of_motion(form: Formulation, params: MediumParams, state: PhaseState):
    """Energy-like constants of motion K1 (LOG) and K2 (EXP), in joules.

    K1 = m * C1,  K2 = -(m^2 g / 2 alpha) C2 + m^2 g / 2 alpha.
    Both reduce to m v^2/2 + m g x at alpha = 0.
    """
    m, g, a = params.m, params.g, params.alpha
    x, v = state.x, state.v
    if a == 0:
        return 0.5 * m * v * v + m * g * x
    if form is Formulation.LOG:
        _check_log_domain(params, v)
        w = a * v * v / (m * g)
        return 0.5 * m * v * v * neg_log1m_ratio(w) + m * g * x
    # rewritten with expm1 so the alpha -> 0 limit is exact
    r = -2.0 * a * x / m
    return 0.5 * m * v * v * np.exp(r) - (m * m * g / (2.0 * a)) * np.expm1(r)


# ---------------------------------------------------------------------------
# Adaptive Dormand-Prince 5(4)
# ---------------------------------------------------------------------------

_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_B4 = np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40])
_E = _B5 - _B4


def solve_ode(fun: Callable[[float, np.ndarray], np.ndarray], y0: Sequence[float],
              t_end: float, tol: float = 1e-10,
              t_eval: Sequence[float] | None = None,
              max_steps: int = 1_000_000):
    """Integrate ``y' = fun(t, y)`` from 0 to ``t_end``.

    Every accepted step satisfies ``max_i |err_i| / (tol (1 + |y_i|)) <= 1``.
    Steps are shortened to land exactly on each time in ``t_eval`` (and on
    ``t_end``), so those samples carry no interpolation error.

    Returns
    -------
    t : ndarray, shape (n,)
    y : ndarray, shape (n, dim)
    dy : ndarray, shape (n, dim)
        Derivatives at the samples, for Hermite dense output.
    """
    if not t_end > 0:
        raise ValueError("t_end must be positive")
    if not 0 < tol <= 1e-3:
        raise ValueError("tol must lie in (0, 1e-3]")
    evals = () if t_eval is None else np.asarray(t_eval, dtype=float).ravel()
    stops = sorted({float(s) for s in evals if 0 < s < t_end} | {float(t_end)})

    y = np.array(y0, dtype=float)
    t = 0.0
    f = np.asarray(fun(t, y), dtype=float)
    ts, ys, fs = [t], [y.copy()], [f.copy()]
    h = min(0.01 * t_end, tol ** 0.2 * (1.0 + np.max(np.abs(y))) / (np.max(np.abs(f)) + 1e-300))
    h = max(h, 1e-6 * t_end)
    k = np.empty((7, y.size))
    stop_i = 0
    for _ in range(max_steps):
        target = stops[stop_i]
        landing = t + h >= target * (1 - 1e-15)
        step = target - t if landing else h
        if step <= 16 * np.finfo(float).eps * max(abs(t), 1.0):
            raise IntegrationError(f"step size underflow at t = {t!r}")
        k[0] = f
        for i in range(1, 7):
            yi = y + step * (np.asarray(_A[i]) @ k[:i])
            k[i] = fun(t + _C[i] * step, yi)
        y_new = y + step * (_B5 @ k)
        err = step * (_E @ k)
        scale = tol * (1.0 + np.maximum(np.abs(y), np.abs(y_new)))
        err_norm = float(np.max(np.abs(err) / scale))
        if not np.all(np.isfinite(y_new)):
            err_norm = math.inf
        if err_norm <= 1.0:
            t = target if landing else t + step
            y = y_new
            f = k[6].copy()
            ts.append(t)
            ys.append(y.copy())
            fs.append(f.copy())
            if landing:
                stop_i += 1
                if stop_i == len(stops):
                    return np.array(ts), np.array(ys), np.array(fs)
            factor = 5.0 if err_norm == 0 else min(5.0, 0.9 * err_norm ** -0.2)
            h = max(h, step * factor) if landing else step * factor
        else:
            h = step * max(0.2, 0.9 * err_norm ** -0.25) if math.isfinite(err_norm) else 0.2 * step
    raise IntegrationError(f"maximum step count exceeded at t = {t!r}")


@dataclass
class Trajectory:
    """Samples of an integrated trajectory plus conservation diagnostics.

    ``k1_drift``/``k2_drift`` are ``max_t |K(t) - K(0)| / scale`` with
    ``scale = max(|K(0)|, max_t (m v^2/2 + m g |x|))``; the energy-sized floor
    keeps the measure meaningful when K(0) happens to vanish.  ``k1_drift``
    is NaN and ``k1_valid`` False if the run ever reached terminal speed.
    """

    params: MediumParams
    t: np.ndarray
    x: np.ndarray
    v: np.ndarray
    a: np.ndarray
    k1_drift: float
    k2_drift: float
    k1_valid: bool = True
    k1: np.ndarray | None = field(default=None, repr=False)
    k2: np.ndarray | None = field(default=None, repr=False)

    @property
    def samples(self) -> list[tuple[float, PhaseState]]:
        return [(float(t), PhaseState(float(x), float(v)))
                for t, x, v in zip(self.t, self.x, self.v)]

    def at(self, t: float) -> PhaseState:
        """Cubic Hermite interpolation between accepted steps."""
        if not self.t[0] <= t <= self.t[-1]:
            raise ValueError("time outside the integrated interval")
        i = int(np.searchsorted(self.t, t, side="right")) - 1
        i = min(i, len(self.t) - 2)
        t0, t1 = self.t[i], self.t[i + 1]
        h = t1 - t0
        s = (t - t0) / h
        h00 = (1 + 2 * s) * (1 - s) ** 2
        h10 = s * (1 - s) ** 2
        h01 = s * s * (3 - 2 * s)
        h11 = s * s * (s - 1)
        x = h00 * self.x[i] + h10 * h * self.v[i] + h01 * self.x[i + 1] + h11 * h * self.v[i + 1]
        v = h00 * self.v[i] + h10 * h * self.a[i] + h01 * self.v[i + 1] + h11 * h * self.a[i + 1]
        return PhaseState(float(x), float(v))


def _drift(values, scale):
    return float(np.max(np.abs(values - values[0])) / scale)


def integrate(params: MediumParams, initial: PhaseState, t_end: float,
              tol: float = 1e-10, t_eval: Sequence[float] | None = None) -> Trajectory:
    """Integrate the drag equations from ``initial`` over ``[0, t_end]``."""
    g_over, a_over = params.g, params.alpha / params.m

    def fun(_t, y):
        return np.array([y[1], -g_over + a_over * y[1] * y[1]])

    t, y, dy = solve_ode(fun, (initial.x, initial.v), t_end, tol, t_eval)
    x, v = y[:, 0], y[:, 1]
    state = PhaseState(x, v)
    m, g = params.m, params.g
    scale = float(np.max(0.5 * m * v * v + m * g * np.abs(x)))

    k2 = constant_of_motion(Formulation.EXP, params, state)
    k2_drift = _drift(k2, max(abs(k2[0]), scale, np.finfo(float).tiny))
    try:
        k1 = constant_of_motion(Formulation.LOG, params, state)
        k1_drift = _drift(k1, max(abs(k1[0]), scale, np.finfo(float).tiny))
        k1_valid = True
    except DomainError:
        k1, k1_drift, k1_valid = None, math.nan, False
    return Trajectory(params, t, x, v, dy[:, 1], k1_drift, k2_drift, k1_valid, k1, k2)
