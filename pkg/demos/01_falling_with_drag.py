"""
Falling with quadratic drag
===========================

Integrate one drop, compare it with the exact tanh solution and watch both
constants of motion stay put.
"""

import numpy as np

from dragfall import Formulation, MediumParams, PhaseState, analytic_drop, constant_of_motion, integrate

# m = g = 1 with alpha = 0.25 gives a terminal speed of 2
params = MediumParams(m=1.0, g=1.0, alpha=0.25)
print("terminal speed:", params.terminal_speed)

# release from rest at x = 10 and follow it for five relaxation times
t_end = 5 * params.terminal_speed / params.g
times = np.linspace(0.0, t_end, 11)[1:]
traj = integrate(params, PhaseState(10.0, 0.0), t_end, tol=1e-10, t_eval=times)

exact = analytic_drop(params, 10.0, traj.t)
print("max |x - x_exact| =", np.max(np.abs(traj.x - exact.x)))
print("max |v - v_exact| =", np.max(np.abs(traj.v - exact.v)))

# the two constants of motion are different functions of (x, v), yet both are conserved
short = integrate(params, PhaseState(10.0, 0.0), 2.0)
print("over t in [0, 2]:  K1 drift", short.k1_drift, " K2 drift", short.k2_drift)

# near terminal speed dK1/dv grows like 1/(1 - v^2/v_T^2), which amplifies the
# integrator's own error; at t = 5 v_T/g that factor is about cosh(5)^2 ~ 5500
print("over five relaxation times:  K1 drift", traj.k1_drift, " K2 drift", traj.k2_drift)

# at rest they agree; in motion they do not
for v in (0.0, -1.0, -1.9):
    s = PhaseState(1.0, v)
    print(f"v = {v:5.2f}  K1 = {constant_of_motion(Formulation.LOG, params, s):.6f}"
          f"  K2 = {constant_of_motion(Formulation.EXP, params, s):.6f}")

# the LOG constant is only defined below terminal speed
try:
    constant_of_motion(Formulation.LOG, params, PhaseState(0.0, -2.5))
except ValueError as exc:
    print("refused:", exc)
