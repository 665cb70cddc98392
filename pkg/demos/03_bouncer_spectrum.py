"""
Quantum bouncer with drag corrections
=====================================

Airy-function eigenstates above a hard floor, and the first-order energy
shifts of the two quantised Hamiltonians, each checked by quadrature.
"""

import warnings

from dragfall import Formulation
from dragfall.quantum import matrix_element, natural_basis, spectrum, w_correction, w_correction_oracle

# hbar = m = g = 1, alpha = 0.01
basis = natural_basis(alpha=0.01, n_levels=20)
print("gravitational length l_g =", basis.l_g)

# <d^4/dz^4> = z_n^2 / 5 by quadrature
for n in (1, 2, 3):
    print(f"n = {n}: <D4> = {matrix_element(basis, n, 'D4'):.12f}   z_n^2/5 = {basis.zero(n) ** 2 / 5:.12f}")

# closed-form shifts against quadrature of the perturbation
for form in Formulation:
    n = 1
    print(f"{form.name} shift, n = 1: closed {w_correction(basis, form, n):.10e}"
          f"  quadrature {w_correction_oracle(basis, form, n):.10e}")

# the spectrum; upper levels trigger a first-order validity warning
with warnings.catch_warnings(record=True) as caught:
    warnings.simplefilter("always")
    lines = spectrum(basis, 8)
print(" n      E0         E_log        E_exp     splitting")
for ln in lines:
    print(f"{ln.n:2d}  {ln.E0:9.5f}  {ln.E_total_log:10.5f}  {ln.E_total_exp:10.5f}  {ln.splitting:+.3e}")
for w in caught:
    print("warning:", w.message)
