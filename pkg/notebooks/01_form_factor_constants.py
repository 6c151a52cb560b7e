"""The form factor phi and the constants of the Nelson bound.

Run with ``python3 notebooks/01_form_factor_constants.py``.

Every constant in the lower bound is built from a handful of norms of
``phi(x) = (sin x - x cos x) / x**2``.  This script evaluates them and shows
how the exponent-dependent constants move with ``theta``.
"""

# %% the function itself
import numpy as np

from nelson_lab import derived_constants, phi, phi_norms, theta_constants

x = np.array([0.0, 1e-4, 1.0, np.pi, 2.08, 10.0])
for xi, v in zip(x, phi(x)):
    print(f"phi({xi:8.4g}) = {v: .12f}")

# %% norms
# The supremum sits near x = 2.08.  The L1 norm of phi(x)/x is taken over the
# whole line, twice the half-line integral.
norms = phi_norms()
print(f"\nsup |phi|        = {norms.sup_norm:.10f}")
print(f"||phi(x)/x||_1   = {norms.one_norm_over_x:.10f}")
for a in (0.5, 0.75, 1.0):
    print(f"sup |phi| x^{a:<4} = {norms.weighted_sup(a):.10f}")

# %% growth beyond a = 1: phi(x) x^1.5 is unbounded
for big in (10.0, 100.0, 1000.0):
    print(f"|phi({big:g})| * {big:g}^1.5 = {abs(phi(big)) * big ** 1.5:10.3f}")

# %% theta-dependent constants
print("\ntheta    A_theta      B_theta")
for theta in (1.01, 1.25, 1.5, 1.75, 1.99):
    a, b = theta_constants(theta)
    print(f"{theta:5.2f}  {a:11.5g}  {b:11.5g}")

# %% one full parameter choice
c = derived_constants(theta=1.5, phi_param=0.0, epsilon=1.0)
print(f"\nC = {c.c_const:.6f}, D_eps = {c.d_eps:.6f}, F_theta = {c.f_theta:.6f}")
