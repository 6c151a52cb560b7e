"""The renormalization counterterm and its logarithmic growth.

Run with ``python3 notebooks/02_counterterm.py``.

``Q`` grows like ``8 pi alpha N log(Lambda)``, but the exact value carries a
sizeable negative constant: at ``Lambda = 1e4`` the ratio to the asymptote
is still near 0.88, and it only creeps towards one.
"""

# %%
import math

from nelson_lab import ModelParams, q_counterterm, q_log_asymptote

print(" Lambda          Q      8 pi log L   ratio    Q - 8 pi log L")
for lam in (1e1, 1e2, 1e4, 1e6, 1e8, 1e12):
    m = ModelParams(alpha=1.0, mu=1.0, lambda_uv=lam)
    q, asym = q_counterterm(m), q_log_asymptote(m)
    print(f"{lam:7.0e} {q:11.5f} {asym:11.5f} {q / asym:8.4f} {q - asym:12.6f}")

# %% linearity in alpha N is exact by construction
base = q_counterterm(ModelParams(alpha=1.0, lambda_uv=1e4))
scaled = q_counterterm(ModelParams(alpha=2.5, n=3, lambda_uv=1e4))
print(f"\nQ(2.5, N=3) / Q(1, N=1) = {scaled / base!r}")

# %% massless mesons: closed form 8 pi log(1 + Lambda/2)
lam = 1e3
print(f"mu = 0: Q = {q_counterterm(ModelParams(alpha=1.0, mu=0.0, lambda_uv=lam)):.12f}, "
      f"closed form {8 * math.pi * math.log1p(lam / 2):.12f}")
