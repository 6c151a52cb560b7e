"""Monte Carlo of the Feynman-Kac action: expectation identity and bound dominance.

Run with ``python3 notebooks/05_feynman_kac_monte_carlo.py`` (under a minute).

Brownian ensembles are drawn with per-path seeds, the double time integral of
the pair kernel is evaluated on every path, and the resulting energy rate is
compared with the analytic bounds.  The acceptance suite runs the same
experiment at T = 8 with 2000 paths.
"""

# %%
from nelson_lab import (ModelParams, SimConfig, action, energy_estimate, expectation_check,
                        sample_paths)
from nelson_lab.kernels import RadialModel

model = ModelParams(alpha=0.05, mu=1.0, lambda_uv=5.0, n=1)
cfg = SimConfig(t_final=4.0, dt=0.02, n_paths=300, seed=1)
ens = sample_paths(cfg)

# %% the mean action grows like Q T up to a negative finite-T correction
nelson = action(ens, model, cfg, "nelson")
rep = expectation_check(nelson, model, cfg, "nelson")
print(f"mean A_T / T = {rep['mean_over_t']:.5f} +- {rep['standard_error']:.5f}")
print(f"exact E A_T / T = {rep['exact_expectation_over_t']:.5f}, Q = {rep['q']:.5f}, "
      f"ratio {rep['ratio']:.4f}")
rad = RadialModel("nelson", model)
for T in (1.0, 4.0, 16.0, 64.0):
    e = rad.expected_action(T)
    print(f"  T = {T:5.1f}: E A_T / (Q T) = {e['total'] / e['linear']:.4f}")

# %% polaron: the slope is bounded by alpha N
polaron = action(ens, model, cfg, "polaron")
rep = expectation_check(polaron, model, cfg, "polaron")
print(f"\npolaron mean/T = {rep['mean_over_t']:.5f} <= alpha N = {rep['rate']}")

# %% the simulated energy rate never beats the analytic bound
en = energy_estimate(nelson, model, cfg, "nelson")
print(f"\nNelson: fk_rate - Q = {en['fk_rate'] - en['q']:.5f}, |bound| = {abs(en['bound_total']):.2f}, "
      f"dominance {en['dominance']}")
en = energy_estimate(polaron, model, cfg, "polaron")
print(f"polaron: fk_rate = {en['fk_rate']:.5f} <= {en['limit']:.5f}, dominance {en['dominance']}")
