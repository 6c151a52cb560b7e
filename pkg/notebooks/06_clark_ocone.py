"""The Clark-Ocone integrand and the supermartingale estimate.

Run with ``python3 notebooks/06_clark_ocone.py`` (about a minute).

``A_T - E(A_T)`` is written as a stochastic integral of an adapted integrand
``rho``.  On a time grid the residual shrinks as the step is refined; with
the second-order correction of the discrete Itô sum it falls like ``dt**2``,
with the plain left-point sum only like ``dt``.
"""

# %%
from nelson_lab import ModelParams, SimConfig, action, clark_ocone_rho, sample_paths
from nelson_lab import supermartingale_check

model = ModelParams(alpha=0.05, mu=1.0, lambda_uv=5.0, n=1)
fine_cfg = SimConfig(t_final=1.0, dt=0.0125, n_paths=100, seed=7)
fine = sample_paths(fine_cfg)

print("   dt      corrected residual var   left-point residual var")
for factor in (4, 2, 1):
    dt = fine_cfg.dt * factor
    cfg = SimConfig(t_final=1.0, dt=dt, n_paths=100, seed=7)
    co = clark_ocone_rho(fine.coarsen(factor), model, cfg)
    print(f"{dt:7.4f}  {co.residual_variance:22.3e}  {co.left_point_residual_variance:22.3e}")

# %% supermartingale estimate with independent ensembles on each side
# For nearly Gaussian A_T the right side exceeds the left only by a factor of
# about exp((p - 1) Var(A_T) / 2), here well under 1%, which is smaller than
# the Monte Carlo noise of either side.  The check is therefore decided by
# its 3 SE margin and guards against gross violations only.
co = clark_ocone_rho(fine, model, fine_cfg)
other = SimConfig(t_final=1.0, dt=0.0125, n_paths=100, seed=8)
stats = action(sample_paths(other), model, other)
for p in (1.5, 2.0, 4.0):
    r = supermartingale_check(stats, co, p)
    print(f"p = {p}: E e^A = {r['left']:.5f} <= {r['right']:.5f}  ({'holds' if r['passed'] else 'violated'})")
