"""The four-term Nelson lower bound, its two specializations, and the optimizer.

Run with ``python3 notebooks/03_nelson_bound.py`` (about half a minute).

The bound on ``E + Q`` is the negative sum of four terms depending on the
coupling, the particle number and four free parameters.  The two textbook
parameter choices are compared with a numerical optimum.
"""

# %%
from nelson_lab import (BoundParams, ModelParams, evaluate_bound, large_alpha_bound,
                        optimize_bound, small_alpha_bound)

model = ModelParams(alpha=1.0, n=2)
br = evaluate_bound(model, BoundParams(theta=1.5, phi_param=0.0, epsilon=1.0, p=2.0))
for name, value in br.as_dict().items():
    print(f"{name:17s} {value: .6e}")

# %% strong coupling: theta = 3/2, epsilon = (N alpha)^-2, 1 - phi = 1/log(N^2 alpha^2)
# At moderate alpha the cluster term is a huge alpha-independent constant, so
# the alpha^2 log^2 growth of the headline form is not visible yet.
print("\nalpha     value          d_constant     cluster share")
for alpha in (10.0, 100.0, 1e4, 1e8, 1e12):
    res = large_alpha_bound(ModelParams(alpha=alpha, n=1))
    share = res.breakdown.term_cluster / -res.value
    print(f"{alpha:7.0e} {res.value: .4e} {res.d_constant: .4e} {share:10.3%}")

# %% weak coupling
res = small_alpha_bound(ModelParams(alpha=0.1, n=2))
print(f"\nsmall-alpha choice at alpha = 0.1, N = 2: {res.value:.6e}")

# %% numerical optimum over (theta, phi, epsilon, p)
for alpha, n in ((0.1, 2), (10.0, 2)):
    m = ModelParams(alpha=alpha, n=n)
    opt = optimize_bound(m)
    b = opt.best
    print(f"\nalpha = {alpha}, N = {n}: optimized total {opt.breakdown.total:.6e}")
    print(f"  theta = {b.theta:.4f}, phi = {b.phi_param:.4f}, eps = {b.epsilon:.3e}, p = {b.p:.4f}")
