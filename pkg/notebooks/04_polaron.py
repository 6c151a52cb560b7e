"""Polaron bounds: the cutoff-uniform constant and the comparison values.

Run with ``python3 notebooks/04_polaron.py``.
"""

# %%
from nelson_lab import polaron_bounds
from nelson_lab.polaron import polaron_alpha2_coefficient

k = polaron_alpha2_coefficient()
print(f"(2/pi^2) ||phi(x)/x||_1^2 = {k:.10f}  (rounds to {k:.2f})")

# %% bounds for a few electron numbers
print("\n N   cutoff-uniform   no cutoff      Pekar upper")
for n in (1, 2, 3, 5, 10):
    b = polaron_bounds(alpha=1.0, n=n)
    print(f"{n:2d} {b.lower_cutoff:15.4f} {b.lower_no_cutoff:12.4f} {b.pekar_upper:13.4f}")

# %% the cutoff-uniform bound is always the weaker one here:
# 0.76 N (4N - 3)^2 grows like 12 N^3, against N^3 / 4 without the cutoff
ratios = [polaron_bounds(1.0, n).lower_cutoff / polaron_bounds(1.0, n).lower_no_cutoff
          for n in (1, 8, 64)]
print("\nratio cutoff-uniform / no-cutoff at N = 1, 8, 64:", [round(r, 2) for r in ratios])
