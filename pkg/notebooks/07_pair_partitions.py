"""Admissible partitions of particle pairs and the Hölder product inequality.

Run with ``python3 notebooks/07_pair_partitions.py``.

Splitting the pair functionals into blocks whose members share no particle
makes each block a product of independent factors.  A commutative Latin
square gives such a split into exactly ``N`` blocks, which is optimal.
"""

# %%
from nelson_lab import (cyclic_latin_square, holder_inequality_check, is_admissible,
                        min_admissible_size, partition_from_square)
from nelson_lab.partitions import PairPartition

square = cyclic_latin_square(4)
for row in square.entries:
    print(" ".join(str(v) for v in row))
part = partition_from_square(square)
for k, block in enumerate(part.blocks, start=1):
    print(f"block {k}: {block}")

# %% a partition that mixes pairs sharing an index is discarded
bad = PairPartition(2, (((1, 1), (1, 2)), ((2, 2),)))
print("\n{(1,1),(1,2)} | {(2,2)} admissible:", is_admissible(bad))

# %% minimality by search
for n in range(1, 5):
    print(f"N = {n}: smallest admissible partition has {min_admissible_size(n, exhaustive=True)} blocks")

# %% the Hölder inequality on random finite families, by exact enumeration
rep = holder_inequality_check(n=3, trials=2000, seed=1)
print(f"\n{rep.trials} random families: max LHS/RHS = {rep.max_ratio:.4f}")
