"""Admissible partitions of particle pairs and the Hölder split they justify.

For ``N`` particles let ``J_N = {(i, j) : 1 <= i <= j <= N}``.  A partition of
``J_N`` is admissible when no block holds two different pairs that share an
index; within a block the pair functionals then involve disjoint sets of
independent Brownian motions and factorize.  The smallest admissible
partition has exactly ``N`` blocks, realised by the upper triangle of a
commutative Latin square.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = [
    "LatinSquare",
    "PairPartition",
    "cyclic_latin_square",
    "partition_from_square",
    "square_from_partition",
    "is_admissible",
    "min_admissible_size",
    "holder_split",
    "holder_inequality_check",
    "HolderReport",
    "pair_set",
]

Pair = tuple[int, int]


def pair_set(n):
    """The ordered list of pairs ``(i, j)`` with ``1 <= i <= j <= n``."""
    return [(i, j) for i in range(1, n + 1) for j in range(i, n + 1)]


@dataclass(frozen=True)
class LatinSquare:
    """Symmetric ``n x n`` array with every symbol ``1..n`` once per row and column."""

    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(v) for v in row) for row in self.entries)
        object.__setattr__(self, "entries", rows)
        n = len(rows)
        symbols = set(range(1, n + 1))
        if n == 0 or any(len(r) != n for r in rows):
            raise DomainError("a Latin square must be a non-empty square array", "entries")
        for k in range(n):
            if set(rows[k]) != symbols or {rows[i][k] for i in range(n)} != symbols:
                raise DomainError(f"row or column {k + 1} is not a permutation of 1..{n}",
                                  "entries")
        for i in range(n):
            for j in range(i):
                if rows[i][j] != rows[j][i]:
                    raise DomainError(f"square is not symmetric at ({i + 1}, {j + 1})", "entries")

    @property
    def size(self):
        return len(self.entries)

    def __call__(self, i, j):
        return self.entries[i - 1][j - 1]


@dataclass(frozen=True)
class PairPartition:
    """A partition of ``J_n`` into blocks of pairs.

    Blocks are stored sorted, each block sorted, so equal partitions compare
    equal.
    """

    n: int
    blocks: tuple[tuple[Pair, ...], ...]

    def __post_init__(self):
        blocks = tuple(sorted(tuple(sorted((int(a), int(b)) for a, b in blk))
                              for blk in self.blocks))
        object.__setattr__(self, "blocks", blocks)
        flat = [pr for blk in blocks for pr in blk]
        if any(len(blk) == 0 for blk in blocks):
            raise DomainError("partition blocks must be non-empty", "blocks")
        if sorted(flat) != pair_set(self.n):
            raise DomainError(f"blocks do not partition J_{self.n}", "blocks")

    def as_lists(self):
        return [[list(pr) for pr in blk] for blk in self.blocks]


def cyclic_latin_square(n: int) -> LatinSquare:
    """Addition table of the cyclic group: ``S(i, j) = ((i + j - 2) mod n) + 1``."""
    if int(n) != n or n < 1:
        raise DomainError(f"n must be an integer >= 1, got {n}", "n")
    n = int(n)
    return LatinSquare(tuple(tuple((i + j) % n + 1 for j in range(n)) for i in range(n)))


def partition_from_square(s: LatinSquare) -> PairPartition:
    """Group the upper-triangle pairs by their symbol; yields ``n`` admissible blocks."""
    if not isinstance(s, LatinSquare):
        s = LatinSquare(s)
    n = s.size
    blocks = {k: [] for k in range(1, n + 1)}
    for i, j in pair_set(n):
        blocks[s(i, j)].append((i, j))
    return PairPartition(n, tuple(tuple(b) for b in blocks.values()))


def square_from_partition(part: PairPartition) -> LatinSquare:
    """Rebuild a commutative Latin square from an admissible ``n``-block partition.

    The block index is the symbol; admissibility makes each symbol appear at
    most once per row, and with ``n`` blocks every row is complete.
    """
    if len(part.blocks) != part.n or not is_admissible(part):
        raise DomainError("need an admissible partition with exactly n blocks", "partition")
    n = part.n
    grid = [[0] * n for _ in range(n)]
    for sym, blk in enumerate(part.blocks, start=1):
        for i, j in blk:
            grid[i - 1][j - 1] = grid[j - 1][i - 1] = sym
    return LatinSquare(tuple(tuple(r) for r in grid))


def _block_ok(block):
    seen = set()
    for i, j in block:
        idx = {i, j}
        if seen & idx:
            return False
        seen |= idx
    return True


def is_admissible(part: PairPartition) -> bool:
    """True iff no block contains two distinct pairs sharing an index."""
    return all(_block_ok(blk) for blk in part.blocks)


def _admissible_partitions(items):
    # set partitions in which every block stays admissible; pruning on the
    # fly keeps the enumeration far below the Bell number
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for sub in _admissible_partitions(rest):
        for k in range(len(sub)):
            if _block_ok(sub[k] + [first]):
                yield sub[:k] + [[first] + sub[k]] + sub[k + 1:]
        yield [[first]] + sub


def _all_set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for sub in _all_set_partitions(rest):
        for k in range(len(sub)):
            yield sub[:k] + [[first] + sub[k]] + sub[k + 1:]
        yield [[first]] + sub


def min_admissible_size(n: int, exhaustive=False) -> int:
    """Smallest number of blocks of an admissible partition of ``J_n``, by search.

    With ``exhaustive=True`` every set partition of ``J_n`` is generated and
    filtered (115975 of them for ``n = 4``); otherwise non-admissible blocks
    are pruned while generating.  Both give the same minimum.

    Raises
    ------
    DomainError
        For ``n`` outside ``[1, 4]``; ``J_5`` has Bell(15) partitions.
    """
    if int(n) != n or not 1 <= n <= 4:
        raise DomainError(f"exhaustive search supports 1 <= n <= 4, got {n}", "n")
    items = pair_set(int(n))
    if exhaustive:
        return min(len(p) for p in _all_set_partitions(items)
                   if all(_block_ok(b) for b in p))
    return min(len(p) for p in _admissible_partitions(items))


def holder_split(n: int, beta: float) -> tuple[float, float, float]:
    """Exponents of the factorized bound: ``(n beta, 2 n beta, (n - 1)/2)``.

    The diagonal functional is raised to ``n beta``, each cross-pair
    functional to ``2 n beta``, and the cross expectation carries the outer
    power ``(n - 1)/2``.
    """
    if int(n) != n or n < 1:
        raise DomainError(f"n must be an integer >= 1, got {n}", "n")
    beta = float(beta)
    if not beta >= 0.0:
        raise DomainError(f"beta must be >= 0, got {beta}", "beta")
    return n * beta, 2.0 * n * beta, (n - 1) / 2.0


@dataclass(frozen=True)
class HolderReport:
    n: int
    trials: int
    support: int
    max_ratio: float
    passed: bool

    def as_dict(self):
        return {"n": self.n, "trials": self.trials, "support": self.support,
                "max_ratio": self.max_ratio, "passed": self.passed}


def _holder_sides(tables, n, support):
    # exact expectations over the uniform product space {0..support-1}^n
    pairs = pair_set(n)
    grids = np.meshgrid(*[np.arange(support)] * n, indexing="ij")
    lhs_field = np.ones([support] * n)
    rhs = 1.0
    for (i, j), g in zip(pairs, tables):
        gamma = g[grids[i - 1], grids[j - 1]]
        lhs_field = lhs_field * gamma
        rhs *= np.mean(gamma ** n) ** (1.0 / n)
    return float(np.mean(lhs_field)), rhs


def holder_inequality_check(n=3, trials=10_000, support=3, seed=0, tables=None) -> HolderReport:
    """Test ``E(prod Gamma_mn) <= prod E(Gamma_mn**n)**(1/n)`` by exact enumeration.

    Each ``Gamma_mn = g_mn(U_m, U_n)`` with independent uniform ``U_i`` on
    ``support`` points, so pairs with disjoint indices are independent.  The
    tables ``g`` are drawn from an exponential distribution (heavy enough to
    produce large products).  Passing explicit ``tables`` (one
    ``support x support`` array per pair of :func:`pair_set`) runs one trial
    on them.
    """
    if int(n) != n or not 1 <= n <= 4:
        raise DomainError(f"n must be an integer in [1, 4], got {n}", "n")
    n = int(n)
    n_pairs = len(pair_set(n))
    if tables is not None:
        batches = [np.asarray(tables, dtype=float)]
        if batches[0].shape != (n_pairs, support, support):
            raise DomainError(f"tables must have shape {(n_pairs, support, support)}", "tables")
    else:
        rng = np.random.default_rng(seed)
        batches = (rng.exponential(size=(n_pairs, support, support)) ** rng.uniform(0.2, 3.0)
                   for _ in range(int(trials)))
    max_ratio = 0.0
    count = 0
    for tab in batches:
        lhs, rhs = _holder_sides(tab, n, support)
        count += 1
        if rhs > 0:
            max_ratio = max(max_ratio, lhs / rhs)
        elif lhs > 0:
            max_ratio = math.inf
    max_ratio = float(max_ratio)
    return HolderReport(n, count, support, max_ratio, bool(max_ratio <= 1.0 + 1e-12))
