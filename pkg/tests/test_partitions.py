import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nelson_lab.errors import DomainError
from nelson_lab.partitions import (LatinSquare, PairPartition, cyclic_latin_square,
                                   holder_inequality_check, holder_split, is_admissible,
                                   min_admissible_size, pair_set, partition_from_square,
                                   square_from_partition)


def _bell(n):
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for v in row:
            nxt.append(nxt[-1] + v)
        row = nxt
    return row[0]


def test_cyclic_squares_small():
    assert cyclic_latin_square(1).entries == ((1,),)
    assert cyclic_latin_square(2).entries == ((1, 2), (2, 1))
    assert cyclic_latin_square(3).entries == ((1, 2, 3), (2, 3, 1), (3, 1, 2))
    assert cyclic_latin_square(3)(2, 3) == 1


def test_partition_examples():
    assert partition_from_square(cyclic_latin_square(2)).as_lists() == [[[1, 1], [2, 2]], [[1, 2]]]
    three = partition_from_square(cyclic_latin_square(3))
    expected = PairPartition(3, (((1, 1), (2, 3)), ((1, 2), (3, 3)), ((1, 3), (2, 2))))
    assert three == expected
    assert partition_from_square(cyclic_latin_square(1)).as_lists() == [[[1, 1]]]


def test_admissibility_examples():
    assert is_admissible(PairPartition(2, (((1, 1), (2, 2)), ((1, 2),))))
    assert not is_admissible(PairPartition(2, (((1, 1), (1, 2)), ((2, 2),))))


@pytest.mark.parametrize("n", range(1, 65))
def test_square_partition_has_n_admissible_blocks(n):
    part = partition_from_square(cyclic_latin_square(n))
    assert len(part.blocks) == n
    assert is_admissible(part)


@given(st.integers(1, 30), st.data())
def test_round_trip_through_relabelled_square(n, data):
    # relabel symbols and conjugate rows/columns by the same permutation: still commutative Latin
    sym = data.draw(st.permutations(range(1, n + 1)))
    perm = data.draw(st.permutations(range(n)))
    base = cyclic_latin_square(n)
    square = LatinSquare(tuple(tuple(sym[base(perm[i] + 1, perm[j] + 1) - 1] for j in range(n))
                               for i in range(n)))
    part = partition_from_square(square)
    rebuilt = square_from_partition(part)
    assert partition_from_square(rebuilt) == part
    assert rebuilt.size == n


def test_invalid_squares_rejected():
    with pytest.raises(DomainError):
        LatinSquare(((1, 2), (1, 2)))          # column repeats
    with pytest.raises(DomainError):
        LatinSquare(((1, 2, 3), (3, 1, 2), (2, 3, 1)))  # Latin but not symmetric
    with pytest.raises(DomainError):
        partition_from_square(((1, 1), (2, 2)))


def test_invalid_partitions_rejected():
    with pytest.raises(DomainError):
        PairPartition(2, (((1, 1),), ((1, 2),)))   # (2, 2) missing
    with pytest.raises(DomainError):
        PairPartition(2, (((1, 1), (2, 2)), ((1, 2),), ()))
    with pytest.raises(DomainError):
        square_from_partition(PairPartition(2, (((1, 1),), ((2, 2),), ((1, 2),))))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_min_admissible_size(n):
    assert min_admissible_size(n) == n
    assert min_admissible_size(n, exhaustive=True) == n


def test_exhaustive_enumeration_counts_bell_number():
    from nelson_lab.partitions import _all_set_partitions
    assert sum(1 for _ in _all_set_partitions(pair_set(3))) == _bell(6) == 203


def test_min_size_out_of_range():
    with pytest.raises(DomainError):
        min_admissible_size(5)


def test_holder_split_examples():
    assert holder_split(1, 0.7) == (0.7, 1.4, 0.0)
    assert holder_split(2, 1.0) == (2.0, 4.0, 0.5)
    assert holder_split(5, 0.3) == pytest.approx((1.5, 3.0, 2.0))
    with pytest.raises(DomainError):
        holder_split(2, -1.0)


def test_holder_constant_tables_equality():
    tables = np.ones((6, 3, 3))
    rep = holder_inequality_check(3, tables=tables)
    assert rep.max_ratio == pytest.approx(1.0, rel=1e-15)
    assert rep.passed and rep.trials == 1


def test_holder_fully_independent_factors():
    # every factor depends on its own variable (rows constant in the second argument is not
    # enough for pairs sharing an index, so use diagonal pairs only and constants elsewhere)
    rng = np.random.default_rng(3)
    tables = np.ones((3, 2, 2))
    for k, (i, j) in enumerate(pair_set(2)):
        if i == j:
            tables[k] = rng.uniform(0.1, 5.0, size=(2, 1))
    rep = holder_inequality_check(2, support=2, tables=tables)
    lhs = np.mean(tables[0][:, 0]) * np.mean(tables[2][:, 0])
    rhs = np.sqrt(np.mean(tables[0][:, 0] ** 2)) * np.sqrt(np.mean(tables[2][:, 0] ** 2))
    assert rep.max_ratio == pytest.approx(lhs / rhs, rel=1e-12)
    assert rep.max_ratio <= 1.0


def test_holder_against_brute_force():
    rng = np.random.default_rng(11)
    tables = rng.exponential(size=(6, 3, 3))
    pairs = pair_set(3)
    lhs = np.mean([np.prod([tables[k][u[i - 1], u[j - 1]] for k, (i, j) in enumerate(pairs)])
                   for u in itertools.product(range(3), repeat=3)])
    rhs = 1.0
    for k, (i, j) in enumerate(pairs):
        vals = [tables[k][u[i - 1], u[j - 1]] ** 3 for u in itertools.product(range(3), repeat=3)]
        rhs *= np.mean(vals) ** (1 / 3)
    rep = holder_inequality_check(3, tables=tables)
    assert rep.max_ratio == pytest.approx(lhs / rhs, rel=1e-12)


def test_holder_random_trials_deterministic():
    a = holder_inequality_check(3, trials=300, seed=5)
    b = holder_inequality_check(3, trials=300, seed=5)
    assert a == b
    assert a.passed and a.max_ratio <= 1.0 and a.trials == 300


def test_holder_domain():
    with pytest.raises(DomainError):
        holder_inequality_check(5)
    with pytest.raises(DomainError):
        holder_inequality_check(3, tables=np.ones((3, 3, 3)))
