import random
from fractions import Fraction

from polystrat.ratlinalg import (column_reduce, columns_from_entries,
                                 fraction_columns_to_int, nullspace, rank,
                                 sparse_matmul)

from oracles import dense_rank, dense_nullspace


def random_sparse_matrix(rng, nrows, ncols, density=0.4):
    entries = []
    for r in range(nrows):
        for c in range(ncols):
            if rng.random() < density:
                entries.append((r, c, rng.randint(-4, 4)))
    return entries


def to_dense(entries, nrows, ncols):
    m = [[Fraction(0)] * ncols for _ in range(nrows)]
    for r, c, v in entries:
        m[r][c] += v
    return m


def test_rank_matches_dense_oracle():
    rng = random.Random(0)
    for _ in range(40):
        nrows = rng.randint(1, 7)
        ncols = rng.randint(1, 7)
        entries = random_sparse_matrix(rng, nrows, ncols)
        cols = columns_from_entries(entries, ncols)
        assert rank(cols) == dense_rank(to_dense(entries, nrows, ncols))


def test_nullspace_matches_dense_dimension_and_is_kernel():
    rng = random.Random(1)
    for _ in range(30):
        nrows = rng.randint(1, 6)
        ncols = rng.randint(1, 6)
        entries = random_sparse_matrix(rng, nrows, ncols)
        cols = columns_from_entries(entries, ncols)
        kern = nullspace(cols)
        dense = to_dense(entries, nrows, ncols)
        assert len(kern) == len(dense_nullspace(dense))
        for vec in kern:
            for r in range(nrows):
                assert sum(dense[r][c] * vec.get(c, Fraction(0))
                           for c in range(ncols)) == 0


def test_rank_plus_nullity():
    rng = random.Random(2)
    for _ in range(20):
        ncols = rng.randint(1, 8)
        entries = random_sparse_matrix(rng, rng.randint(1, 8), ncols)
        cols = columns_from_entries(entries, ncols)
        r, kern = column_reduce(cols, track_kernel=True)
        assert r + len(kern) == ncols


def test_sparse_matmul():
    # A = [[1, 2], [0, 1]], B = [[1], [3]] -> A@B = [[7], [3]]
    a_cols = [{0: 1}, {0: 2, 1: 1}]
    b_cols = [{0: 1, 1: 3}]
    out = sparse_matmul(a_cols, b_cols)
    assert out == [{0: 7, 1: 3}]


def test_fraction_columns_to_int():
    cols = [{0: Fraction(1, 2), 2: Fraction(-3, 4)}, {}]
    out = fraction_columns_to_int(cols)
    assert out[0] == {0: 2, 2: -3}
    assert out[1] == {}
