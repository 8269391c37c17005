import random
from fractions import Fraction

import pytest

from semihom.exact_linalg import (
    CompositionNonzeroError,
    NoSolutionError,
    ResourceCapError,
    SparseMatrix,
    cohomology_dim,
    get_entry_cap,
    kernel_basis,
    quotient_extension_basis,
    rank,
    set_entry_cap,
    solve,
    span_dim,
)


def M(rows):
    return SparseMatrix.from_rows(rows)


def test_rank_trivial_cases():
    assert rank(SparseMatrix.zero(3, 3)) == 0
    assert rank(SparseMatrix.identity(3)) == 3
    # row2 = 2*row1
    assert rank(M([[1, 2], [2, 4]])) == 1


def test_kernel_trivial_cases():
    assert kernel_basis(SparseMatrix.identity(2)) == []
    assert len(kernel_basis(SparseMatrix.zero(2, 3))) == 3
    # solve x + y = 0: canonical vector has 1 at the free column
    (v,) = kernel_basis(M([[1, 1]]))
    assert v == (Fraction(-1), Fraction(1))


def test_kernel_vectors_are_exact_null_vectors():
    rng = random.Random(7)
    for _ in range(40):
        rows = rng.randrange(1, 6)
        cols = rng.randrange(1, 6)
        m = SparseMatrix(rows, cols, {
            (rng.randrange(rows), rng.randrange(cols)):
                Fraction(rng.randrange(-4, 5), rng.randrange(1, 4))
            for _ in range(rng.randrange(0, rows * cols + 1))
        })
        basis = m.kernel_basis()
        assert rank(m) + len(basis) == cols  # rank-nullity
        for v in basis:
            img = m.apply({i: x for i, x in enumerate(v) if x != 0})
            assert img == {}
        assert rank(m.transpose()) == rank(m)


def test_rref_is_canonical_under_row_permutation():
    rng = random.Random(11)
    for _ in range(20):
        rows = [[Fraction(rng.randrange(-3, 4)) for _ in range(4)] for _ in range(4)]
        m1 = M(rows)
        shuffled = rows[:]
        rng.shuffle(shuffled)
        m2 = M(shuffled)
        assert m1.rref() == m2.rref()
        assert m1.kernel_basis() == m2.kernel_basis()


def test_solve():
    m = SparseMatrix.identity(2)
    assert solve(m, [Fraction(3, 2), Fraction(-1)]) == (Fraction(3, 2), Fraction(-1))
    x = solve(M([[1, 1]]), [2])
    assert x[0] + x[1] == 2
    with pytest.raises(NoSolutionError):
        solve(M([[1], [2]]), [1, 3])


def test_cohomology_dim():
    # no differentials on a 2-dim space
    d_in = SparseMatrix.zero(2, 0)
    d_out = SparseMatrix.zero(0, 2)
    assert cohomology_dim(d_in, d_out) == 2
    # exact complex k -> k
    assert cohomology_dim(SparseMatrix.identity(2), SparseMatrix.zero(0, 2)) == 0
    # 1-dim space, zero maps
    assert cohomology_dim(M([[0]]), M([[0]])) == 1
    with pytest.raises(CompositionNonzeroError):
        cohomology_dim(SparseMatrix.identity(1), SparseMatrix.identity(1))


def test_matmul_and_apply_agree():
    rng = random.Random(3)
    for _ in range(20):
        a = SparseMatrix(3, 4, {(rng.randrange(3), rng.randrange(4)): rng.randrange(-3, 4)
                                for _ in range(6)})
        b = SparseMatrix(4, 2, {(rng.randrange(4), rng.randrange(2)): rng.randrange(-3, 4)
                                for _ in range(4)})
        ab = a * b
        for c in range(2):
            col = {r: v for (r, cc), v in b.entries.items() if cc == c}
            assert a.apply(col) == {r: v for (r, cc), v in ab.entries.items() if cc == c}


def test_entry_cap():
    old = get_entry_cap()
    try:
        set_entry_cap(10)
        with pytest.raises(ResourceCapError):
            SparseMatrix.zero(4, 4)
        SparseMatrix.zero(2, 5)
    finally:
        set_entry_cap(old)


def test_span_and_quotient_helpers():
    vs = [{0: 1, 1: 1}, {1: 1, 2: 1}, {0: 1, 2: -1}]
    assert span_dim(vs, 3) == 2
    picked = quotient_extension_basis([{0: 1}], [{0: 2}, {1: 1}, {0: 1, 1: 3}], 3)
    assert picked == [1]


def test_hypothesis_like_random_rank_nullity_larger():
    rng = random.Random(2024)
    for _ in range(10):
        rows, cols = 8, 9
        m = SparseMatrix(rows, cols, {
            (rng.randrange(rows), rng.randrange(cols)): Fraction(rng.randrange(-9, 10), rng.randrange(1, 5))
            for _ in range(25)
        })
        assert rank(m) + len(kernel_basis(m)) == cols
