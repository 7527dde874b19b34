import random

import pytest

from modpforms import linalg


def test_rref_identity():
    rows, pivots = linalg.rref([[1, 0], [0, 1]], 5)
    assert rows == [[1, 0], [0, 1]]
    assert pivots == [0, 1]


def test_rref_dependent_rows():
    rows, pivots = linalg.rref([[1, 2, 3], [2, 4, 6], [0, 1, 1]], 5)
    assert len(rows) == 2
    assert pivots == [0, 1]


def test_rank():
    assert linalg.rank([[1, 2], [2, 4]], 5) == 1
    assert linalg.rank([[1, 2], [2, 5]], 7) == 2
    assert linalg.rank([], 5) == 0


def test_solve_in_span_basic():
    basis = [[1, 0, 2], [0, 1, 3]]
    coords = linalg.solve_in_span(basis, [2, 1, 2], 5)
    assert coords == [2, 1]
    assert linalg.solve_in_span(basis, [0, 0, 1], 5) is None


def test_solve_in_span_zero_vector():
    basis = [[1, 4], [2, 3]]
    assert linalg.solve_in_span(basis, [0, 0], 5) == [0, 0]


def test_solve_in_span_redundant_basis():
    # dependent generating set still yields valid coordinates
    basis = [[1, 1], [2, 2], [0, 1]]
    coords = linalg.solve_in_span(basis, [3, 4], 5)
    assert coords is not None
    combo = [sum(c * basis[i][j] for i, c in enumerate(coords)) % 5 for j in range(2)]
    assert combo == [3, 4]


def test_rowspan_incremental():
    span = linalg.RowSpan(3, 7)
    assert span.add([1, 2, 3])
    assert not span.add([2, 4, 6])
    assert span.add([0, 0, 1])
    assert span.dim == 2
    assert span.contains([1, 2, 5])
    assert not span.contains([0, 1, 0])


def test_matmul_matpow():
    a = [[1, 1], [0, 1]]
    assert linalg.matmul(a, a, 5) == [[1, 2], [0, 1]]
    assert linalg.matpow(a, 6, 5) == [[1, 1], [0, 1]]
    assert linalg.matpow(a, 0, 5) == [[1, 0], [0, 1]]


def test_nullspace():
    ns = linalg.nullspace([[1, 2, 0], [0, 0, 1]], 5)
    assert len(ns) == 1
    v = ns[0]
    assert [sum(r * x for r, x in zip(row, v)) % 5 for row in [[1, 2, 0], [0, 0, 1]]] == [0, 0]


def test_charpoly_diagonal():
    # (x-1)(x-2) = x^2 - 3x + 2 over F_5
    assert linalg.charpoly([[1, 0], [0, 2]], 5) == (2, 2, 1)


def test_charpoly_empty_and_1x1():
    assert linalg.charpoly([], 5) == (1,)
    assert linalg.charpoly([[3]], 5) == (2, 1)


@pytest.mark.parametrize("p", [5, 7, 11])
def test_charpoly_matches_cofactor_oracle(p):
    rng = random.Random(p)
    for n in range(2, 6):
        for _ in range(4):
            m = [[rng.randrange(p) for _ in range(n)] for _ in range(n)]
            assert linalg.charpoly(m, p) == linalg.charpoly_naive(m, p)


def test_charpoly_companion():
    # companion matrix of x^3 + 2x + 3 over F_7
    c = [[0, 0, -3], [1, 0, -2], [0, 1, 0]]
    assert linalg.charpoly(c, 7) == (3 % 7, 2 % 7, 0, 1)
