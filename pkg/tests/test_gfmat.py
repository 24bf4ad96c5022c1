import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stabext.gfmat import (
    ContractViolation,
    GFMatrix,
    annihilator_functionals,
    block_diag,
    coordinates_in_span,
    inv_mod,
    is_prime,
    row_space,
    solve,
    subspace_contains,
    subspace_equal,
)

PRIMES = [2, 3, 5, 7]


def mat(rows, p):
    return GFMatrix(rows, p)


def test_rref_hand_example():
    m = mat([[1, 2], [2, 1]], 3)
    r, rank, pivots = m.rref()
    assert r.a.tolist() == [[1, 2], [0, 0]]
    assert rank == 1 and pivots == [0]
    assert m.rank() == 1


def test_solve_scalar():
    a = mat([[2]], 5)
    b = mat([[1]], 5)
    x, null = solve(a, b)
    assert x.a.tolist() == [[3]]
    assert null.rows == 0


def test_inverse_hand_example():
    m = mat([[2, 0], [0, 3]], 5)
    assert m.inverse().a.tolist() == [[3, 0], [0, 2]]


def test_singular_inverse_is_none():
    assert mat([[1, 1], [1, 1]], 2).inverse() is None


def test_nonprime_modulus_rejected():
    with pytest.raises(ContractViolation):
        GFMatrix([[1]], 6)
    assert is_prime(7) and not is_prime(9)


def test_inv_mod():
    for p in PRIMES:
        for x in range(1, p):
            assert (x * inv_mod(x, p)) % p == 1


def test_immutability():
    m = mat([[1, 2], [3, 4]], 5)
    with pytest.raises(ValueError):
        m.a[0, 0] = 0


def test_matmul_and_identity():
    m = mat([[1, 2], [3, 4]], 5)
    i = GFMatrix.identity(2, 5)
    assert m @ i == m and i @ m == m
    assert (m + m).a.tolist() == [[2, 4], [1, 3]]


def test_kron_shape():
    a = mat([[1, 1]], 2)
    b = mat([[1], [1]], 2)
    assert a.kron(b).shape == (2, 2)


def test_block_diag():
    d = block_diag([mat([[2]], 5), mat([[3]], 5)])
    assert d.a.tolist() == [[2, 0], [0, 3]]


def test_json_roundtrip():
    m = mat([[1, 2, 3], [4, 5, 6]], 7)
    assert GFMatrix.from_json(m.to_json()) == m


def test_subspace_predicates():
    u = row_space(mat([[1, 0, 1], [0, 1, 1]], 2))
    assert subspace_contains(u, mat([[1, 1, 0]], 2))
    assert not subspace_contains(u, mat([[1, 1, 1]], 2))
    assert subspace_equal(u, row_space(mat([[1, 1, 0], [0, 1, 1]], 2)))


def test_coordinates_in_span():
    v = mat([[2, 1]], 3)
    coords = coordinates_in_span(mat([[1, 0], [0, 1]], 3), v)
    assert coords.a.reshape(-1).tolist() == [2, 1]


def test_annihilator_functionals():
    u = mat([[1, 0, 0]], 5)
    ann = annihilator_functionals(u, 3, 5)
    assert ann.rows == 2
    assert (u @ ann.transpose()).is_zero()


def rand_matrix(draw, p, rows, cols):
    entries = draw(st.lists(st.integers(0, p - 1), min_size=rows * cols,
                            max_size=rows * cols))
    return GFMatrix(np.array(entries, dtype=np.int64).reshape(rows, cols), p)


@st.composite
def square_matrices(draw, max_n=4):
    p = draw(st.sampled_from(PRIMES))
    n = draw(st.integers(1, max_n))
    return rand_matrix(draw, p, n, n)


@given(square_matrices())
@settings(max_examples=60, deadline=None)
def test_rref_idempotent(m):
    r, _, _ = m.rref()
    assert r.rref()[0] == r


@given(square_matrices())
@settings(max_examples=60, deadline=None)
def test_inverse_roundtrip(m):
    inv = m.inverse()
    if inv is not None:
        assert (m @ inv).is_identity()
        assert (inv @ m).is_identity()
    else:
        assert m.rank() < m.rows


@st.composite
def systems(draw):
    p = draw(st.sampled_from(PRIMES))
    n = draw(st.integers(1, 4))
    m = draw(st.integers(1, 4))
    a = rand_matrix(draw, p, n, m)
    x = rand_matrix(draw, p, m, 1)
    return a, x


@given(systems())
@settings(max_examples=60, deadline=None)
def test_solve_finds_solutions(ax):
    a, x = ax
    b = a @ x
    res = solve(a, b)
    assert res is not None
    particular, null_rows = res
    assert a @ particular == b
    # every nullspace row really is annihilated
    for i in range(null_rows.rows):
        v = null_rows.submatrix([i], range(null_rows.cols)).transpose()
        assert (a @ v).is_zero()


@given(square_matrices())
@settings(max_examples=40, deadline=None)
def test_nullspace_dimension(m):
    null = m.nullspace()
    assert null.rows == m.cols - m.rank()
