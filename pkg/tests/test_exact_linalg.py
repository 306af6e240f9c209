"""Exact linear algebra over ℚ and F_p."""

import random

import pytest
from hypothesis import given, settings, strategies as st

from dgcat_workbench import DimensionMismatchError, Field, Matrix, WorkspaceFormatError, kernel_basis, rank, solve
from dgcat_workbench.exact_linalg import (
    cokernel, enumerate_vectors, inverse, kron, left_inverse, random_vector, rref,
)


# -- Helpers ----------------------------------------------------------

def _matrix(fld, rows):
    return Matrix.from_rows(fld, rows)


small_ints = st.integers(min_value=-3, max_value=3)
shapes = st.tuples(st.integers(min_value=1, max_value=4), st.integers(min_value=1, max_value=4))


@st.composite
def matrices(draw, characteristic=0):
    nrows, ncols = draw(shapes)
    rows = [[draw(small_ints) for _ in range(ncols)] for _ in range(nrows)]
    return Matrix.from_rows(Field(characteristic), rows)


# -- Tests ------------------------------------------------------------

def test_field_parse_and_format():
    q = Field.parse("q")
    f7 = Field.parse("fp:7")
    assert q.characteristic == 0
    assert f7.characteristic == 7
    assert q.format_element(q((3, 2))) == "3/2"
    assert q.format_element(q(-4)) == "-4"
    assert f7.format_element(f7(12)) == "5 mod 7"
    assert q.parse_element("3/2") == q((3, 2))
    assert f7.parse_element("5 mod 7") == f7(5)


def test_field_rejects_bad_input():
    with pytest.raises(ValueError):
        Field(4)
    with pytest.raises(WorkspaceFormatError):
        Field.parse("complex")
    with pytest.raises(WorkspaceFormatError):
        Field(7).parse_element("1 mod 5")
    with pytest.raises(WorkspaceFormatError):
        Field(0).parse_element("1/0")


def test_sign():
    fld = Field(0)
    assert fld.sign(2) == fld.one
    assert fld.sign(3) == -fld.one
    assert Field(2).sign(1) == Field(2).one


def test_rank_depends_on_characteristic():
    rows = [[1, 1], [1, -1]]
    assert rank(_matrix(Field(0), rows)) == 2
    assert rank(_matrix(Field(2), rows)) == 1


def test_kernel_basis_is_annihilated(fld):
    m = _matrix(fld, [[1, 2, 3], [2, 4, 6]])
    ker = kernel_basis(m)
    assert (m @ ker).is_zero
    assert ker.ncols == 3 - rank(m)


def test_solve_consistent_and_inconsistent(qq):
    m = _matrix(qq, [[1, 1], [0, 1]])
    x = solve(m, (qq(3), qq(1)))
    assert m.apply(x) == (qq(3), qq(1))
    singular = _matrix(qq, [[1, 1], [1, 1]])
    assert solve(singular, (qq(1), qq(2))) is None


def test_inverse_and_left_inverse(qq):
    m = _matrix(qq, [[2, 1], [1, 1]])
    inv = inverse(m)
    assert inv @ m == Matrix.identity(qq, 2)
    assert inverse(_matrix(qq, [[1, 2], [2, 4]])) is None
    tall = _matrix(qq, [[1, 0], [0, 1], [1, 1]])
    assert left_inverse(tall) @ tall == Matrix.identity(qq, 2)


def test_cokernel_projection_kills_image(fld):
    m = _matrix(fld, [[1], [1], [0]])
    coker = cokernel(m)
    assert coker.dim == 2
    assert (coker.projection @ m).is_zero
    assert coker.projection @ coker.section == Matrix.identity(fld, 2)


def test_kron_matches_kron_of_vectors(qq):
    a = _matrix(qq, [[1, 2], [0, 1]])
    b = _matrix(qq, [[0, 1], [1, 0]])
    x, y = (qq(1), qq(2)), (qq(3), qq(5))
    lhs = kron(a, b).apply(tuple(u * v for u in x for v in y))
    ax, by = a.apply(x), b.apply(y)
    assert lhs == tuple(u * v for u in ax for v in by)


def test_large_sparse_matrices_stay_sparse(f2):
    n = 1500
    bidiag = Matrix.from_entries(f2, n, n, {**{(i, i): 1 for i in range(n)},
                                           **{(i + 1, i): 1 for i in range(n - 1)}})
    assert bidiag.nnz == 2 * n - 1
    assert (bidiag @ bidiag).nnz <= 3 * n
    assert rank(bidiag) == n
    assert kernel_basis(bidiag).ncols == 0
    big = kron(Matrix.identity(f2, 40), Matrix.identity(f2, 40))
    assert big.shape == (1600, 1600)
    assert big.nnz == 1600


def test_sparse_arithmetic_drops_cancelled_entries(f2):
    m = Matrix.from_entries(f2, 3, 4, {(0, 1): 1, (2, 3): 1})
    assert (m + m).is_zero
    assert (m + m).nnz == 0
    assert m.transpose().nnz == 2
    assert list(m.nonzero_entries()) == [(0, 1, f2.one), (2, 3, f2.one)]


def test_shape_errors(qq):
    with pytest.raises(DimensionMismatchError):
        _matrix(qq, [[1, 2]]) @ _matrix(qq, [[1, 2]])
    with pytest.raises(DimensionMismatchError):
        _matrix(qq, [[1]]) + _matrix(qq, [[1, 2]])


def test_enumerate_vectors_over_f3():
    vecs = list(enumerate_vectors(Field(3), 2))
    assert len(vecs) == 9
    assert len(set(vecs)) == 9


def test_random_vector_is_reproducible():
    fld = Field(0)
    assert random_vector(fld, 4, random.Random(7)) == random_vector(fld, 4, random.Random(7))


@settings(max_examples=50, deadline=None)
@given(matrices())
def test_rank_nullity_over_q(m):
    assert rank(m) + kernel_basis(m).ncols == m.ncols


@settings(max_examples=50, deadline=None)
@given(matrices(characteristic=2))
def test_rank_nullity_over_f2(m):
    assert rank(m) + kernel_basis(m).ncols == m.ncols


@settings(max_examples=50, deadline=None)
@given(matrices())
def test_rref_pivots_are_increasing(m):
    _, pivots, rk = rref(m)
    assert list(pivots) == sorted(pivots)
    assert len(pivots) == rk
