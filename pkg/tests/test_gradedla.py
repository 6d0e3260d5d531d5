import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from bsroots import gradedla
from bsroots.gradedla import (
    ExactMatrix,
    bareiss_rank,
    cokernel_dim,
    kernel_basis,
    random_prime,
    rank,
    rank_mod_p,
    rref,
)


@st.composite
def int_matrices(draw, max_dim=7, lo=-4, hi=4, sparse=True):
    r = draw(st.integers(0, max_dim))
    c = draw(st.integers(0, max_dim))
    vals = st.integers(lo, hi)
    if sparse:
        vals = st.one_of(st.just(0), st.just(0), vals)
    ent = draw(st.lists(vals, min_size=r * c, max_size=r * c))
    return ExactMatrix(r, c, ent)


def sympy_rank(m: ExactMatrix) -> int:
    if m.rows == 0 or m.cols == 0:
        return 0
    return sympy.Matrix(m.tolist()).rank()


@settings(max_examples=150, deadline=None)
@given(int_matrices())
def test_rank_matches_sympy_all_methods(m):
    want = sympy_rank(m)
    assert rank(m, "exact") == want
    assert rank(m, "bareiss") == want
    assert rank(m, "modular", random.Random(1)) == want


@settings(max_examples=80, deadline=None)
@given(int_matrices())
def test_rank_transpose_invariant(m):
    assert rank(m) == rank(m.transpose())


@settings(max_examples=80, deadline=None)
@given(int_matrices(max_dim=6))
def test_kernel_basis_native_equals_flint(m):
    kb = kernel_basis(m)
    assert kb == kernel_basis(m, engine="native")
    assert len(kb) == m.cols - rank(m)
    for v in kb:
        assert not any(m.matvec(v))


@settings(max_examples=60, deadline=None)
@given(int_matrices(max_dim=6))
def test_rref_engines_agree(m):
    assert rref(m, "native") == rref(m, "flint")


def test_rref_values():
    rows, piv = rref(ExactMatrix.from_rows([[2, 4, 1], [1, 2, 0]]), "native")
    assert piv == [0, 2]
    assert rows == [[1, 2, 0], [0, 0, 1]]
    assert all(isinstance(x, Fraction) for r in rows for x in r)


def test_bareiss_exact_division_on_hilbert_like():
    # entries grow; any inexact division would change the rank
    m = [[(i + 1) ** j for j in range(6)] for i in range(6)]
    assert bareiss_rank(m) == 6
    m[5] = [a + b for a, b in zip(m[0], m[1])]
    assert bareiss_rank(m) == 5


def test_rank_mod_p_can_drop():
    m = [[3, 0], [0, 5]]
    assert rank_mod_p(m, 3) == 1
    assert rank_mod_p(m, 7) == 2


def test_random_prime_is_prime():
    rng = random.Random(5)
    for _ in range(5):
        p = random_prime(62, rng)
        assert p.bit_length() == 62
        assert sympy.isprime(p)


def test_peeling_counts_singletons():
    # identity block plus a dense 2x2 block of rank 1
    cols = [{0: 1}, {1: 1}, {2: 2, 3: 4}, {2: 1, 3: 2}]
    m = ExactMatrix.from_columns(4, cols)
    assert rank(m) == 3 == sympy_rank(m)
    assert cokernel_dim(m) == 1


def test_from_columns_matches_rows():
    cols = [{0: 1, 2: -3}, {}, {1: 5}]
    m = ExactMatrix.from_columns(3, cols)
    assert m.tolist() == [[1, 0, 0], [0, 0, 5], [-3, 0, 0]]
    assert m == ExactMatrix.from_rows(m.tolist())


def test_stack_and_transpose_shapes():
    a = ExactMatrix.from_rows([[1, 2], [3, 4]])
    b = ExactMatrix.from_rows([[5, 6]])
    assert a.vstack(b).tolist() == [[1, 2], [3, 4], [5, 6]]
    assert a.hstack(a).tolist() == [[1, 2, 1, 2], [3, 4, 3, 4]]
    assert a.transpose().tolist() == [[1, 3], [2, 4]]


def test_empty_shapes():
    z = ExactMatrix(0, 3)
    assert rank(z) == 0
    assert kernel_basis(z) == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    assert kernel_basis(ExactMatrix(3, 0)) == []


def test_unknown_method():
    with pytest.raises(ValueError):
        rank(ExactMatrix(1, 1, [1]), "fast")


def test_kernel_is_canonical():
    m = ExactMatrix.from_rows([[2, 4, -2, 6]])
    assert kernel_basis(m) == [[-2, 1, 0, 0], [1, 0, 1, 0], [-3, 0, 0, 1]]


def test_large_sparse_matrix_against_modular():
    rng = random.Random(3)
    cols = []
    for j in range(120):
        col = {i: rng.randint(-5, 5) for i in rng.sample(range(100), 3)}
        cols.append(col)
    m = ExactMatrix.from_columns(100, cols)
    assert rank(m) == rank(m, "modular", rng)


def test_invariant_flag_is_on_under_pytest():
    assert gradedla.CHECK_INVARIANTS
