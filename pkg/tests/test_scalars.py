import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bihom.scalars import Mat, Subspace, nullspace, rank, solve

import oracles

rationals = st.fractions(
    min_value=-9, max_value=9, max_denominator=4
)


@st.composite
def matrices(draw, max_rows=5, max_cols=5):
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    ents = draw(st.lists(rationals, min_size=r * c, max_size=r * c))
    return Mat(r, c, ents)


@given(matrices())
@settings(max_examples=60, deadline=None)
def test_rank_nullity(M):
    assert rank(M) + nullspace(M).dim == M.cols


@given(matrices())
@settings(max_examples=60, deadline=None)
def test_nullspace_vectors_are_exact_kernel_elements(M):
    ns = nullspace(M)
    for v in ns.basis_rows():
        assert all(x == 0 for x in M.apply(v))


@given(matrices(), st.integers(0, 2**30))
@settings(max_examples=40, deadline=None)
def test_rank_matches_independent_elimination(M, seed):
    rows = oracles.mat_rows(M)
    assert rank(M) == oracles.checked_rank(rows, seed=seed)


def test_rank_modular_consistency_on_fixed_matrices():
    fixed = [
        Mat.from_rows([[1, 2, 3], [4, 5, 6], [7, 8, 9]]),
        Mat.from_rows([[Fraction(1, 2), Fraction(1, 3)], [Fraction(1, 4), Fraction(1, 6)]]),
        Mat.zeros(3, 4),
        Mat.identity(5),
    ]
    for M in fixed:
        rows = oracles.mat_rows(M)
        r = rank(M)
        for p in oracles.PRIMES[:3]:
            assert oracles.rank_mod(rows, p) == r


@given(matrices(max_rows=4, max_cols=4), st.randoms(use_true_random=False))
@settings(max_examples=40, deadline=None)
def test_nullspace_is_canonical_under_row_operations(M, rng):
    """Row-equivalent matrices must produce the identical Subspace object."""
    rows = [list(M.row(i)) for i in range(M.rows)]
    for _ in range(6):
        i = rng.randrange(M.rows)
        j = rng.randrange(M.rows)
        c = Fraction(rng.randint(-3, 3))
        if i == j:
            if c not in (0, 1):
                rows[i] = [c * x for x in rows[i]]
        else:
            rows[i] = [x + c * y for x, y in zip(rows[i], rows[j])]
    M2 = Mat.from_rows(rows)
    assert nullspace(M) == nullspace(M2)


@given(st.lists(st.lists(rationals, min_size=3, max_size=3), min_size=1, max_size=4))
@settings(max_examples=40, deadline=None)
def test_subspace_ignores_spanning_set_presentation(vecs):
    direct = Subspace(3, vecs)
    doubled = Subspace(3, [[2 * x for x in v] for v in vecs] + vecs)
    assert direct == doubled
    assert direct.dim == doubled.dim


def test_subspace_membership():
    S = Subspace(3, [[1, 0, 1], [0, 1, 1]])
    assert S.contains([1, 1, 2])
    assert S.contains([2, -1, 1])
    assert not S.contains([0, 0, 1])
    assert S.contains_space(Subspace(3, [[1, -1, 0]]))
    assert not S.contains_space(Subspace(3, [[1, 0, 0]]))


@given(matrices(max_rows=4, max_cols=4), st.lists(rationals, min_size=4, max_size=4))
@settings(max_examples=40, deadline=None)
def test_solve_agrees_with_dense_oracle(M, xs):
    b = Mat.column(M.apply(tuple(xs[: M.cols]) + (Fraction(0),) * max(0, M.cols - len(xs))))
    x = solve(M, b)
    assert x is not None
    assert Mat.column(M.apply(x.col(0))) == b
    ox = oracles.solve_dense(oracles.mat_rows(M), b.col(0))
    assert ox is not None
    assert list(M.apply(tuple(ox))) == list(b.col(0))


def test_solve_reports_inconsistency():
    M = Mat.from_rows([[1, 1], [1, 1]])
    b = Mat.column([1, 2])
    assert solve(M, b) is None
    assert oracles.solve_dense([[1, 1], [1, 1]], [1, 2]) is None


@given(matrices(max_rows=4, max_cols=4))
@settings(max_examples=30, deadline=None)
def test_transpose_involution_and_rank(M):
    assert M.transpose().transpose() == M
    assert rank(M) == rank(M.transpose())


def test_matrix_inverse_and_power():
    M = Mat.from_rows([[2, 1], [1, 1]])
    inv = M.inverse()
    assert inv is not None
    assert M @ inv == Mat.identity(2)
    assert M.power(3) == M @ M @ M
    assert M.power(-2) == inv @ inv
    assert Mat.from_rows([[1, 2], [2, 4]]).inverse() is None


def test_det_matches_rank_deficiency():
    rng = random.Random(7)
    for _ in range(25):
        M = Mat(3, 3, [Fraction(rng.randint(-4, 4)) for _ in range(9)])
        assert (M.det() == 0) == (rank(M) < 3)


def test_fraction_entries_survive_elimination():
    # denominators must not leak approximation anywhere
    M = Mat.from_rows(
        [
            [Fraction(1, 3), Fraction(2, 7), Fraction(5, 11)],
            [Fraction(3, 13), Fraction(1, 17), Fraction(7, 19)],
        ]
    )
    ns = nullspace(M)
    assert ns.dim == 1
    v = ns.basis_rows()[0]
    assert all(isinstance(x, Fraction) for x in v)
    assert all(x == 0 for x in M.apply(v))


def test_mat_shape_errors():
    with pytest.raises(ValueError):
        Mat(2, 2, [1, 2, 3])
    with pytest.raises(ValueError):
        Mat.from_rows([[1, 2], [3]])
    with pytest.raises(ValueError):
        Mat.identity(2) @ Mat.identity(3)
