import random

import pytest
from hypothesis import given, strategies as st

from trimdg.field import PrimeField
from trimdg.linalg import (LinearSolver, PolyMatrix, PreconditionError, graded_solve,
                           rank_over_k, solve_over_k, strand_rank)
from trimdg.poly import monomials_of_degree

from conftest import P, dense_rank_mod_p, random_poly

F = PrimeField(P)


def test_rank_and_solve_examples():
    assert rank_over_k([[1, 2], [2, 4]], F) == 1
    assert solve_over_k([[1, 1], [0, 1]], [3, 2], F) == [1, 2]
    assert solve_over_k([[0, 0], [0, 0]], [1, 0], F) is None
    assert rank_over_k([], F) == 0


def test_graded_solve_examples(R):
    x1, x2, x3 = R.gens
    M = PolyMatrix(R, [[x1, x2, x3]], [0], [1, 1, 1])
    assert graded_solve(M, [x1 ** 2]) == (x1, R.zero, R.zero)
    assert graded_solve(M, [R.one]) is None
    assert graded_solve(M, [R.zero]) == (R.zero,) * 3
    with pytest.raises(PreconditionError):
        graded_solve(M, [x1 + x2 ** 2])


def test_inhomogeneous_matrix_rejected(R):
    x1, x2, _ = R.gens
    with pytest.raises(PreconditionError):
        PolyMatrix(R, [[x1, x2 ** 2]], [0], [1, 1])
    M = PolyMatrix(R, [[x1, x2 ** 2]], [0], [1, 1], check=False)
    assert M.homogeneity_violations()


@given(st.lists(st.lists(st.integers(0, P - 1), min_size=4, max_size=4), min_size=1, max_size=6))
def test_linear_solver_kernel_and_solution(rows):
    cols = [{i: r[j] for i, r in enumerate(rows) if r[j]} for j in range(4)]
    S = LinearSolver(F, len(rows), cols)
    rank = dense_rank_mod_p(rows)
    assert len(S.kernel_basis()) == 4 - rank
    for v in S.kernel_basis():
        for r in rows:
            assert sum(r[j] * v.get(j, 0) for j in range(4)) % P == 0
    z = {i: sum(r) % P for i, r in enumerate(rows) if sum(r) % P}
    y = S.solve(z)
    assert y is not None
    for i, r in enumerate(rows):
        assert sum(r[j] * y.get(j, 0) for j in range(4)) % P == z.get(i, 0)


def strand_matrix(M, D):
    """Dense matrix of M on degree D, built from polynomial products."""
    R = M.ring
    rows = [(i, mon) for i, e in enumerate(M.row_degs) for mon in monomials_of_degree(3, D - e)]
    rpos = {key: k for k, key in enumerate(rows)}
    cols = [(j, mon) for j, e in enumerate(M.col_degs) for mon in monomials_of_degree(3, D - e)]
    A = [[0] * len(cols) for _ in rows]
    for c, (j, mon) in enumerate(cols):
        for i in range(M.nrows):
            prod = M[i, j] * R.monomial(mon)
            for m, a in prod.terms.items():
                A[rpos[(i, m)]][c] = a
    return A, rows


def random_instance(R, rng):
    nr, nc = rng.randint(1, 3), rng.randint(1, 4)
    row_degs = [rng.randint(0, 2) for _ in range(nr)]
    col_degs = [rng.randint(2, 4) for _ in range(nc)]
    ent = [[random_poly(R, c - r, rng, density=0.4) if c >= r else R.zero for c in col_degs]
           for r in row_degs]
    M = PolyMatrix(R, ent, row_degs, col_degs)
    D = max(col_degs) + rng.randint(0, 2)
    if rng.random() < 0.5:
        y = [random_poly(R, D - c, rng, density=0.5) for c in col_degs]
        z = M.apply(y)
    else:
        z = [random_poly(R, D - r, rng, density=0.6) for r in row_degs]
    return M, D, z


def brute_force_solvable(M, D, z):
    A, rows = strand_matrix(M, D)
    rhs = [z[i].coefficient(mon) for (i, mon) in rows]
    aug = [row + [b] for row, b in zip(A, rhs)]
    return dense_rank_mod_p(A) == dense_rank_mod_p(aug)


def test_graded_solve_matches_brute_force(R):
    rng = random.Random(7)
    count = 0
    while count < 100:
        M, D, z = random_instance(R, rng)
        if not any(z):
            continue
        unknowns = sum(R.dim(D - c) for c in M.col_degs)
        assert unknowns <= 200
        y = graded_solve(M, z)
        assert (y is not None) == brute_force_solvable(M, D, z)
        if y is not None:
            assert M.apply(y) == tuple(z)
        count += 1


def test_strand_rank_matches_dense(R):
    rng = random.Random(3)
    for _ in range(20):
        M, D, _ = random_instance(R, rng)
        A, _ = strand_matrix(M, D)
        assert strand_rank(M, D) == (dense_rank_mod_p(A) if A and A[0] else 0)


def test_matrix_algebra(R):
    x1, x2, x3 = R.gens
    A = PolyMatrix(R, [[x1, x2]], [0], [1, 1])
    B = PolyMatrix(R, [[x2], [-x1]], [1, 1], [2])
    assert (A @ B).is_zero()
    assert (A + A) == A.scale(2)
    assert (A - A).is_zero()
    I = PolyMatrix.identity(R, [1, 1])
    assert A @ I == A
    assert A.constant_part().is_zero()
    assert A.submatrix(cols=[1]) == PolyMatrix(R, [[x2]], [0], [1])
