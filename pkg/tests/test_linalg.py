import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from mlzbench.linalg import commutator, frobenius_norm, is_symmetric, solve_linear, sym_eigen, sym_eigvals

from .conftest import random_symmetric

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


def sym_matrices(max_n=8):
    return st.integers(1, max_n).flatmap(
        lambda n: arrays(np.float64, (n, n), elements=finite).map(lambda a: 0.5 * (a + a.T))
    )


# ---------------------------------------------------------------- commutator / norm


def test_commutator_diagonals_vanish():
    assert np.array_equal(commutator(np.diag([1.0, 2.0]), np.diag([3.0, 4.0])), np.zeros((2, 2)))


def test_commutator_hand_case():
    x = np.array([[0.0, 1.0], [1.0, 0.0]])
    y = np.diag([1.0, -1.0])
    assert np.array_equal(commutator(x, y), np.array([[0.0, -2.0], [2.0, 0.0]]))


def test_commutator_antisymmetric_random(rng):
    for _ in range(100):
        x, y = rng.normal(size=(2, 5, 5))
        assert np.allclose(commutator(x, y), -commutator(y, x), atol=0)


def test_commutator_shape_mismatch():
    with pytest.raises(ValueError):
        commutator(np.eye(2), np.eye(3))


@pytest.mark.parametrize(
    "x, expected", [(np.zeros((3, 3)), 0.0), (np.eye(4), 2.0), (np.array([[3.0, 4.0], [0.0, 0.0]]), 5.0)]
)
def test_frobenius_examples(x, expected):
    assert frobenius_norm(x) == expected


@given(arrays(np.float64, (4, 4), elements=finite))
def test_frobenius_matches_numpy(a):
    assert abs(frobenius_norm(a) - np.linalg.norm(a)) <= 1e-12 * (1 + np.linalg.norm(a))


def test_is_symmetric_relative():
    a = np.array([[1e6, 1.0], [1.0 + 1e-7, 2.0]])
    assert is_symmetric(a)
    assert not is_symmetric(np.array([[0.0, 1.0], [0.0, 0.0]]))
    assert not is_symmetric(np.ones((2, 3)))


# ---------------------------------------------------------------- Jacobi


def test_eigen_diagonal():
    d = sym_eigen(np.diag([3.0, 1.0, 2.0]))
    assert np.array_equal(d.values, [1.0, 2.0, 3.0])


def test_eigen_offdiagonal_pair():
    g = 0.37
    d = sym_eigen(np.array([[0.0, g], [g, 0.0]]))
    assert np.allclose(d.values, [-g, g], atol=1e-15)


def test_eigen_reconstruct_6x6(rng):
    s = random_symmetric(rng, 6)
    d = sym_eigen(s)
    assert np.max(np.abs(d.vectors @ np.diag(d.values) @ d.vectors.T - s)) < 1e-11


@pytest.mark.parametrize("n", [16, 32, 64])
def test_eigen_reconstruct_large(rng, n):
    s = random_symmetric(rng, n)
    d = sym_eigen(s)
    assert np.max(np.abs(d.vectors @ np.diag(d.values) @ d.vectors.T - s)) < 1e-11 * n
    assert np.max(np.abs(d.vectors.T @ d.vectors - np.eye(n))) < 1e-12 * n
    assert np.allclose(d.values, np.linalg.eigvalsh(s), atol=1e-12 * n)


@settings(max_examples=60, deadline=None)
@given(sym_matrices())
def test_eigen_properties(s):
    d = sym_eigen(s)
    n = s.shape[0]
    scale = max(1.0, np.max(np.abs(s)))
    assert np.all(np.diff(d.values) >= 0)
    assert np.max(np.abs(d.vectors.T @ d.vectors - np.eye(n))) < 1e-12
    assert np.max(np.abs(d.vectors @ np.diag(d.values) @ d.vectors.T - s)) < 1e-12 * scale * n
    assert np.allclose(sym_eigvals(s), d.values, atol=1e-12 * scale * n)


def test_eigen_sign_convention_and_determinism(rng):
    s = random_symmetric(rng, 7)
    d1, d2 = sym_eigen(s), sym_eigen(s.copy())
    assert np.array_equal(d1.values, d2.values)
    assert np.array_equal(d1.vectors, d2.vectors)
    for col in d1.vectors.T:
        assert col[np.argmax(np.abs(col))] > 0


def test_eigen_rejects_nonsymmetric():
    with pytest.raises(ValueError):
        sym_eigen(np.array([[1.0, 2.0], [0.0, 1.0]]))
    with pytest.raises(ValueError):
        sym_eigen(np.ones((2, 3)))


def test_eigen_results_read_only():
    d = sym_eigen(np.eye(2))
    with pytest.raises(ValueError):
        d.values[0] = 5.0


# ---------------------------------------------------------------- SVD solve


def test_solve_identity():
    r = solve_linear(np.eye(2), [1.0, 2.0])
    assert np.allclose(r.particular, [1.0, 2.0])
    assert r.nullspace == [] and r.residual == 0.0 and r.rank == 2


def test_solve_rank_deficient():
    r = solve_linear(np.array([[1.0, 0.0], [0.0, 0.0]]), [1.0, 0.0])
    assert np.allclose(r.particular, [1.0, 0.0])
    assert len(r.nullspace) == 1
    assert np.allclose(np.abs(r.nullspace[0]), [0.0, 1.0])
    assert r.residual == 0.0


def test_solve_inconsistent_reports_residual():
    r = solve_linear(np.array([[1.0], [0.0]]), [0.0, 1.0])
    assert r.residual == pytest.approx(1.0, abs=1e-15)


def test_solve_bad_shapes():
    with pytest.raises(ValueError):
        solve_linear(np.eye(3), [1.0, 2.0])
    with pytest.raises(ValueError):
        solve_linear(np.eye(2), [1.0, 2.0], tol=0.0)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 7), st.integers(0, 4), st.integers(0, 2**31 - 1))
def test_solve_nullspace_dimension(n, deficit, seed):
    rng = np.random.default_rng(seed)
    rank = max(1, n - deficit)
    m = rng.normal(size=(n + 2, rank)) @ rng.normal(size=(rank, n))
    x0 = rng.normal(size=n)
    r = solve_linear(m, m @ x0)
    assert r.rank == rank
    assert len(r.nullspace) == n - rank
    assert r.residual < 1e-10 * (1 + np.linalg.norm(m @ x0))
    for v in r.nullspace:
        assert np.linalg.norm(m @ v) < 1e-10 * np.linalg.norm(m)
