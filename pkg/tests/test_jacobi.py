"""One-sided Jacobi SVD against numpy and structural oracles."""

import numpy as np

from conftest import gauss
from sketchqr.jacobi import jacobi_svd


def test_diagonal():
    U, s, V = jacobi_svd(np.diag([3.0, 1.0]))
    np.testing.assert_allclose(s, [3.0, 1.0])


def test_zero_matrix():
    U, s, V = jacobi_svd(np.zeros((4, 3)))
    np.testing.assert_array_equal(s, np.zeros(3))
    np.testing.assert_allclose(U.T @ U, np.eye(3), atol=1e-14)
    np.testing.assert_allclose(V.T @ V, np.eye(3), atol=1e-14)


def test_round_trip_and_orthogonality():
    A = gauss(20, 15, seed=3)
    U, s, V = jacobi_svd(A)
    assert np.linalg.norm(A - (U * s) @ V.T) <= 1e-10 * np.linalg.norm(A)
    np.testing.assert_allclose(U.T @ U, np.eye(15), atol=1e-12)
    np.testing.assert_allclose(V.T @ V, np.eye(15), atol=1e-12)
    assert np.all(np.diff(s) <= 0) and np.all(s >= 0)


def test_eckart_young_identity():
    A = gauss(20, 15, seed=3)
    U, s, V = jacobi_svd(A)
    for k in (0, 1, 7, 14):
        trunc = (U[:, :k] * s[:k]) @ V[:, :k].T
        np.testing.assert_allclose(
            np.linalg.norm(A - trunc), np.sqrt(np.sum(s[k:] ** 2)), rtol=1e-10)


def test_matches_numpy_singular_values():
    for seed, (m, n) in enumerate([(10, 10), (25, 12), (12, 25), (40, 7)]):
        A = gauss(m, n, seed)
        _, s, _ = jacobi_svd(A)
        np.testing.assert_allclose(s, np.linalg.svd(A, compute_uv=False), rtol=1e-10)


def test_orthogonal_input_unit_spectrum():
    Q, _ = np.linalg.qr(gauss(16, 16, seed=5))
    _, s, _ = jacobi_svd(Q)
    np.testing.assert_allclose(s, np.ones(16), atol=1e-12)


def test_rank_deficient():
    A = gauss(12, 5, seed=1) @ gauss(5, 12, seed=2)
    U, s, V = jacobi_svd(A)
    assert np.all(s[5:] <= 1e-10 * s[0])
    # basis completion keeps U orthonormal past the rank
    np.testing.assert_allclose(U.T @ U, np.eye(12), atol=1e-11)
    np.testing.assert_allclose(A, (U * s) @ V.T, atol=1e-10 * s[0])


def test_wide_matrix_transpose_path():
    A = gauss(6, 19, seed=8)
    U, s, V = jacobi_svd(A)
    assert U.shape == (6, 6) and V.shape == (19, 6)
    np.testing.assert_allclose(A, (U * s) @ V.T, atol=1e-11 * np.linalg.norm(A))
