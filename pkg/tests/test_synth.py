"""Synthetic matrix generators."""

import numpy as np
import pytest

from sketchqr.jacobi import jacobi_svd
from sketchqr.synth import synth_decay, synth_giid, synth_kahan, synth_matrix


def test_decay_spectrum():
    A = synth_decay(16, 16, ratio=0.5, seed=1)
    _, s, _ = jacobi_svd(A)
    np.testing.assert_allclose(s, 0.5 ** np.arange(16), atol=1e-8)


def test_decay_rectangular():
    A = synth_decay(20, 12, ratio=0.8, seed=2)
    assert A.shape == (20, 12)
    _, s, _ = jacobi_svd(A)
    np.testing.assert_allclose(s, 0.8 ** np.arange(12), atol=1e-8)


def test_decay_deterministic():
    np.testing.assert_array_equal(synth_decay(10, 10, 0.9, seed=5),
                                  synth_decay(10, 10, 0.9, seed=5))


def test_giid_deterministic():
    np.testing.assert_array_equal(synth_giid(9, 7, seed=3), synth_giid(9, 7, seed=3))
    assert synth_giid(9, 7, seed=3).shape == (9, 7)


def test_kahan_structure():
    K = synth_kahan(12, c=0.285)
    np.testing.assert_allclose(K, np.triu(K), atol=0)
    np.testing.assert_allclose(np.linalg.norm(K, axis=0), np.ones(12), rtol=1e-12)
    # strictly decreasing row scaling s^i
    d = np.diag(K)
    assert np.all(d[:-1] > d[1:])


def test_kahan_is_hard_for_greedy_pivoting():
    # the classic property: trailing singular value far below any R diagonal
    K = synth_kahan(48)
    s = np.linalg.svd(K, compute_uv=False)
    from sketchqr.reference import qrcp_blas2

    d = qrcp_blas2(K).r_diag
    assert s[-1] < 0.1 * d[-1]


def test_dispatcher():
    A = synth_matrix("decay", seed=4, m=8, n=6, ratio=0.7)
    assert A.shape == (8, 6)
    B = synth_matrix("giid", seed=4, m=5, n=5)
    assert B.shape == (5, 5)
    C = synth_matrix("kahan", n=7)
    assert C.shape == (7, 7)
    with pytest.raises(ValueError):
        synth_matrix("mystery", seed=0)


def test_validation():
    with pytest.raises(ValueError):
        synth_decay(0, 4, 0.5)
    with pytest.raises(ValueError):
        synth_decay(4, 4, ratio=1.5)
    with pytest.raises(ValueError):
        synth_kahan(4, c=1.0)
