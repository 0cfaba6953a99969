import numpy as np
import pytest


def gauss(m, n, seed):
    """Oracle-side random matrix, independent of the package generator."""
    return np.asfortranarray(np.random.default_rng(seed).standard_normal((m, n)))


def decay_matrix(m, n, ratio, seed):
    """U diag(ratio^i) V^T with Haar-ish orthogonal factors from numpy."""
    rng = np.random.default_rng(seed)
    U, _ = np.linalg.qr(rng.standard_normal((m, min(m, n))))
    V, _ = np.linalg.qr(rng.standard_normal((n, min(m, n))))
    s = ratio ** np.arange(min(m, n))
    return np.asfortranarray((U * s) @ V.T)


@pytest.fixture
def rng():
    return np.random.default_rng(0xC0FFEE)
