"""Synthetic test matrices with known structure."""

from __future__ import annotations

import numpy as np

from .rng import NormalStream

__all__ = ["synth_decay", "synth_giid", "synth_kahan", "synth_matrix"]


def synth_decay(m: int, n: int, ratio: float = 0.8, seed: int = 0) -> np.ndarray:
    """Dense matrix with geometric singular values ratio^i and random
    orthogonal factors drawn from the seed's counter stream."""
    if not 0.0 < ratio < 1.0:
        raise ValueError("decay ratio must lie in (0, 1)")
    if min(m, n) < 1:
        raise ValueError("matrix must be nonempty")
    kmin = min(m, n)
    stream = NormalStream(seed)
    U, _ = np.linalg.qr(stream.matrix(m, kmin))
    V, _ = np.linalg.qr(stream.matrix(n, kmin))
    sigma = ratio ** np.arange(kmin)
    return np.asfortranarray((U * sigma) @ V.T)


def synth_giid(m: int, n: int, seed: int = 0) -> np.ndarray:
    """Gaussian iid matrix from the counter stream."""
    return NormalStream(seed).matrix(m, n)


def synth_kahan(n: int, c: float = 0.285) -> np.ndarray:
    """Kahan's upper-triangular matrix: unit-norm columns, graded diagonal,
    the classic stress case where greedy pivoting misjudges the rank."""
    if not 0.0 < c < 1.0:
        raise ValueError("c must lie in (0, 1)")
    s = np.sqrt(1.0 - c * c)
    K = np.eye(n) - c * np.triu(np.ones((n, n)), 1)
    K *= (s ** np.arange(n))[:, None]
    return np.asfortranarray(K)


def synth_matrix(kind: str, seed: int = 0, **params) -> np.ndarray:
    """Dispatch on kind: decay(m, n, ratio), giid(m, n), kahan(n, c)."""
    kind = kind.lower()
    if kind == "decay":
        return synth_decay(int(params["m"]), int(params["n"]),
                           float(params.get("ratio", 0.8)), seed)
    if kind == "giid":
        return synth_giid(int(params["m"]), int(params["n"]), seed)
    if kind == "kahan":
        return synth_kahan(int(params["n"]), float(params.get("c", 0.285)))
    raise ValueError(f"unknown synthetic matrix kind: {kind!r}")
