"""Input validation helpers shared by the factorization routines and estimators.

Matrices are handled as float64 Fortran-ordered numpy arrays: column pivoting
swaps contiguous memory in that layout, and reflector panels pack under the
diagonal of the same array.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "check_matrix",
    "check_permutation",
    "check_block_args",
    "check_target_rank",
    "invert_permutation",
]


def check_matrix(A, name: str = "A", copy: bool = False) -> np.ndarray:
    """Return ``A`` as a 2-d float64 Fortran-ordered array with finite entries.

    Raises ValueError on wrong dimensionality or non-finite entries. When
    ``copy`` is true the result never aliases the input (factorizations that
    work in place ask for a copy up front).
    """
    if copy:
        M = np.array(A, dtype=np.float64, order="F", copy=True)
    else:
        # copy-only-if-needed; np.array(copy=False) errors on that since numpy 2
        M = np.asfortranarray(A, dtype=np.float64)
    if M.ndim != 2:
        raise ValueError(f"{name} must be 2-dimensional, got ndim={M.ndim}")
    if M.size and not np.isfinite(M).all():
        bad = int(np.count_nonzero(~np.isfinite(M)))
        raise ValueError(f"{name} contains {bad} non-finite entries")
    return M


def check_permutation(perm, n: int, name: str = "perm") -> np.ndarray:
    """Validate that ``perm`` is a bijection on 0..n-1 and return it as int64."""
    p = np.asarray(perm, dtype=np.int64)
    if p.shape != (n,):
        raise ValueError(f"{name} must have shape ({n},), got {p.shape}")
    seen = np.zeros(n, dtype=bool)
    if n:
        if p.min() < 0 or p.max() >= n:
            raise ValueError(f"{name} entries must lie in [0, {n})")
        seen[p] = True
    if not seen.all():
        raise ValueError(f"{name} is not a bijection on 0..{n - 1}")
    return p


def invert_permutation(perm: np.ndarray) -> np.ndarray:
    inv = np.empty_like(perm)
    inv[perm] = np.arange(perm.shape[0], dtype=perm.dtype)
    return inv


def check_target_rank(m: int, n: int, k: int | None) -> int:
    """Resolve an explicit or defaulted factorization rank.

    ``None`` means the full min(m, n); an explicit k outside [1, min(m, n)]
    is rejected rather than clamped.
    """
    if k is None:
        return min(m, n)
    if not 1 <= k <= min(m, n):
        raise ValueError(f"rank k={k} must satisfy 1 <= k <= min(m, n) = {min(m, n)}")
    return int(k)


def check_block_args(m: int, n: int, k: int, b: int | None = None, p: int | None = None) -> None:
    """Shared sanity checks for rank / block-size / padding arguments."""
    if k < 0 or k > min(m, n):
        raise ValueError(f"rank k={k} must satisfy 0 <= k <= min(m, n) = {min(m, n)}")
    if b is not None and not (1 <= b):
        raise ValueError(f"block size b={b} must be >= 1")
    if p is not None and p < 0:
        raise ValueError(f"padding p={p} must be >= 0")
