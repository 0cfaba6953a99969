"""Sample (sketch) machinery for randomized pivoting.

A Gaussian sketch B = Omega A with l = b + p rows preserves trailing column
norms well enough to choose b pivots per block from B alone. After a block is
factored, the next block's sample is derived from the current one with the
update

    B_next = [ S12 - S11 (R11^{-1} R12) ]
             [ S22                      ]

so the full matrix is never re-read for pivoting. The sample is an l x n
strip assumed to live in fast memory; work on it is charged to no
communication counter.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .counters import CommCounters
from .householder import ReflectorBlock
from .reference import _packed_block, _qrcp_core
from .validation import check_matrix

__all__ = [
    "SAMPLE_FLOOR",
    "SketchConfig",
    "sample_build",
    "sample_qrcp",
    "sample_update",
    "SampleState",
]

# The randomized loops stop once the sample's strongest trailing column has
# fallen this far below the strongest initial one.
SAMPLE_FLOOR = 2.0**-48


@dataclass
class SketchConfig:
    """Sketch shape: block size b, padding p, RNG seed; l = b + p sample rows."""

    b: int = 32
    p: int = 8
    seed: int = 0

    def __post_init__(self):
        if self.b < 1:
            raise ValueError("block size b must be >= 1")
        if self.p < 0:
            raise ValueError("padding p must be >= 0")

    @property
    def ell(self) -> int:
        return self.b + self.p


def sample_build(A: np.ndarray, ell: int, stream, counters: CommCounters | None = None,
                 mid_loop: bool = False) -> np.ndarray:
    """B = Omega A with Omega an l x m Gaussian iid draw from ``stream``.

    The product reads all of A and is charged to blas3; mid-loop rebuilds
    (the resampling variant) additionally count as a trailing pass.
    """
    m, n = A.shape
    if ell < 1:
        raise ValueError("sample must have at least one row")
    Omega = stream.matrix(ell, m)
    B = np.asfortranarray(Omega @ A)
    if counters is not None:
        counters.add_blas3(ell, m, n)
        if mid_loop:
            counters.add_pass()
    return B


@dataclass
class SampleState:
    """Partially factored sample: U^T B P = [S11 S12; 0 S22].

    ``B`` is the transformed array itself (reflector tails packed under the
    S11 diagonal), ``u_block`` the compact-WY form of U, ``local_perm`` the
    permutation applied to the sample's (and hence the matrix's) columns.
    """

    B: np.ndarray
    S11: np.ndarray
    S12: np.ndarray
    S22: np.ndarray
    local_perm: np.ndarray
    u_block: ReflectorBlock
    achieved: int


def sample_qrcp(B: np.ndarray, b: int) -> SampleState:
    """Pivoted QR of the sample, halted after b pivots.

    Runs the same per-column kernel as qrcp_blas2, so sample pivot decisions
    are bit-identical to a reference pivoted QR of B. Returns fewer than b
    pivots when the sample runs out of numerically nonzero columns.
    """
    work = check_matrix(B, copy=True)
    ell, n = work.shape
    if not (0 <= b <= min(ell, n)):
        raise ValueError(f"need 0 <= b <= min(l, n) = {min(ell, n)}, got b={b}")
    scratch = CommCounters()  # sample work is charged to no counter
    taus, perm, achieved = _qrcp_core(work, b, scratch)
    u_block = _packed_block(work, taus, achieved)
    return SampleState(
        B=work,
        S11=np.triu(work[:achieved, :achieved]),
        S12=work[:achieved, achieved:],
        S22=work[achieved:, achieved:],
        local_perm=perm,
        u_block=u_block,
        achieved=achieved,
    )


def _solve_upper(R11: np.ndarray, Bcols: np.ndarray) -> np.ndarray:
    """Back substitution for X = R11^{-1} Bcols, R11 upper triangular."""
    X = np.array(Bcols, dtype=np.float64, order="F", copy=True)
    for i in range(R11.shape[0] - 1, -1, -1):
        if i + 1 < R11.shape[0]:
            X[i] -= R11[i, i + 1 :] @ X[i + 1 :]
        X[i] /= R11[i, i]
    return X


def sample_update(state: SampleState, R11: np.ndarray, R12: np.ndarray) -> np.ndarray:
    """Next block's sample from the current one and the block's R rows.

    R11 must be nonsingular to working precision (|R11[i,i]| above 2^-52 of
    |R11[0,0]|); callers that detect rank exhaustion truncate instead of
    updating. The inverse is never formed: R11^{-1} R12 is a triangular solve.
    """
    bhat = state.achieved
    if R11.shape != (bhat, bhat) or R12.shape[0] != bhat:
        raise ValueError("R11/R12 do not match the sample's achieved block size")
    diag = np.abs(np.diag(R11))
    if bhat and diag.min() <= 2.0**-52 * diag[0]:
        raise np.linalg.LinAlgError(
            "R11 is numerically singular; the factorization rank is exhausted"
        )
    X = _solve_upper(R11, R12)
    top = state.S12 - state.S11 @ X
    return np.asfortranarray(np.vstack([top, state.S22]))
