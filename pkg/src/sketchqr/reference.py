"""Column-pivoted QR references: the per-column BLAS-2 algorithm and its
blocked BLAS-3 reformulation.

Both pick the trailing column of maximal 2-norm at every step (ties to the
lowest index) and must produce the same pivot sequence; the blocked variant
only reorganizes the arithmetic. Trailing column norms are downdated rather
than recomputed, with a cancellation guard that falls back to an exact
recompute, and factorizations stop early once the trailing mass is at the
noise floor of the input.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .counters import CommCounters
from .householder import (
    ReflectorBlock,
    apply_blocks_q,
    blocks_q_columns,
    house_gen,
    wy_build_T,
)
from .validation import check_matrix, check_target_rank, invert_permutation

__all__ = [
    "NORM_GUARD",
    "RANK_FLOOR",
    "downdate_norms",
    "qrcp_blas2",
    "qrcp_blocked",
    "qr_blocked",
    "PivotedFactorization",
]

# Downdated squared norms below this fraction of their last exactly computed
# value have lost ~half the mantissa and are recomputed (2-norm drop ~2^-20).
NORM_GUARD = 2.0**-40

# Trailing columns at or below RANK_FLOOR * ||A||_F are numerical noise; the
# pivoted factorizations stop there and report the achieved rank.
RANK_FLOOR = 2.0**-52


def downdate_norms(norms_sq, ref_sq, r_row, scale_guard: float = NORM_GUARD):
    """Remove one R row's contribution from trailing squared column norms.

    Returns the downdated squared norms and a mask of columns whose value
    fell below ``scale_guard`` times the reference (their last exactly
    computed squared norm) and must be recomputed by the caller; negative
    results from cancellation are clamped onto the same path.
    """
    norms_sq = norms_sq - r_row * r_row
    mask = norms_sq < scale_guard * ref_sq
    np.maximum(norms_sq, 0.0, out=norms_sq)
    return norms_sq, mask


@dataclass
class PivotedFactorization:
    """Result of a (possibly truncated) pivoted QR: A[:, perm] ~= Q R.

    Q is held as compact-WY reflector blocks; R is achieved_rank x n upper
    trapezoidal; perm maps factored column position to original column.
    """

    m: int
    n: int
    blocks: list
    R: np.ndarray
    perm: np.ndarray
    achieved_rank: int
    counters: CommCounters = field(default_factory=CommCounters)

    def q_columns(self, rank: int | None = None) -> np.ndarray:
        r = self.achieved_rank if rank is None else min(rank, self.achieved_rank)
        return blocks_q_columns(self.blocks, self.m, r)

    def apply_q(self, C: np.ndarray) -> np.ndarray:
        return apply_blocks_q(self.blocks, C)

    def reconstruct(self, rank: int | None = None) -> np.ndarray:
        """Rank-r approximation of A, columns back in original order."""
        r = self.achieved_rank if rank is None else min(rank, self.achieved_rank)
        approx = self.q_columns(r) @ self.R[:r, :]
        return np.asfortranarray(approx[:, invert_permutation(self.perm)])

    def rel_residual(self, A: np.ndarray, rank: int | None = None) -> float:
        denom = np.linalg.norm(A)
        if denom == 0.0:
            return 0.0
        return float(np.linalg.norm(A - self.reconstruct(rank)) / denom)

    @property
    def r_diag(self) -> np.ndarray:
        r = self.achieved_rank
        return np.abs(np.diag(self.R[:r, :r])) if r else np.zeros(0)


def _rank_floor_sq(work: np.ndarray) -> float:
    fro = float(np.linalg.norm(work))
    return (RANK_FLOOR * fro) ** 2


def _qrcp_core(work: np.ndarray, k: int, counters: CommCounters):
    """In-place BLAS-2 pivoted QR of ``work``; reflector tails pack under the
    diagonal, R fills the upper triangle, the trailing block stays updated.

    Returns (taus, perm, achieved_rank).
    """
    m, n = work.shape
    kmax = min(k, m, n)
    perm = np.arange(n, dtype=np.int64)
    taus = np.zeros(kmax)
    norms_sq = np.einsum("ij,ij->j", work, work)
    ref_sq = norms_sq.copy()
    floor_sq = _rank_floor_sq(work)
    achieved = 0
    for j in range(kmax):
        c = j + int(np.argmax(norms_sq[j:]))
        if norms_sq[c] <= floor_sq:
            break
        if c != j:
            work[:, [j, c]] = work[:, [c, j]]
            perm[[j, c]] = perm[[c, j]]
            norms_sq[[j, c]] = norms_sq[[c, j]]
            ref_sq[[j, c]] = ref_sq[[c, j]]
        y, tau, beta = house_gen(work[j:, j])
        ntrail = n - j - 1
        if ntrail:
            w = tau * (y @ work[j:, j + 1 :])
            work[j:, j + 1 :] -= np.outer(y, w)
            counters.add_blas2(2 * (m - j) * ntrail)
        counters.add_pass()
        work[j, j] = beta
        work[j + 1 :, j] = y[1:]
        taus[j] = tau
        achieved = j + 1
        if ntrail:
            r_row = work[j, j + 1 :]
            norms_sq[j + 1 :], mask = downdate_norms(norms_sq[j + 1 :], ref_sq[j + 1 :], r_row)
            if mask.any():
                for c2 in (j + 1 + np.nonzero(mask)[0]):
                    v = work[j + 1 :, c2]
                    exact = float(v @ v)
                    norms_sq[c2] = exact
                    ref_sq[c2] = exact
    return taus[:achieved], perm, achieved


def _packed_block(work: np.ndarray, taus: np.ndarray, achieved: int) -> ReflectorBlock:
    m = work.shape[0]
    Y = np.zeros((m, achieved), order="F")
    for c in range(achieved):
        Y[c, c] = 1.0
        Y[c + 1 :, c] = work[c + 1 :, c]
    return ReflectorBlock(Y, taus)


def qrcp_blas2(A, k: int | None = None) -> PivotedFactorization:
    """Per-column pivoted QR (the textbook BLAS-2 algorithm)."""
    work = check_matrix(A, copy=True)
    m, n = work.shape
    kmax = check_target_rank(m, n, k)
    counters = CommCounters()
    taus, perm, achieved = _qrcp_core(work, kmax, counters)
    R = np.triu(work[:achieved, :])
    blocks = [_packed_block(work, taus, achieved)] if achieved else []
    return PivotedFactorization(m, n, blocks, R, perm, achieved, counters)


def qrcp_blocked(A, k: int | None = None, b: int = 32) -> PivotedFactorization:
    """Blocked pivoted QR with deferred trailing updates.

    Within a block only the pivot column and the pivot row are brought up to
    date (through the accumulated reflector inner products W); the trailing
    matrix below the panel is updated once per block with a single GEMM.
    Pivot decisions match qrcp_blas2.
    """
    if b < 1:
        raise ValueError("block size b must be >= 1")
    work = check_matrix(A, copy=True)
    m, n = work.shape
    kmax = check_target_rank(m, n, k)
    counters = CommCounters()
    perm = np.arange(n, dtype=np.int64)
    norms_sq = np.einsum("ij,ij->j", work, work)
    ref_sq = norms_sq.copy()
    floor_sq = _rank_floor_sq(work)

    blocks: list[ReflectorBlock] = []
    tau_all: list[float] = []
    achieved = 0
    exhausted = False

    while achieved < kmax and not exhausted:
        i0 = achieved
        bb = min(b, kmax - i0)
        mrows = m - i0
        Ypan = np.zeros((mrows, bb), order="F")
        Wt = np.zeros((bb, n - i0), order="F")  # rows: block reflectors; cols: i0..n
        tau_pan = np.zeros(bb)
        jj = 0
        for t in range(bb):
            j = i0 + t
            c = j + int(np.argmax(norms_sq[j:]))
            if norms_sq[c] <= floor_sq:
                exhausted = True
                break
            if c != j:
                work[:, [j, c]] = work[:, [c, j]]
                perm[[j, c]] = perm[[c, j]]
                norms_sq[[j, c]] = norms_sq[[c, j]]
                ref_sq[[j, c]] = ref_sq[[c, j]]
                Wt[:, [t, c - i0]] = Wt[:, [c - i0, t]]
            # Bring the pivot column up to date with this block's reflectors.
            if t:
                work[j:, j] -= Ypan[t:, :t] @ Wt[:t, t]
            y, tau, beta = house_gen(work[j:, j])
            Ypan[t:, t] = y
            tau_pan[t] = tau
            work[j, j] = beta
            work[j + 1 :, j] = y[1:]
            # Adjusted inner products for the new reflector over the block-
            # start trailing columns: w^T = tau (y^T A - (y^T Y) W^T).
            if j + 1 < n:
                yTA = y @ work[j:, j + 1 :]
                if t:
                    yTA -= (y @ Ypan[t:, :t]) @ Wt[:t, t + 1 :]
                Wt[t, t + 1 :] = tau * yTA
                counters.add_blas2((m - j) * (n - j - 1))
                # Materialize the pivot row of R across the trailing columns.
                work[j, j + 1 :] -= Ypan[t, : t + 1] @ Wt[: t + 1, t + 1 :]
            counters.add_pass()
            tau_all.append(tau)
            jj = t + 1
            achieved = j + 1
            if j + 1 < n:
                r_row = work[j, j + 1 :]
                norms_sq[j + 1 :], mask = downdate_norms(norms_sq[j + 1 :], ref_sq[j + 1 :], r_row)
                if mask.any():
                    for c2 in (j + 1 + np.nonzero(mask)[0]):
                        # Trailing columns are stale; reconstruct through W.
                        v = work[j + 1 :, c2] - Ypan[t + 1 :, : t + 1] @ Wt[: t + 1, c2 - i0]
                        exact = float(v @ v)
                        norms_sq[c2] = exact
                        ref_sq[c2] = exact
        if jj == 0:
            break
        Yfull = np.zeros((m, jj), order="F")
        Yfull[i0:, :] = Ypan[:, :jj]
        blocks.append(ReflectorBlock(Yfull, tau_pan[:jj].copy(), offset=i0))
        # One GEMM updates the trailing matrix below the already-final R rows.
        ncols = n - (i0 + jj)
        if ncols and mrows - jj > 0 and not exhausted:
            work[i0 + jj :, i0 + jj :] -= Ypan[jj:, :jj] @ Wt[:jj, jj : n - i0]
            counters.add_pass()
            counters.add_blas3(mrows - jj, jj, ncols)

    R = np.triu(work[:achieved, :])
    return PivotedFactorization(m, n, blocks, R, perm, achieved, counters)


def qr_blocked(A, k: int | None = None, b: int = 32) -> PivotedFactorization:
    """Blocked unpivoted QR; perm is the identity.

    Rank-deficient columns produce identity reflectors and zero R diagonals
    rather than early exit, since without pivoting there is no better column
    to promote.
    """
    if b < 1:
        raise ValueError("block size b must be >= 1")
    work = check_matrix(A, copy=True)
    m, n = work.shape
    kmax = check_target_rank(m, n, k)
    counters = CommCounters()
    blocks: list[ReflectorBlock] = []

    for i0 in range(0, kmax, b):
        bb = min(b, kmax - i0)
        tau_pan = np.zeros(bb)
        for t in range(bb):
            j = i0 + t
            y, tau, beta = house_gen(work[j:, j])
            tau_pan[t] = tau
            pend = i0 + bb
            if j + 1 < pend:
                w = tau * (y @ work[j:, j + 1 : pend])
                work[j:, j + 1 : pend] -= np.outer(y, w)
            work[j, j] = beta
            work[j + 1 :, j] = y[1:]
        Yfull = np.zeros((m, bb), order="F")
        for t in range(bb):
            Yfull[i0 + t, t] = 1.0
            Yfull[i0 + t + 1 :, t] = work[i0 + t + 1 :, i0 + t]
        block = ReflectorBlock(Yfull, tau_pan, offset=i0)
        blocks.append(block)
        ncols = n - (i0 + bb)
        if ncols:
            Yloc = Yfull[i0:, :]
            W = block.T.T @ (Yloc.T @ work[i0:, i0 + bb :])
            work[i0:, i0 + bb :] -= Yloc @ W
            counters.add_pass(2)
            counters.add_blas3(bb, m - i0, ncols)
            counters.add_blas3(m - i0, bb, ncols)

    R = np.triu(work[:kmax, :])
    perm = np.arange(n, dtype=np.int64)
    return PivotedFactorization(m, n, blocks, R, perm, kmax, counters)
