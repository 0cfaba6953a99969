"""Randomized column-pivoted QR factorizations.

All variants choose pivots from a Gaussian sample B = Omega A instead of from
trailing column norms of A itself:

* ssrqrcp: one sample, all k pivots at once, then an unpivoted QR of the
  selected columns.
* rqrcp:  b pivots per block from the sample; after each block the sample is
  updated algebraically from the block's R rows, and the trailing matrix is
  updated with one block reflection.
* rsrqrcp: like rqrcp but draws a fresh sample of the trailing matrix each
  block instead of updating the old one (more slow-memory traffic, same
  factorization quality).
* trqrcp: like rqrcp but never updates the trailing matrix; pivot columns and
  rows are materialized on demand through the accumulated reflector inner
  products, so a rank-k factorization reads A O(1) times.
* tuxv:   trqrcp followed by QLP-style flip-flop QR/LQ passes, producing an
  approximate truncated SVD U X V^T.

Short matrices (sample rows l >= m) bypass sketching entirely and fall back
to the reference pivoted QR: the sketch cannot reduce the row dimension.
Randomized loops stop early once the sample's strongest trailing column falls
below SAMPLE_FLOOR of the strongest initial one, reporting the achieved rank.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .counters import CommCounters
from .householder import (
    ReflectorBlock,
    blocks_q_columns,
    house_gen,
    wy_build_T,
    wy_compose,
)
from .jacobi import jacobi_svd
from .reference import PivotedFactorization, qr_blocked, qrcp_blocked
from .rng import NormalStream
from .sketch import SAMPLE_FLOOR, sample_build, sample_qrcp, sample_update
from .validation import check_block_args, check_matrix, invert_permutation

__all__ = [
    "ssrqrcp",
    "rqrcp",
    "rsrqrcp",
    "trqrcp",
    "tuxv",
    "TruncatedFactorization",
    "TuxvResult",
]

_DIAG_FLOOR = 2.0**-52  # relative R11 diagonal floor guarding the sample update


@dataclass
class TruncatedFactorization(PivotedFactorization):
    """Pivoted factorization that never updated the trailing matrix.

    ``w_t`` holds the accumulated adjusted inner products W^T = T^T Y^T (A P),
    the state that substitutes for trailing updates.
    """

    w_t: np.ndarray = field(default=None)  # type: ignore[assignment]


@dataclass
class TuxvResult:
    """Rank-k QLP-style approximation A ~= U[:, :k] X V[:, :k]^T.

    U and V are compact-WY blocks; X is k x k triangular (upper after an odd
    number of flip-flop passes, lower after an even number); sigma_est holds
    |diag X|, or the singular values of X when refinement was requested.
    """

    U: ReflectorBlock | None
    X: np.ndarray
    V: ReflectorBlock | None
    sigma_est: np.ndarray
    achieved_rank: int
    counters: CommCounters
    m: int
    n: int

    def u_columns(self) -> np.ndarray:
        return blocks_q_columns([self.U] if self.U else [], self.m, self.achieved_rank)

    def v_columns(self) -> np.ndarray:
        return blocks_q_columns([self.V] if self.V else [], self.n, self.achieved_rank)

    def reconstruct(self) -> np.ndarray:
        if self.achieved_rank == 0:
            return np.zeros((self.m, self.n), order="F")
        return np.asfortranarray(self.u_columns() @ self.X @ self.v_columns().T)


def _empty(m: int, n: int, counters: CommCounters | None = None) -> PivotedFactorization:
    return PivotedFactorization(
        m, n, [], np.zeros((0, n), order="F"), np.arange(n, dtype=np.int64), 0,
        counters or CommCounters(),
    )


def _panel_qr(work: np.ndarray, i0: int, bb: int):
    """Unpivoted panel QR on work[i0:, i0:i0+bb], packing in place.

    Stops early at an exactly zero column (identity reflector would follow).
    Returns (Y_local, taus, completed) with Y_local spanning rows i0..m.
    """
    m = work.shape[0]
    Ypan = np.zeros((m - i0, bb), order="F")
    taus = np.zeros(bb)
    done = 0
    for t in range(bb):
        j = i0 + t
        y, tau, beta = house_gen(work[j:, j])
        if beta == 0.0:
            break
        if t + 1 < bb:
            w = tau * (y @ work[j:, j + 1 : i0 + bb])
            work[j:, j + 1 : i0 + bb] -= np.outer(y, w)
        work[j, j] = beta
        work[j + 1 :, j] = y[1:]
        Ypan[t:, t] = y
        taus[t] = tau
        done = t + 1
    return Ypan[:, :done], taus[:done], done


def _diag_ok(R11: np.ndarray) -> bool:
    d = np.abs(np.diag(R11))
    return d.size > 0 and d.min() > _DIAG_FLOOR * d[0]


def _sample_floor_sq(B: np.ndarray) -> float:
    init_max = np.einsum("ij,ij->j", B, B).max() if B.size else 0.0
    return SAMPLE_FLOOR**2 * init_max


def ssrqrcp(A, k: int, p: int = 8, seed: int = 0) -> PivotedFactorization:
    """Single-sample randomized pivoted QR: all k pivots from one sketch."""
    A = check_matrix(A)
    m, n = A.shape
    check_block_args(m, n, k, None, p)
    if k == 0:
        return _empty(m, n)
    ell = k + p
    if ell >= m:
        return qrcp_blocked(A, k, b=min(32, k))
    counters = CommCounters()
    B = sample_build(A, ell, NormalStream(seed), counters)
    state = sample_qrcp(B, k)
    if state.achieved == 0:
        return _empty(m, n, counters)
    Ap = np.asfortranarray(A[:, state.local_perm])
    qf = qr_blocked(Ap, state.achieved, b=min(32, state.achieved))
    counters.merge(qf.counters)
    return PivotedFactorization(
        m, n, qf.blocks, qf.R, state.local_perm.copy(), state.achieved, counters
    )


def _randomized_qrcp(A, k, b, p, seed, resample: bool) -> PivotedFactorization:
    A = check_matrix(A)
    m, n = A.shape
    check_block_args(m, n, k, b, p)
    if k == 0:
        return _empty(m, n)
    ell = b + p
    if ell >= m:
        return qrcp_blocked(A, k, b)

    counters = CommCounters()
    stream = NormalStream(seed)
    work = np.array(A, dtype=np.float64, order="F", copy=True)
    perm = np.arange(n, dtype=np.int64)
    B = sample_build(work, ell, stream, counters)
    floor_sq = _sample_floor_sq(B)
    blocks: list[ReflectorBlock] = []
    achieved = 0

    while achieved < k:
        i0 = achieved
        bb = min(b, k - i0)
        col_sq = np.einsum("ij,ij->j", B, B)
        if col_sq.size == 0 or col_sq.max() <= floor_sq:
            break
        state = sample_qrcp(B, bb)
        if state.achieved == 0:
            break
        work[:, i0:] = work[:, i0:][:, state.local_perm]
        perm[i0:] = perm[i0:][state.local_perm]
        Ypan, taus, bhat = _panel_qr(work, i0, state.achieved)
        if bhat == 0:
            break
        Yfull = np.zeros((m, bhat), order="F")
        Yfull[i0:, :] = Ypan
        block = ReflectorBlock(Yfull, taus.copy(), offset=i0)
        blocks.append(block)
        ncols = n - (i0 + bhat)
        if ncols:
            # Block reflection of the trailing matrix: two GEMM sweeps.
            W = block.T.T @ (Ypan.T @ work[i0:, i0 + bhat :])
            work[i0:, i0 + bhat :] -= Ypan @ W
            counters.add_pass(2)
            counters.add_blas3(bhat, m - i0, ncols)
            counters.add_blas3(m - i0, bhat, ncols)
        achieved = i0 + bhat
        if bhat < bb or achieved >= k or ncols == 0:
            break
        if resample:
            B = sample_build(work[achieved:, achieved:], ell, stream, counters, mid_loop=True)
        else:
            R11 = np.triu(work[i0:achieved, i0:achieved])
            if not _diag_ok(R11):
                break
            R12 = work[i0:achieved, achieved:]
            B = sample_update(state, R11, R12)

    R = np.triu(work[:achieved, :])
    return PivotedFactorization(m, n, blocks, R, perm, achieved, counters)


def rqrcp(A, k: int, b: int = 32, p: int = 8, seed: int = 0) -> PivotedFactorization:
    """Blocked randomized pivoted QR with algebraic sample updates."""
    return _randomized_qrcp(A, k, b, p, seed, resample=False)


def rsrqrcp(A, k: int, b: int = 32, p: int = 8, seed: int = 0) -> PivotedFactorization:
    """Blocked randomized pivoted QR, re-sketching the trailing matrix each block."""
    return _randomized_qrcp(A, k, b, p, seed, resample=True)


def _truncated_from_pivoted(pf: PivotedFactorization, A: np.ndarray) -> TruncatedFactorization:
    w_t = np.zeros((pf.achieved_rank, pf.n), order="F")
    if pf.blocks:
        combined = pf.blocks[0]
        for blk in pf.blocks[1:]:
            combined = wy_compose(combined, blk)
        Ap = A[:, pf.perm]
        w_t = combined.T.T @ (combined.Y.T @ Ap)
    return TruncatedFactorization(
        pf.m, pf.n, pf.blocks, pf.R, pf.perm, pf.achieved_rank, pf.counters, w_t=w_t
    )


def trqrcp(A, k: int, b: int = 32, p: int = 8, seed: int = 0,
           allow_large_k: bool = False) -> TruncatedFactorization:
    """Truncated randomized pivoted QR: no trailing matrix updates at all.

    Pivot columns are reconstructed as A - Y W^T on demand and new R rows fall
    out of the same identity, so the cost beyond the sketch is one pass of
    reflector inner products per block. Intended for k well below min(m, n);
    pass allow_large_k=True to exceed min(m, n)/2.
    """
    A = check_matrix(A)
    m, n = A.shape
    check_block_args(m, n, k, b, p)
    if not allow_large_k and k > min(m, n) // 2:
        raise ValueError(
            "trqrcp targets k <= min(m, n)/2; pass allow_large_k=True to override"
        )
    if k == 0:
        return TruncatedFactorization(
            m, n, [], np.zeros((0, n), order="F"),
            np.arange(n, dtype=np.int64), 0, CommCounters(),
            w_t=np.zeros((0, n), order="F"),
        )
    ell = b + p
    if ell >= m:
        return _truncated_from_pivoted(qrcp_blocked(A, k, b), A)

    counters = CommCounters()
    stream = NormalStream(seed)
    work = np.array(A, dtype=np.float64, order="F", copy=True)  # permuted, never updated
    perm = np.arange(n, dtype=np.int64)
    B = sample_build(work, ell, stream, counters)
    floor_sq = _sample_floor_sq(B)

    Yg = np.zeros((m, k), order="F")
    Wg = np.zeros((k, n), order="F")
    Rg = np.zeros((k, n), order="F")
    blocks: list[ReflectorBlock] = []
    achieved = 0

    while achieved < k:
        i0 = achieved
        bb = min(b, k - i0)
        col_sq = np.einsum("ij,ij->j", B, B)
        if col_sq.size == 0 or col_sq.max() <= floor_sq:
            break
        state = sample_qrcp(B, bb)
        if state.achieved == 0:
            break
        lp = state.local_perm
        work[:, i0:] = work[:, i0:][:, lp]
        perm[i0:] = perm[i0:][lp]
        Wg[:, i0:] = Wg[:, i0:][:, lp]
        Rg[:, i0:] = Rg[:, i0:][:, lp]
        # Materialize the selected panel through the accumulated reflections.
        panel = np.array(work[i0:, i0 : i0 + state.achieved], order="F", copy=True)
        if i0:
            panel -= Yg[i0:, :i0] @ Wg[:i0, i0 : i0 + state.achieved]
        Ypan, taus, bhat = _panel_qr(panel, 0, state.achieved)
        if bhat == 0:
            break
        R11 = np.triu(panel[:bhat, :bhat])
        T2 = wy_build_T(Ypan, taus)
        Yg[i0:, i0 : i0 + bhat] = Ypan
        Yfull = np.zeros((m, bhat), order="F")
        Yfull[i0:, :] = Ypan
        blocks.append(ReflectorBlock(Yfull, taus.copy(), T2, offset=i0))
        Rg[i0 : i0 + bhat, i0 : i0 + bhat] = R11
        ntrail = n - (i0 + bhat)
        R12 = np.zeros((bhat, 0))
        if ntrail:
            tcols = slice(i0 + bhat, n)
            # Adjusted inner products: W2^T = T2^T (Y2^T A - (Y2^T Y1) W1^T).
            G = Ypan.T @ work[i0:, tcols]
            counters.add_pass()
            counters.add_blas3(bhat, m - i0, ntrail)
            if i0:
                G -= (Ypan.T @ Yg[i0:, :i0]) @ Wg[:i0, tcols]
            Wg[i0 : i0 + bhat, tcols] = T2.T @ G
            # New R rows from the same identity, no trailing update needed.
            R12 = work[i0 : i0 + bhat, tcols] - Yg[i0 : i0 + bhat, : i0 + bhat] @ Wg[: i0 + bhat, tcols]
            Rg[i0 : i0 + bhat, tcols] = R12
        achieved = i0 + bhat
        if bhat < bb or achieved >= k or ntrail == 0:
            break
        if not _diag_ok(R11):
            break
        B = sample_update(state, R11, R12)

    return TruncatedFactorization(
        m, n, blocks, np.asfortranarray(np.triu(Rg[:achieved, :])), perm, achieved,
        counters, w_t=np.asfortranarray(Wg[:achieved, :]),
    )


def _compose_all(blocks: list) -> ReflectorBlock | None:
    if not blocks:
        return None
    out = blocks[0]
    for blk in blocks[1:]:
        out = wy_compose(out, blk)
    return out


def tuxv(A, k: int, j_max: int = 1, b: int = 32, p: int = 8, seed: int = 0,
         refine_sigma: bool = False, allow_large_k: bool = False) -> TuxvResult:
    """Approximate truncated SVD via trqrcp + QLP-style flip-flop passes.

    With j_max = 1 (default) the result is the rank-k truncation of the QLP
    decomposition that full randomized pivoted QR followed by an unpivoted LQ
    would produce; higher j_max tightens sigma_est toward the singular values.
    refine_sigma replaces sigma_est with the exact singular values of the
    small factor X (the approximation itself is unchanged).
    """
    A = check_matrix(A)
    m, n = A.shape
    if j_max < 1:
        raise ValueError("j_max must be >= 1")
    tf = trqrcp(A, k, b=b, p=p, seed=seed, allow_large_k=allow_large_k)
    khat = tf.achieved_rank
    counters = tf.counters
    if khat == 0:
        return TuxvResult(None, np.zeros((0, 0)), None, np.zeros(0), 0, counters, m, n)

    # Z0 = R P^T: R with columns back in original order; LQ via QR of Z0^T.
    Z0 = tf.R[:, invert_permutation(tf.perm)]
    vf = qr_blocked(np.asfortranarray(Z0.T), khat, b)
    counters.merge(vf.counters)
    v_blocks = vf.blocks
    u_blocks: list = []
    X = np.asfortranarray(vf.R[:khat, :khat].T)

    for j in range(1, j_max + 1):
        if j % 2 == 1:
            Vk = blocks_q_columns(v_blocks, n, khat)
            Z = np.asfortranarray(A @ Vk)
            counters.add_pass()
            counters.add_blas3(m, n, khat)
            uf = qr_blocked(Z, khat, b)
            counters.merge(uf.counters)
            u_blocks = uf.blocks
            X = uf.R[:khat, :khat]
        else:
            Uk = blocks_q_columns(u_blocks, m, khat)
            Z = np.asfortranarray((Uk.T @ A).T)
            counters.add_pass()
            counters.add_blas3(khat, m, n)
            vf = qr_blocked(Z, khat, b)
            counters.merge(vf.counters)
            v_blocks = vf.blocks
            X = np.asfortranarray(vf.R[:khat, :khat].T)

    sigma_est = np.abs(np.diag(X))
    if refine_sigma:
        sigma_est = jacobi_svd(X)[1]
    return TuxvResult(
        _compose_all(u_blocks), X, _compose_all(v_blocks), sigma_est, khat, counters, m, n
    )
