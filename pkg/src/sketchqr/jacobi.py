"""One-sided Jacobi SVD, the deterministic accuracy baseline.

Hestenes rotations orthogonalize column pairs of a working copy of A; the
accumulated rotations form V, column norms give the singular values, and the
normalized columns give U. Pairs within one round of the round-robin schedule
are disjoint, so each round is applied as one batched rotation. Convergence is
quadratic once the columns are nearly orthogonal, which keeps the residual
far below the 1e-10 contract at the matrix sizes this library targets.
"""

from __future__ import annotations

import numpy as np

from .validation import check_matrix

__all__ = ["jacobi_svd"]

_MAX_SWEEPS = 60
_PAIR_TOL = 1e-15


def _round_robin(n: int):
    """Tournament schedule: n-1 rounds of disjoint pairs covering all pairs."""
    players = list(range(n)) if n % 2 == 0 else list(range(n)) + [-1]
    q = len(players)
    rounds = []
    for _ in range(q - 1):
        pairs = [
            (players[i], players[q - 1 - i])
            for i in range(q // 2)
            if players[i] >= 0 and players[q - 1 - i] >= 0
        ]
        rounds.append((np.array([p[0] for p in pairs]), np.array([p[1] for p in pairs])))
        players = [players[0]] + [players[-1]] + players[1:-1]
    return rounds


def _complete_basis(U: np.ndarray, r: int) -> None:
    """Fill columns r.. of U with an orthonormal completion of the first r.

    The complete QR of the leading block spans the same subspace with its
    first r columns, so the remaining ones are exactly the completion.
    """
    m, n = U.shape
    Q = np.linalg.qr(U[:, :r], mode="complete")[0]
    U[:, r:n] = Q[:, r:n]


def jacobi_svd(A):
    """Economy SVD (U, sigma, V) with A = U diag(sigma) V^T, sigma descending."""
    A = check_matrix(A, copy=True)
    m, n = A.shape
    if min(m, n) > 4096:
        raise ValueError("jacobi_svd targets desk-scale matrices (min dim <= 4096)")
    if m < n:
        V, s, U = jacobi_svd(A.T)
        return U, s, V
    if n == 0:
        return np.zeros((m, 0)), np.zeros(0), np.zeros((0, 0))

    W = A
    V = np.eye(n, order="F")
    scale = np.linalg.norm(W)
    if scale == 0.0:
        return np.eye(m, n), np.zeros(n), np.eye(n)

    rounds = _round_robin(n)
    for _ in range(_MAX_SWEEPS):
        rotated = False
        for ii, jj in rounds:
            Wi = W[:, ii]
            Wj = W[:, jj]
            alpha = np.einsum("ij,ij->j", Wi, Wi)
            beta = np.einsum("ij,ij->j", Wj, Wj)
            gamma = np.einsum("ij,ij->j", Wi, Wj)
            live = np.abs(gamma) > _PAIR_TOL * np.sqrt(alpha * beta)
            if not live.any():
                continue
            rotated = True
            ii = ii[live]
            jj = jj[live]
            a = alpha[live]
            b = beta[live]
            g = gamma[live]
            zeta = (b - a) / (2.0 * g)
            t = np.sign(zeta) / (np.abs(zeta) + np.sqrt(1.0 + zeta * zeta))
            t[zeta == 0.0] = 1.0
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = c * t
            Wi = W[:, ii].copy()
            Wj = W[:, jj]
            W[:, ii] = c * Wi - s * Wj
            W[:, jj] = s * Wi + c * Wj
            Vi = V[:, ii].copy()
            Vj = V[:, jj]
            V[:, ii] = c * Vi - s * Vj
            V[:, jj] = s * Vi + c * Vj
        if not rotated:
            break
    else:
        raise np.linalg.LinAlgError("Jacobi sweeps did not converge")

    sigma = np.linalg.norm(W, axis=0)
    order = np.argsort(-sigma, kind="stable")
    sigma = sigma[order]
    W = W[:, order]
    V = V[:, order]

    U = np.zeros((m, n), order="F")
    cutoff = sigma[0] * m * np.finfo(np.float64).eps
    r = int(np.count_nonzero(sigma > cutoff))
    if r:
        U[:, :r] = W[:, :r] / sigma[:r]
    if r < n:
        _complete_basis(U, r)
    return U, sigma, V
